#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <sstream>

#include "cauchymann/mesh.hpp"

using namespace cauchymann;

TEST_CASE("node and triangle counts follow the grid formulas") {
    const Mesh small = build_rect_mesh(1.0, 0.5, 3, 2);
    CHECK(small.node_count() == 6);
    CHECK(small.triangle_count() == 4);

    const Mesh paper1 = build_rect_mesh(1.0, 0.5, 33, 17);
    CHECK(paper1.node_count() == 561);
    CHECK(paper1.triangle_count() == 1024);
    CHECK(paper1.chain(SegmentId::gamma2).size() == 33);

    const Mesh paper2 = build_rect_mesh(1.0, 0.5, 129, 65);
    CHECK(paper2.node_count() == 8385);
    CHECK(paper2.chain(SegmentId::gamma2).size() == 129);
}

TEST_CASE("invalid arguments are rejected") {
    CHECK_THROWS_AS(build_rect_mesh(1.0, 0.5, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_rect_mesh(1.0, 0.5, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_rect_mesh(0.0, 0.5, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_rect_mesh(1.0, -1.0, 3, 3), std::invalid_argument);
}

TEST_CASE("segment chains are ordered along their arc parameter") {
    const Mesh mesh = build_rect_mesh(1.0, 0.5, 3, 2);

    const auto& g1 = segment_chain(mesh, SegmentId::gamma1);
    REQUIRE(g1.size() == 3);
    for (int n : g1) CHECK(mesh.y_of(n) == 0.0);
    CHECK(mesh.x_of(g1[0]) < mesh.x_of(g1[1]));
    CHECK(mesh.x_of(g1[1]) < mesh.x_of(g1[2]));

    const auto& g2 = segment_chain(mesh, SegmentId::gamma2);
    REQUIRE(g2.size() == 3);
    for (int n : g2) CHECK(mesh.y_of(n) == 0.5);

    CHECK(segment_chain(mesh, SegmentId::gamma3).size() == 2);
    CHECK(segment_chain(mesh, SegmentId::gamma4).size() == 2);

    const Mesh fine = build_rect_mesh(1.0, 0.5, 33, 17);
    CHECK(segment_chain(fine, SegmentId::gamma2).size() == 33);
    for (auto seg : all_segments) {
        const auto& chain = fine.chain(seg);
        for (std::size_t i = 0; i + 1 < chain.size(); ++i)
            CHECK(fine.arc_coordinate(seg, chain[i]) < fine.arc_coordinate(seg, chain[i + 1]));
    }
}

TEST_CASE("triangle areas are positive and sum to the rectangle area") {
    const Mesh mesh = build_rect_mesh(1.0, 0.5, 33, 17);
    double total = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const double a = triangle_area(mesh, t);
        CHECK(a > 0.0);
        total += a;
    }
    CHECK(std::fabs(total - 0.5) <= 1e-12 * 0.5);
}

TEST_CASE("boundary edges partition the boundary; interior edges touch two triangles") {
    const Mesh mesh = build_rect_mesh(1.0, 0.5, 9, 5);

    std::map<std::pair<int, int>, int> edge_count;
    auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    for (const auto& tri : mesh.triangles)
        for (int e = 0; e < 3; ++e) edge_count[key(tri[e], tri[(e + 1) % 3])] += 1;

    std::set<std::pair<int, int>> boundary_edges;
    for (auto seg : all_segments)
        for (const auto& e : mesh.edges(seg)) {
            const bool fresh = boundary_edges.insert(key(e.a, e.b)).second;
            CHECK(fresh);  // no edge belongs to two segments
        }

    for (const auto& [edge, count] : edge_count) {
        if (boundary_edges.count(edge)) {
            CHECK(count == 1);
        } else {
            CHECK(count == 2);
        }
    }
    // every triangle edge seen exactly once belongs to a segment
    for (const auto& [edge, count] : edge_count)
        if (count == 1) CHECK(boundary_edges.count(edge) == 1);
}

TEST_CASE("segment interiors are disjoint and closures cover the boundary") {
    const Mesh mesh = build_rect_mesh(1.0, 0.5, 9, 5);
    std::map<int, int> interior_hits;
    std::set<int> all_chain_nodes;
    for (auto seg : all_segments) {
        const auto& chain = mesh.chain(seg);
        for (std::size_t i = 0; i < chain.size(); ++i) {
            all_chain_nodes.insert(chain[i]);
            if (i > 0 && i + 1 < chain.size()) interior_hits[chain[i]] += 1;
        }
    }
    for (const auto& [node, hits] : interior_hits) CHECK(hits == 1);

    std::set<int> boundary_nodes;
    for (int i = 0; i < mesh.node_count(); ++i) {
        const double x = mesh.x_of(i), y = mesh.y_of(i);
        if (x == 0.0 || y == 0.0 || x == 1.0 || y == 0.5) boundary_nodes.insert(i);
    }
    CHECK(all_chain_nodes == boundary_nodes);
}

TEST_CASE("gamma2 spacing is exactly uniform") {
    const Mesh mesh = build_rect_mesh(1.0, 0.5, 33, 17);
    const auto& chain = mesh.chain(SegmentId::gamma2);
    double smin = 1e300, smax = 0.0;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        const double ds = mesh.x_of(chain[i + 1]) - mesh.x_of(chain[i]);
        smin = std::min(smin, ds);
        smax = std::max(smax, ds);
    }
    CHECK(smax / smin == 1.0);
}

TEST_CASE("mesh dump lists entities one per line") {
    const Mesh mesh = build_rect_mesh(1.0, 0.5, 3, 2);
    std::ostringstream os;
    dump_mesh(os, mesh);
    const std::string text = os.str();
    CHECK(text.find("nodes 6") != std::string::npos);
    CHECK(text.find("triangles 4") != std::string::npos);
    CHECK(text.find("segment 1") != std::string::npos);
}
