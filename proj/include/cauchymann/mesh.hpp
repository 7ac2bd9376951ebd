// Uniform P1 triangulations of the rectangle (0,width) x (0,height) with the
// four tagged boundary segments used throughout this project:
//   Gamma1 = bottom (y=0), Gamma2 = top (y=height),
//   Gamma3 = left (x=0),   Gamma4 = right (x=width).
// Gamma1 carries the Cauchy data, Gamma2 is the reconstruction segment.

#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace cauchymann {

enum class SegmentId { gamma1 = 0, gamma2 = 1, gamma3 = 2, gamma4 = 3 };

inline constexpr int segment_index(SegmentId s) { return static_cast<int>(s); }

inline constexpr std::array<SegmentId, 4> all_segments{
    SegmentId::gamma1, SegmentId::gamma2, SegmentId::gamma3, SegmentId::gamma4};

struct BoundaryEdge {
    int a = -1;  // node indices, ordered by increasing arc parameter
    int b = -1;
};

struct Mesh {
    std::vector<std::array<double, 2>> nodes;
    std::vector<std::array<int, 3>> triangles;  // counter-clockwise
    std::array<std::vector<int>, 4> segment_nodes;
    std::array<std::vector<BoundaryEdge>, 4> segment_edges;
    int nx = 0;  // node counts per direction
    int ny = 0;
    double width = 0.0;
    double height = 0.0;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }

    double x_of(int node) const { return nodes[static_cast<std::size_t>(node)][0]; }
    double y_of(int node) const { return nodes[static_cast<std::size_t>(node)][1]; }

    // Arc-length parameter of a node along a segment (x on Gamma1/2, y on Gamma3/4).
    double arc_coordinate(SegmentId seg, int node) const {
        return (seg == SegmentId::gamma1 || seg == SegmentId::gamma2) ? x_of(node) : y_of(node);
    }

    const std::vector<int>& chain(SegmentId seg) const {
        return segment_nodes[static_cast<std::size_t>(segment_index(seg))];
    }
    const std::vector<BoundaryEdge>& edges(SegmentId seg) const {
        return segment_edges[static_cast<std::size_t>(segment_index(seg))];
    }
};

// Grid of nx*ny nodes, each cell split by the diagonal from its lower-left to
// its upper-right corner (fixed orientation for determinism). Chains are
// ordered by increasing arc parameter and include the corner nodes; corner
// ownership for Dirichlet enforcement is resolved in fem.hpp (vertical
// segments win).
inline Mesh build_rect_mesh(double width, double height, int nx, int ny) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("build_rect_mesh: nx and ny must be >= 2");
    if (!(width > 0.0) || !(height > 0.0))
        throw std::invalid_argument("build_rect_mesh: width and height must be positive");

    Mesh mesh;
    mesh.nx = nx;
    mesh.ny = ny;
    mesh.width = width;
    mesh.height = height;

    const double hx = width / (nx - 1);
    const double hy = height / (ny - 1);
    mesh.nodes.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            mesh.nodes.push_back({i == nx - 1 ? width : i * hx, j == ny - 1 ? height : j * hy});

    auto id = [nx](int i, int j) { return j * nx + i; };

    mesh.triangles.reserve(2u * static_cast<std::size_t>(nx - 1) * static_cast<std::size_t>(ny - 1));
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const int ll = id(i, j), lr = id(i + 1, j), ul = id(i, j + 1), ur = id(i + 1, j + 1);
            mesh.triangles.push_back({ll, lr, ur});
            mesh.triangles.push_back({ll, ur, ul});
        }
    }

    auto& g1 = mesh.segment_nodes[segment_index(SegmentId::gamma1)];
    auto& g2 = mesh.segment_nodes[segment_index(SegmentId::gamma2)];
    auto& g3 = mesh.segment_nodes[segment_index(SegmentId::gamma3)];
    auto& g4 = mesh.segment_nodes[segment_index(SegmentId::gamma4)];
    for (int i = 0; i < nx; ++i) g1.push_back(id(i, 0));
    for (int i = 0; i < nx; ++i) g2.push_back(id(i, ny - 1));
    for (int j = 0; j < ny; ++j) g3.push_back(id(0, j));
    for (int j = 0; j < ny; ++j) g4.push_back(id(nx - 1, j));

    for (auto seg : all_segments) {
        const auto& c = mesh.chain(seg);
        auto& e = mesh.segment_edges[static_cast<std::size_t>(segment_index(seg))];
        for (std::size_t k = 0; k + 1 < c.size(); ++k) e.push_back({c[k], c[k + 1]});
    }
    return mesh;
}

inline const std::vector<int>& segment_chain(const Mesh& mesh, SegmentId seg) {
    return mesh.chain(seg);
}

inline double triangle_area(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const double x0 = mesh.x_of(tri[0]), y0 = mesh.y_of(tri[0]);
    const double x1 = mesh.x_of(tri[1]), y1 = mesh.y_of(tri[1]);
    const double x2 = mesh.x_of(tri[2]), y2 = mesh.y_of(tri[2]);
    return 0.5 * ((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0));
}

// Plain-text listing, one entity per line, for debugging.
inline void dump_mesh(std::ostream& os, const Mesh& mesh) {
    os << "nodes " << mesh.node_count() << "\n";
    for (int i = 0; i < mesh.node_count(); ++i)
        os << i << " " << mesh.x_of(i) << " " << mesh.y_of(i) << "\n";
    os << "triangles " << mesh.triangle_count() << "\n";
    for (const auto& t : mesh.triangles) os << t[0] << " " << t[1] << " " << t[2] << "\n";
    for (auto seg : all_segments) {
        os << "segment " << segment_index(seg) + 1;
        for (int n : mesh.chain(seg)) os << " " << n;
        os << "\n";
    }
}

}  // namespace cauchymann
