#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "cauchymann/sparse.hpp"
#include "support/oracles.hpp"

using namespace cauchymann;

namespace {

SparseOperator identity(int n) {
    SparseBuilder b(n);
    for (int i = 0; i < n; ++i) b.add(i, i, 1.0);
    return b.build();
}

}  // namespace

TEST_CASE("cg solves the identity immediately") {
    const auto a = identity(4);
    const std::vector<double> b{1.0, -2.0, 3.0, 0.5};
    const auto x = cg_solve(a, b, 1e-12, 2);
    for (int i = 0; i < 4; ++i) CHECK(x[i] == Catch::Approx(b[i]).margin(1e-14));
}

TEST_CASE("cg solves a 2x2 diagonal system") {
    SparseBuilder builder(2);
    builder.add(0, 0, 1.0);
    builder.add(1, 1, 4.0);
    const auto x = cg_solve(builder.build(), {1.0, 4.0});
    CHECK(x[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(x[1] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("cg matches a dense factorization on a random SPD system") {
    const int n = 50;
    oracles::Rng rng(7);
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = rng.uniform(-1.0, 1.0);
    // A = M^T M + n I is SPD and dense
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    SparseBuilder builder(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = (i == j) ? static_cast<double>(n) : 0.0;
            for (int k = 0; k < n; ++k) s += m[k][i] * m[k][j];
            dense[i][j] = s;
            builder.add(i, j, s);
        }
    std::vector<double> b(n);
    for (auto& v : b) v = rng.uniform(-2.0, 2.0);

    const auto x_cg = cg_solve(builder.build(), b, 1e-14);
    const auto x_dense = oracles::dense_solve(dense, b);
    for (int i = 0; i < n; ++i) CHECK(x_cg[i] == Catch::Approx(x_dense[i]).margin(1e-8));
}

TEST_CASE("cg reports failure honestly") {
    SparseBuilder builder(2);
    builder.add(0, 0, 1.0);
    builder.add(1, 1, -1.0);  // indefinite
    CHECK_THROWS_AS(cg_solve(builder.build(), {1.0, 1.0}), SolverError);

    // too few iterations on a coupled system
    SparseBuilder chain(40);
    for (int i = 0; i < 40; ++i) {
        chain.add(i, i, 2.0);
        if (i + 1 < 40) {
            chain.add(i, i + 1, -1.0);
            chain.add(i + 1, i, -1.0);
        }
    }
    std::vector<double> ones(40, 1.0);
    CHECK_THROWS_AS(cg_solve(chain.build(), ones, 1e-14, 2), SolverError);
}

TEST_CASE("zero right-hand side short-circuits to zero") {
    const auto a = identity(3);
    const auto x = cg_solve(a, {0.0, 0.0, 0.0});
    for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("bicgstab matches a dense solve on a nonsymmetric system") {
    const int n = 30;
    oracles::Rng rng(11);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    SparseBuilder builder(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = (i == j) ? 10.0 : rng.uniform(-1.0, 1.0);
            dense[i][j] = v;
            builder.add(i, j, v);
        }
    std::vector<double> b(n);
    for (auto& v : b) v = rng.uniform(-1.0, 1.0);
    const auto x = bicgstab_solve(builder.build(), b, 1e-13);
    const auto x_ref = oracles::dense_solve(dense, b);
    for (int i = 0; i < n; ++i) CHECK(x[i] == Catch::Approx(x_ref[i]).margin(1e-8));
}

TEST_CASE("coordinate dump emits one entry per stored value") {
    SparseBuilder builder(2);
    builder.add(0, 0, 1.5);
    builder.add(0, 1, -0.5);
    builder.add(1, 1, 2.0);
    std::ostringstream os;
    builder.build().dump_coordinate(os);
    CHECK(os.str() == "0 0 1.5\n0 1 -0.5\n1 1 2\n");
}
