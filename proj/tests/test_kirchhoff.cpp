#include <catch2/catch_amalgamated.hpp>

#include "cauchymann/kirchhoff.hpp"
#include "cauchymann/mesh.hpp"
#include "support/oracles.hpp"

using namespace cauchymann;

TEST_CASE("closed-form transforms of the two study coefficients") {
    const auto quad = quadratic_kirchhoff();
    CHECK(quad.Q(1.0) == Catch::Approx(4.0 / 3.0).margin(1e-15));
    CHECK(quad.Q(0.0) == 0.0);
    CHECK(quad.Q_inv(4.0 / 3.0) == Catch::Approx(1.0).margin(1e-13));
    CHECK(quad.Q_inv(0.0) == 0.0);

    const auto sine = sine_kirchhoff();
    const double pi = std::acos(-1.0);
    CHECK(sine.Q(pi) == Catch::Approx(2.0 * pi + 2.0).margin(1e-14));
    CHECK(sine.Q(0.0) == 0.0);
    CHECK(sine.Q_inv(2.0 * pi + 2.0) == Catch::Approx(pi).margin(1e-12));
}

TEST_CASE("round trips hold on a random grid") {
    oracles::Rng rng(3);
    for (const auto& map : {quadratic_kirchhoff(), sine_kirchhoff()}) {
        for (int i = 0; i < 200; ++i) {
            const double y = rng.uniform(-300.0, 300.0);
            CHECK(map.Q(map.Q_inv(y)) == Catch::Approx(y).margin(1e-10 * std::max(1.0, std::fabs(y))));
        }
    }
}

TEST_CASE("numeric fallback agrees with the closed forms") {
    const auto closed = sine_kirchhoff();
    const auto numeric = numeric_kirchhoff(sine_coefficient());
    oracles::Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const double t = rng.uniform(-20.0, 20.0);
        CHECK(numeric.Q(t) == Catch::Approx(closed.Q(t)).margin(1e-11 * std::max(1.0, std::fabs(closed.Q(t)))));
    }
    for (int i = 0; i < 50; ++i) {
        const double y = rng.uniform(-40.0, 40.0);
        CHECK(numeric.Q_inv(y) == Catch::Approx(closed.Q_inv(y)).margin(1e-9));
    }
}

TEST_CASE("Q is strictly increasing with slope between the coefficient bounds") {
    oracles::Rng rng(9);
    const auto quad = quadratic_kirchhoff();
    for (int i = 0; i < 200; ++i) {
        double t1 = rng.uniform(-10.0, 10.0);
        double t2 = rng.uniform(-10.0, 10.0);
        if (t1 > t2) std::swap(t1, t2);
        if (t1 == t2) continue;
        const double dq = quad.Q(t2) - quad.Q(t1);
        CHECK(dq > 0.0);
        CHECK(dq >= quad.coeff.q_min * (t2 - t1) - 1e-12);
        CHECK(dq <= quad.coeff.q_max * (t2 - t1) + 1e-12);
    }
}

TEST_CASE("the transform derivative recovers q (Richardson check)") {
    const auto maps = {quadratic_kirchhoff(), sine_kirchhoff()};
    for (const auto& map : maps) {
        for (double t : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
            auto central = [&](double eps) { return (map.Q(t + eps) - map.Q(t - eps)) / (2 * eps); };
            const double d1 = central(1e-4), d2 = central(1e-5);
            const double richardson = (100.0 * d2 - d1) / 99.0;
            CHECK(richardson == Catch::Approx(map.coeff.q(t)).margin(1e-9));
        }
    }
}

TEST_CASE("declared coefficient bounds hold on their declared ranges") {
    const auto sine = sine_coefficient();
    for (int i = 0; i <= 1000; ++i) {
        const double t = -50.0 + 0.1 * i;
        CHECK(sine.q(t) >= sine.q_min);
        CHECK(sine.q(t) <= sine.q_max);
    }
    // q = 1 + t^2 has no global upper bound; its q_max is declared on the
    // a-priori solution range [-10, 10] only.
    const auto quad = quadratic_coefficient();
    for (int i = 0; i <= 400; ++i) {
        const double t = quad.bound_lo + (quad.bound_hi - quad.bound_lo) * i / 400.0;
        CHECK(quad.q(t) >= quad.q_min);
        CHECK(quad.q(t) <= quad.q_max);
    }
    CHECK(quad.q(50.0) > quad.q_max);
}

TEST_CASE("q_prime matches a finite-difference check") {
    for (const auto& c : {quadratic_coefficient(), sine_coefficient()}) {
        for (double t : {-2.0, 0.0, 1.3, 4.0}) {
            const double fd = oracles::fd_first(c.q, t, 1e-3);
            CHECK(c.q_prime(t) == Catch::Approx(fd).margin(1e-8));
        }
    }
}

TEST_CASE("field transforms apply nodewise and round-trip") {
    const Mesh mesh = build_rect_mesh(1.0, 0.5, 9, 5);
    const auto map = quadratic_kirchhoff();

    GridFunction zero(mesh, 0.0);
    const auto tz = transform_field(map, zero);
    for (double v : tz.values) CHECK(v == 0.0);

    // the harmonic study's exact field: Q(u) = u + u^3/3 nodewise
    GridFunction u(mesh);
    for (int i = 0; i < mesh.node_count(); ++i) {
        const double x = mesh.x_of(i), y = mesh.y_of(i);
        u[i] = x * x - y * y + 5 * x + 2 * y - 3 * x * y;
    }
    const auto big_u = transform_field(map, u);
    for (int i = 0; i < mesh.node_count(); ++i)
        CHECK(big_u[i] == Catch::Approx(u[i] + u[i] * u[i] * u[i] / 3.0).margin(1e-12));

    const auto back = inverse_field(map, big_u);
    for (int i = 0; i < mesh.node_count(); ++i)
        CHECK(back[i] == Catch::Approx(u[i]).margin(1e-10));
}
