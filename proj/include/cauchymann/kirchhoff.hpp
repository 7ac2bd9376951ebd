// Diffusion coefficients q and the Kirchhoff transformation Q(t) = int_0^t q,
// which turns -div(q(u) grad u) = h into -Lap(Q(u)) = h. Q is strictly
// increasing with Q' = q >= q_min > 0, so its inverse is globally defined.

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "cauchymann/field.hpp"

namespace cauchymann {

struct Coefficient {
    std::function<double(double)> q;
    std::function<double(double)> q_prime;
    double q_min = 1.0;
    double q_max = 1.0;
    // Range of arguments over which the declared bounds hold. q = 1 + t^2 has
    // no global upper bound; its q_max is declared over the a-priori solution
    // range only.
    double bound_lo = -50.0;
    double bound_hi = 50.0;
};

inline Coefficient unit_coefficient() {
    return {[](double) { return 1.0; }, [](double) { return 0.0; }, 1.0, 1.0, -50.0, 50.0};
}

// q(t) = 1 + t^2 (first and third numerical studies).
inline Coefficient quadratic_coefficient() {
    return {[](double t) { return 1.0 + t * t; }, [](double t) { return 2.0 * t; },
            1.0, 101.0, -10.0, 10.0};
}

// q(t) = 2 + sin t (second numerical study).
inline Coefficient sine_coefficient() {
    return {[](double t) { return 2.0 + std::sin(t); }, [](double t) { return std::cos(t); },
            1.0, 3.0, -50.0, 50.0};
}

namespace detail {

// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double m, double b,
                      double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, lm, m, fa, flm, fm);
    const double right = simpson(f, m, rm, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return adaptive_simpson(f, a, b, fa, fm, fb, simpson(f, a, m, b, fa, fm, fb), tol, 48);
}

}  // namespace detail

struct KirchhoffMap {
    Coefficient coeff;
    // Optional closed forms; when absent, Q falls back to adaptive Simpson and
    // Q_inv to a safeguarded Newton bracketed by [y/q_max, y/q_min].
    std::function<double(double)> closed_q;
    std::function<double(double)> closed_q_inv;

    double Q(double t) const {
        if (closed_q) return closed_q(t);
        return detail::integrate(coeff.q, 0.0, t, 1e-13);
    }

    double Q_inv(double y) const {
        if (closed_q_inv) return closed_q_inv(y);
        return newton_inverse(y);
    }

    double newton_inverse(double y) const {
        if (y == 0.0) return 0.0;
        // q_min (t) <= Q(t) <= q_max (t) for t >= 0 and reversed for t < 0,
        // so the root lies between y/q_max and y/q_min.
        double lo = y / coeff.q_max, hi = y / coeff.q_min;
        if (lo > hi) std::swap(lo, hi);
        double t = 0.5 * (lo + hi);
        for (int it = 0; it < 100; ++it) {
            const double f = Q(t) - y;
            if (std::fabs(f) <= 1e-12 * std::max(1.0, std::fabs(y))) return t;
            (f > 0.0 ? hi : lo) = t;
            const double step = f / coeff.q(t);
            double next = t - step;
            if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);  // bisection safeguard
            t = next;
        }
        return t;
    }
};

inline KirchhoffMap numeric_kirchhoff(Coefficient c) { return {std::move(c), nullptr, nullptr}; }

// Q(t) = t + t^3/3 inverted through the Cardano root of t^3 + 3t - 3y = 0,
// polished by two Newton steps to bring the residual to rounding level.
inline KirchhoffMap quadratic_kirchhoff() {
    KirchhoffMap map;
    map.coeff = quadratic_coefficient();
    map.closed_q = [](double t) { return t + t * t * t / 3.0; };
    map.closed_q_inv = [](double y) {
        const double half = 1.5 * y;
        const double root = std::cbrt(half + std::sqrt(half * half + 1.0));
        double t = root - 1.0 / root;
        for (int i = 0; i < 2; ++i) t -= (t + t * t * t / 3.0 - y) / (1.0 + t * t);
        return t;
    };
    return map;
}

// Q(t) = 2t + 1 - cos t, inverted by Newton (Q' = 2 + sin t >= 1).
inline KirchhoffMap sine_kirchhoff() {
    KirchhoffMap map;
    map.coeff = sine_coefficient();
    map.closed_q = [](double t) { return 2.0 * t + 1.0 - std::cos(t); };
    map.closed_q_inv = [](double y) {
        double t = 0.5 * y;
        for (int i = 0; i < 60; ++i) {
            const double f = 2.0 * t + 1.0 - std::cos(t) - y;
            if (std::fabs(f) <= 1e-13 * std::max(1.0, std::fabs(y))) break;
            t -= f / (2.0 + std::sin(t));
        }
        return t;
    };
    return map;
}

inline GridFunction transform_field(const KirchhoffMap& map, const GridFunction& u) {
    GridFunction out = u;
    for (auto& v : out.values) v = map.Q(v);
    return out;
}

inline GridFunction inverse_field(const KirchhoffMap& map, const GridFunction& big_u) {
    GridFunction out = big_u;
    for (auto& v : out.values) v = map.Q_inv(v);
    return out;
}

inline TraceFunction transform_trace(const KirchhoffMap& map, const TraceFunction& t) {
    TraceFunction out = t;
    for (auto& v : out.values) v = map.Q(v);
    return out;
}

inline TraceFunction inverse_trace(const KirchhoffMap& map, const TraceFunction& t) {
    TraceFunction out = t;
    for (auto& v : out.values) v = map.Q_inv(v);
    return out;
}

}  // namespace cauchymann
