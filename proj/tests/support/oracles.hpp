// Independent checking tools used by the test suites: quadrature, dense
// factorization, finite-difference derivatives and a deterministic RNG. These
// deliberately avoid the library's own code paths.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracles {

// Composite Simpson rule with n panels (n even).
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Gaussian elimination with partial pivoting on a dense matrix.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a[i][k]) > std::fabs(a[piv][k])) piv = i;
        if (a[piv][k] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

// Fourth-order central differences, one Richardson level (O(h^6)).

inline double d4_first(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double d4_second(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
           (12 * h * h);
}

inline double fd_first(const std::function<double(double)>& f, double x, double h = 1e-2) {
    return (16.0 * d4_first(f, x, h / 2) - d4_first(f, x, h)) / 15.0;
}

inline double fd_second(const std::function<double(double)>& f, double x, double h = 1e-2) {
    return (16.0 * d4_second(f, x, h / 2) - d4_second(f, x, h)) / 15.0;
}

inline double fd_dx(const std::function<double(double, double)>& f, double x, double y) {
    return fd_first([&](double t) { return f(t, y); }, x);
}

inline double fd_dy(const std::function<double(double, double)>& f, double x, double y) {
    return fd_first([&](double t) { return f(x, t); }, y);
}

inline double fd_laplacian(const std::function<double(double, double)>& f, double x, double y) {
    return fd_second([&](double t) { return f(t, y); }, x) +
           fd_second([&](double t) { return f(x, t); }, y);
}

struct Rng {
    std::mt19937 gen;
    explicit Rng(std::uint32_t seed) : gen(seed) {}
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(gen()) / 4294967295.0);
    }
    double normal() {
        // Box-Muller from raw draws, deterministic across platforms
        const double u1 = std::max(1e-12, uniform(0.0, 1.0));
        const double u2 = uniform(0.0, 1.0);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
};

}  // namespace oracles
