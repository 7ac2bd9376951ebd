// Row-compressed sparse matrices and the iterative solvers used by the FEM
// backend: diagonally preconditioned CG for SPD systems and BiCGStab for the
// nonsymmetric Newton systems.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cauchymann {

class SolverError : public std::runtime_error {
 public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Immutable CSR matrix. Assemble through SparseBuilder.
class SparseOperator {
 public:
    SparseOperator() = default;
    SparseOperator(int n, std::vector<int> row_ptr, std::vector<int> col, std::vector<double> val)
        : n_(n), row_ptr_(std::move(row_ptr)), col_(std::move(col)), val_(std::move(val)) {}

    int size() const { return n_; }

    double coeff(int i, int j) const {
        for (int k = row_ptr_[static_cast<std::size_t>(i)];
             k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
            if (col_[static_cast<std::size_t>(k)] == j) return val_[static_cast<std::size_t>(k)];
        return 0.0;
    }

    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        y.assign(static_cast<std::size_t>(n_), 0.0);
        for (int i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (int k = row_ptr_[static_cast<std::size_t>(i)];
                 k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
                acc += val_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])];
            y[static_cast<std::size_t>(i)] = acc;
        }
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        std::vector<double> y;
        apply(x, y);
        return y;
    }

    std::vector<double> diagonal() const {
        std::vector<double> d(static_cast<std::size_t>(n_), 0.0);
        for (int i = 0; i < n_; ++i) d[static_cast<std::size_t>(i)] = coeff(i, i);
        return d;
    }

    // Coordinate text format, one entry per line: i j value.
    void dump_coordinate(std::ostream& os) const {
        for (int i = 0; i < n_; ++i)
            for (int k = row_ptr_[static_cast<std::size_t>(i)];
                 k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
                os << i << " " << col_[static_cast<std::size_t>(k)] << " "
                   << val_[static_cast<std::size_t>(k)] << "\n";
    }

    template <typename Fn>
    void for_each_in_row(int i, Fn&& fn) const {
        for (int k = row_ptr_[static_cast<std::size_t>(i)];
             k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
            fn(col_[static_cast<std::size_t>(k)], val_[static_cast<std::size_t>(k)]);
    }

 private:
    int n_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_;
    std::vector<double> val_;
};

class SparseBuilder {
 public:
    explicit SparseBuilder(int n) : n_(n), rows_(static_cast<std::size_t>(n)) {}

    int size() const { return n_; }

    void add(int i, int j, double v) { rows_[static_cast<std::size_t>(i)][j] += v; }

    SparseOperator build() const {
        std::vector<int> row_ptr(static_cast<std::size_t>(n_) + 1, 0);
        std::size_t nnz = 0;
        for (const auto& r : rows_) nnz += r.size();
        std::vector<int> col;
        std::vector<double> val;
        col.reserve(nnz);
        val.reserve(nnz);
        for (int i = 0; i < n_; ++i) {
            for (const auto& [j, v] : rows_[static_cast<std::size_t>(i)]) {
                col.push_back(j);
                val.push_back(v);
            }
            row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<int>(col.size());
        }
        return SparseOperator(n_, std::move(row_ptr), std::move(col), std::move(val));
    }

 private:
    int n_ = 0;
    std::vector<std::map<int, double>> rows_;
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline std::vector<double> inverse_diagonal(const SparseOperator& a) {
    auto d = a.diagonal();
    for (auto& v : d) v = (v != 0.0) ? 1.0 / v : 1.0;
    return d;
}

}  // namespace detail

// Conjugate gradients with diagonal preconditioning. A must be symmetric
// positive definite; stops at relative residual <= tol.
inline std::vector<double> cg_solve(const SparseOperator& a, const std::vector<double>& b,
                                    double tol = 1e-12, int max_iter = 0) {
    const int n = a.size();
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("cg_solve: size mismatch");
    if (max_iter <= 0) max_iter = std::max(200, 20 * n);

    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    const double bnorm = detail::norm2(b);
    if (bnorm == 0.0) return x;

    const auto minv = detail::inverse_diagonal(a);
    std::vector<double> r = b;
    std::vector<double> z(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = minv[i] * r[i];
    std::vector<double> p = z, ap;
    double rz = detail::dot(r, z);

    for (int it = 0; it < max_iter; ++it) {
        if (detail::norm2(r) <= tol * bnorm) return x;
        a.apply(p, ap);
        const double pap = detail::dot(p, ap);
        if (!(pap > 0.0)) throw SolverError("cg_solve: matrix not positive definite");
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = minv[i] * r[i];
        const double rz_new = detail::dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    }
    if (detail::norm2(r) <= tol * bnorm) return x;
    throw SolverError("cg_solve: max iterations exceeded");
}

// BiCGStab with diagonal preconditioning, for the nonsymmetric Jacobians of
// the nonlinear mixed solves.
inline std::vector<double> bicgstab_solve(const SparseOperator& a, const std::vector<double>& b,
                                          double tol = 1e-12, int max_iter = 0) {
    const int n = a.size();
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("bicgstab_solve: size mismatch");
    if (max_iter <= 0) max_iter = std::max(200, 20 * n);

    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    const double bnorm = detail::norm2(b);
    if (bnorm == 0.0) return x;

    const auto minv = detail::inverse_diagonal(a);
    std::vector<double> r = b;
    const std::vector<double> r0 = r;
    std::vector<double> p(static_cast<std::size_t>(n), 0.0), v(static_cast<std::size_t>(n), 0.0);
    std::vector<double> phat(static_cast<std::size_t>(n)), shat(static_cast<std::size_t>(n)), t;
    double rho = 1.0, alpha = 1.0, omega = 1.0;

    for (int it = 0; it < max_iter; ++it) {
        if (detail::norm2(r) <= tol * bnorm) return x;
        const double rho_new = detail::dot(r0, r);
        if (rho_new == 0.0) throw SolverError("bicgstab_solve: breakdown (rho = 0)");
        if (it == 0) {
            p = r;
        } else {
            const double beta = (rho_new / rho) * (alpha / omega);
            for (std::size_t i = 0; i < p.size(); ++i)
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        rho = rho_new;
        for (std::size_t i = 0; i < phat.size(); ++i) phat[i] = minv[i] * p[i];
        a.apply(phat, v);
        const double r0v = detail::dot(r0, v);
        if (r0v == 0.0) throw SolverError("bicgstab_solve: breakdown (r0.v = 0)");
        alpha = rho / r0v;
        std::vector<double> s = r;
        for (std::size_t i = 0; i < s.size(); ++i) s[i] -= alpha * v[i];
        if (detail::norm2(s) <= tol * bnorm) {
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += alpha * phat[i];
            return x;
        }
        for (std::size_t i = 0; i < shat.size(); ++i) shat[i] = minv[i] * s[i];
        a.apply(shat, t);
        const double tt = detail::dot(t, t);
        if (tt == 0.0) throw SolverError("bicgstab_solve: breakdown (t = 0)");
        omega = detail::dot(t, s) / tt;
        if (omega == 0.0) throw SolverError("bicgstab_solve: breakdown (omega = 0)");
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += alpha * phat[i] + omega * shat[i];
        r = s;
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= omega * t[i];
    }
    if (detail::norm2(r) <= tol * bnorm) return x;
    throw SolverError("bicgstab_solve: max iterations exceeded");
}

}  // namespace cauchymann
