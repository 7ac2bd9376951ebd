// P1 Galerkin discretization of the linear and nonlinear mixed boundary value
// problems
//     -div(q(u) grad u) = h  in Omega,   u = .. / q(u) u_nu = ..  on each side,
// plus trace extraction and the L2 norms used by the iterations.
//
// Quadrature: 3-point mid-edge rule on triangles (exact for quadratics) with
// nodal interpolation of q(u); 2-point Gauss per boundary edge. Dirichlet rows
// are eliminated exactly by nodal interpolation of the data.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cauchymann/field.hpp"
#include "cauchymann/kirchhoff.hpp"
#include "cauchymann/mesh.hpp"
#include "cauchymann/sparse.hpp"

namespace cauchymann {

enum class ConditionKind { dirichlet, neumann };

struct BoundaryCondition {
    ConditionKind kind = ConditionKind::neumann;
    Field data = constant_field(0.0);
};

// Exactly one condition per boundary segment.
struct BoundarySpec {
    std::array<BoundaryCondition, 4> side{};

    BoundaryCondition& at(SegmentId seg) { return side[static_cast<std::size_t>(segment_index(seg))]; }
    const BoundaryCondition& at(SegmentId seg) const {
        return side[static_cast<std::size_t>(segment_index(seg))];
    }

    bool has_dirichlet() const {
        for (const auto& c : side)
            if (c.kind == ConditionKind::dirichlet) return true;
        return false;
    }
};

inline BoundaryCondition dirichlet(Field data) { return {ConditionKind::dirichlet, std::move(data)}; }
inline BoundaryCondition neumann(Field data) { return {ConditionKind::neumann, std::move(data)}; }

struct NewtonParams {
    int max_iterations = 25;
    double residual_tol = 1e-10;  // absolute, Euclidean norm of the residual vector
    double initial_step = 1.0;
    int max_halvings = 10;
};

struct CgParams {
    double tol = 1e-12;
    int max_iter = 0;  // 0 = automatic
};

namespace detail {

struct ElementGeometry {
    std::array<int, 3> n;
    std::array<double, 3> gx, gy;  // basis gradients, constant per element
    double area;
};

inline ElementGeometry element_geometry(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    ElementGeometry e;
    e.n = tri;
    const double x0 = mesh.x_of(tri[0]), y0 = mesh.y_of(tri[0]);
    const double x1 = mesh.x_of(tri[1]), y1 = mesh.y_of(tri[1]);
    const double x2 = mesh.x_of(tri[2]), y2 = mesh.y_of(tri[2]);
    const double det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
    e.area = 0.5 * det;
    e.gx = {(y1 - y2) / det, (y2 - y0) / det, (y0 - y1) / det};
    e.gy = {(x2 - x1) / det, (x0 - x2) / det, (x1 - x0) / det};
    return e;
}

inline double edge_length(const Mesh& mesh, const BoundaryEdge& e) {
    const double dx = mesh.x_of(e.b) - mesh.x_of(e.a);
    const double dy = mesh.y_of(e.b) - mesh.y_of(e.a);
    return std::sqrt(dx * dx + dy * dy);
}

// Two-point Gauss rule on the unit interval.
inline constexpr std::array<double, 2> gauss2{0.21132486540518711775, 0.78867513459481288225};

inline void add_edge_flux(const Mesh& mesh, const BoundaryEdge& e, const Field& flux,
                          std::vector<double>& b) {
    const double xa = mesh.x_of(e.a), ya = mesh.y_of(e.a);
    const double xb = mesh.x_of(e.b), yb = mesh.y_of(e.b);
    const double len = edge_length(mesh, e);
    for (double xi : gauss2) {
        const double g = flux(xa + xi * (xb - xa), ya + xi * (yb - ya));
        b[static_cast<std::size_t>(e.a)] += 0.5 * len * g * (1.0 - xi);
        b[static_cast<std::size_t>(e.b)] += 0.5 * len * g * xi;
    }
}

struct DirichletData {
    std::vector<char> is_dirichlet;
    std::vector<double> value;
};

// Assignment order Gamma1, Gamma2, Gamma3, Gamma4; later assignments win, so
// the vertical segments own the corner values and Dirichlet beats Neumann at
// shared nodes.
inline DirichletData dirichlet_data(const Mesh& mesh, const BoundarySpec& bc) {
    DirichletData d;
    d.is_dirichlet.assign(static_cast<std::size_t>(mesh.node_count()), 0);
    d.value.assign(static_cast<std::size_t>(mesh.node_count()), 0.0);
    for (auto seg : all_segments) {
        const auto& c = bc.at(seg);
        if (c.kind != ConditionKind::dirichlet) continue;
        for (int n : mesh.chain(seg)) {
            d.is_dirichlet[static_cast<std::size_t>(n)] = 1;
            d.value[static_cast<std::size_t>(n)] = c.data(mesh.x_of(n), mesh.y_of(n));
        }
    }
    return d;
}

struct ReducedSystem {
    SparseOperator matrix;
    std::vector<double> rhs;
    std::vector<int> free_nodes;  // reduced index -> mesh node
};

inline ReducedSystem reduce(const Mesh& mesh, const SparseOperator& a,
                            const std::vector<double>& b, const DirichletData& d) {
    ReducedSystem sys;
    std::vector<int> to_reduced(static_cast<std::size_t>(mesh.node_count()), -1);
    for (int i = 0; i < mesh.node_count(); ++i) {
        if (!d.is_dirichlet[static_cast<std::size_t>(i)]) {
            to_reduced[static_cast<std::size_t>(i)] = static_cast<int>(sys.free_nodes.size());
            sys.free_nodes.push_back(i);
        }
    }
    const int m = static_cast<int>(sys.free_nodes.size());
    SparseBuilder builder(m);
    sys.rhs.assign(static_cast<std::size_t>(m), 0.0);
    for (int r = 0; r < m; ++r) {
        const int i = sys.free_nodes[static_cast<std::size_t>(r)];
        double rhs = b[static_cast<std::size_t>(i)];
        a.for_each_in_row(i, [&](int j, double v) {
            const int c = to_reduced[static_cast<std::size_t>(j)];
            if (c >= 0)
                builder.add(r, c, v);
            else
                rhs -= v * d.value[static_cast<std::size_t>(j)];
        });
        sys.rhs[static_cast<std::size_t>(r)] = rhs;
    }
    sys.matrix = builder.build();
    return sys;
}

inline GridFunction scatter(const Mesh& mesh, const ReducedSystem& sys,
                            const std::vector<double>& x, const DirichletData& d) {
    GridFunction u(mesh);
    for (int i = 0; i < mesh.node_count(); ++i)
        u[i] = d.is_dirichlet[static_cast<std::size_t>(i)] ? d.value[static_cast<std::size_t>(i)] : 0.0;
    for (std::size_t r = 0; r < sys.free_nodes.size(); ++r)
        u[sys.free_nodes[r]] = x[r];
    return u;
}

}  // namespace detail

// Stiffness with nodally interpolated weight: the mid-edge rule on the linear
// interpolant reduces the element factor to area * mean(nodal weights).
inline SparseOperator assemble_weighted_stiffness(const Mesh& mesh, const GridFunction& weight) {
    if (weight.size() != mesh.node_count())
        throw std::invalid_argument("assemble_weighted_stiffness: weight size mismatch");
    SparseBuilder builder(mesh.node_count());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto e = detail::element_geometry(mesh, t);
        const double w0 = weight[e.n[0]], w1 = weight[e.n[1]], w2 = weight[e.n[2]];
        if (0.5 * (w0 + w1) <= 0.0 || 0.5 * (w1 + w2) <= 0.0 || 0.5 * (w0 + w2) <= 0.0)
            throw std::invalid_argument("assemble_weighted_stiffness: non-positive weight");
        const double factor = e.area * (w0 + w1 + w2) / 3.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                builder.add(e.n[static_cast<std::size_t>(i)], e.n[static_cast<std::size_t>(j)],
                            factor * (e.gx[static_cast<std::size_t>(i)] * e.gx[static_cast<std::size_t>(j)] +
                                      e.gy[static_cast<std::size_t>(i)] * e.gy[static_cast<std::size_t>(j)]));
    }
    return builder.build();
}

// Load vector b_i = (h, phi_i)_Omega + sum over Neumann segments (flux, phi_i).
inline std::vector<double> assemble_load(const Mesh& mesh, const Field& h,
                                         const std::array<std::optional<Field>, 4>& neumann_flux) {
    std::vector<double> b(static_cast<std::size_t>(mesh.node_count()), 0.0);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto e = detail::element_geometry(mesh, t);
        std::array<double, 3> mid_h;  // edge midpoints opposite to local nodes 2,0,1
        const auto& n = e.n;
        auto midpoint_value = [&](int a, int bidx) {
            return h(0.5 * (mesh.x_of(n[static_cast<std::size_t>(a)]) + mesh.x_of(n[static_cast<std::size_t>(bidx)])),
                     0.5 * (mesh.y_of(n[static_cast<std::size_t>(a)]) + mesh.y_of(n[static_cast<std::size_t>(bidx)])));
        };
        mid_h[0] = midpoint_value(0, 1);
        mid_h[1] = midpoint_value(1, 2);
        mid_h[2] = midpoint_value(2, 0);
        const double w = e.area / 6.0;  // (area/3) * phi_i(midpoint) with phi = 1/2
        b[static_cast<std::size_t>(n[0])] += w * (mid_h[0] + mid_h[2]);
        b[static_cast<std::size_t>(n[1])] += w * (mid_h[0] + mid_h[1]);
        b[static_cast<std::size_t>(n[2])] += w * (mid_h[1] + mid_h[2]);
    }
    for (auto seg : all_segments) {
        const auto& flux = neumann_flux[static_cast<std::size_t>(segment_index(seg))];
        if (!flux) continue;
        for (const auto& edge : mesh.edges(seg)) detail::add_edge_flux(mesh, edge, *flux, b);
    }
    return b;
}

namespace detail {

inline std::array<std::optional<Field>, 4> neumann_fields(const BoundarySpec& bc) {
    std::array<std::optional<Field>, 4> flux;
    for (auto seg : all_segments)
        if (bc.at(seg).kind == ConditionKind::neumann)
            flux[static_cast<std::size_t>(segment_index(seg))] = bc.at(seg).data;
    return flux;
}

}  // namespace detail

// Galerkin solution of -Lap(u) = h with the given mixed conditions.
inline GridFunction solve_linear_mixed(const Mesh& mesh, const BoundarySpec& bc, const Field& h,
                                       const CgParams& cg = {}) {
    if (!bc.has_dirichlet())
        throw std::invalid_argument("solve_linear_mixed: all-Neumann problem is singular");
    const GridFunction one(mesh, 1.0);
    const auto a = assemble_weighted_stiffness(mesh, one);
    const auto b = assemble_load(mesh, h, detail::neumann_fields(bc));
    const auto d = detail::dirichlet_data(mesh, bc);
    auto sys = detail::reduce(mesh, a, b, d);
    const auto x = cg_solve(sys.matrix, sys.rhs, cg.tol, cg.max_iter);
    return detail::scatter(mesh, sys, x, d);
}

namespace detail {

inline GridFunction nodal_coefficient(const Mesh& mesh, const Coefficient& q,
                                      const GridFunction& u) {
    GridFunction w(mesh);
    for (int i = 0; i < mesh.node_count(); ++i) w[i] = q.q(u[i]);
    return w;
}

// Residual F_i(u) = (q(u) grad u, grad phi_i) - b_i over all nodes.
inline std::vector<double> nonlinear_residual(const Mesh& mesh, const Coefficient& q,
                                              const GridFunction& u, const std::vector<double>& b) {
    const auto a = assemble_weighted_stiffness(mesh, nodal_coefficient(mesh, q, u));
    auto r = a.apply(u.values);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline double free_norm(const std::vector<double>& r, const DirichletData& d) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (!d.is_dirichlet[i]) s += r[i] * r[i];
    return std::sqrt(s);
}

// Exact Jacobian of the discrete residual: the weighted stiffness plus the
// derivative of the nodally interpolated coefficient,
//   B_ij = (area/3) q'(u_j) (grad u . grad phi_i)  for j a node of T.
inline SparseOperator nonlinear_jacobian(const Mesh& mesh, const Coefficient& q,
                                         const GridFunction& u) {
    SparseBuilder builder(mesh.node_count());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto e = element_geometry(mesh, t);
        const std::array<double, 3> uv{u[e.n[0]], u[e.n[1]], u[e.n[2]]};
        const double ux = uv[0] * e.gx[0] + uv[1] * e.gx[1] + uv[2] * e.gx[2];
        const double uy = uv[0] * e.gy[0] + uv[1] * e.gy[1] + uv[2] * e.gy[2];
        const double factor = e.area * (q.q(uv[0]) + q.q(uv[1]) + q.q(uv[2])) / 3.0;
        for (int i = 0; i < 3; ++i) {
            const double grad_u_dot_gi =
                ux * e.gx[static_cast<std::size_t>(i)] + uy * e.gy[static_cast<std::size_t>(i)];
            for (int j = 0; j < 3; ++j) {
                const double stiff =
                    factor * (e.gx[static_cast<std::size_t>(i)] * e.gx[static_cast<std::size_t>(j)] +
                              e.gy[static_cast<std::size_t>(i)] * e.gy[static_cast<std::size_t>(j)]);
                const double deriv =
                    (e.area / 3.0) * q.q_prime(uv[static_cast<std::size_t>(j)]) * grad_u_dot_gi;
                builder.add(e.n[static_cast<std::size_t>(i)], e.n[static_cast<std::size_t>(j)],
                            stiff + deriv);
            }
        }
    }
    return builder.build();
}

}  // namespace detail

// Newton with residual-decrease line search for the nonlinear mixed problem.
// The caller may pass the previous iterate to warm-start (the Mann sequence
// changes slowly, which cuts Newton to a couple of steps).
inline GridFunction solve_nonlinear_mixed(const Mesh& mesh, const Coefficient& q,
                                          const BoundarySpec& bc, const Field& h,
                                          const NewtonParams& params = {},
                                          const GridFunction* initial = nullptr,
                                          std::vector<double>* residual_history = nullptr) {
    if (!bc.has_dirichlet())
        throw std::invalid_argument("solve_nonlinear_mixed: all-Neumann problem is singular");
    const auto b = assemble_load(mesh, h, detail::neumann_fields(bc));
    const auto d = detail::dirichlet_data(mesh, bc);

    GridFunction u = initial ? *initial : GridFunction(mesh);
    if (u.size() != mesh.node_count())
        throw std::invalid_argument("solve_nonlinear_mixed: initial guess size mismatch");
    for (int i = 0; i < mesh.node_count(); ++i)
        if (d.is_dirichlet[static_cast<std::size_t>(i)]) u[i] = d.value[static_cast<std::size_t>(i)];

    auto r = detail::nonlinear_residual(mesh, q, u, b);
    double res = detail::free_norm(r, d);
    if (residual_history) residual_history->push_back(res);

    for (int it = 0; it < params.max_iterations; ++it) {
        if (res <= params.residual_tol) return u;

        const auto jac = detail::nonlinear_jacobian(mesh, q, u);
        std::vector<double> neg_r = r;
        for (auto& v : neg_r) v = -v;
        // The correction vanishes on Dirichlet nodes, so reduce against
        // zero-valued Dirichlet data.
        detail::DirichletData d_zero = d;
        std::fill(d_zero.value.begin(), d_zero.value.end(), 0.0);
        auto sys = detail::reduce(mesh, jac, neg_r, d_zero);
        const auto delta = bicgstab_solve(sys.matrix, sys.rhs, 1e-12);

        double alpha = params.initial_step;
        bool accepted = false;
        for (int halving = 0; halving <= params.max_halvings; ++halving) {
            GridFunction trial = u;
            for (std::size_t k = 0; k < sys.free_nodes.size(); ++k)
                trial[sys.free_nodes[k]] += alpha * delta[k];
            auto r_trial = detail::nonlinear_residual(mesh, q, trial, b);
            const double res_trial = detail::free_norm(r_trial, d);
            if (res_trial < res) {
                u = std::move(trial);
                r = std::move(r_trial);
                res = res_trial;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) throw SolverError("solve_nonlinear_mixed: line search stalled");
        if (residual_history) residual_history->push_back(res);
    }
    if (res <= params.residual_tol) return u;
    throw SolverError("solve_nonlinear_mixed: Newton did not converge");
}

inline TraceFunction dirichlet_trace(const GridFunction& u, SegmentId seg) {
    const Mesh& mesh = *u.mesh;
    TraceFunction t(mesh, seg);
    const auto& chain = mesh.chain(seg);
    for (std::size_t i = 0; i < chain.size(); ++i) t[static_cast<int>(i)] = u[chain[i]];
    return t;
}

namespace detail {

// Adjacent segment at a chain endpoint: horizontal segments end on the
// vertical ones and vice versa.
inline SegmentId corner_neighbor(SegmentId seg, bool at_chain_end) {
    if (seg == SegmentId::gamma1 || seg == SegmentId::gamma2)
        return at_chain_end ? SegmentId::gamma4 : SegmentId::gamma3;
    return at_chain_end ? SegmentId::gamma2 : SegmentId::gamma1;
}

// Gaussian elimination with partial pivoting for the small banded recovery
// systems (segment chains, at most a few hundred unknowns).
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) >
                std::fabs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(k)]))
                piv = i;
        if (a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(k)] == 0.0)
            throw SolverError("neumann_trace: singular boundary mass system");
        std::swap(a[static_cast<std::size_t>(k)], a[static_cast<std::size_t>(piv)]);
        std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(piv)]);
        for (int i = k + 1; i < n; ++i) {
            const double f = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] /
                             a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j)
                a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                    f * a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(k)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j)
            s -= a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    return x;
}

}  // namespace detail

// Consistent variational flux q(u) du/dnu on a boundary segment.
//
// For every chain node whose boundary support lies in the segment (or in
// segments with known flux, whose contribution is subtracted through the
// load), the assembled residual
//   r_i = (q(u) grad u, grad phi_i) - (h, phi_i) - sum_known (flux, phi_i)
// is the exact discrete flux functional, giving a mass-matrix row
// (M lambda)_i = r_i. A corner shared with a segment of *unknown* flux mixes
// the two conormal fluxes (which genuinely jump across the corner) into one
// residual, so that row is unusable; it is replaced by a cubic extrapolation
// closure (vanishing third difference) at that end of the chain.
inline TraceFunction neumann_trace(const Mesh& mesh, const GridFunction& u, const Coefficient& q,
                                   const Field& h,
                                   const std::array<std::optional<Field>, 4>& known_flux,
                                   SegmentId seg) {
    if (known_flux[static_cast<std::size_t>(segment_index(seg))])
        throw std::invalid_argument("neumann_trace: segment flux already known");

    const auto r_full = detail::nonlinear_residual(mesh, q, u, assemble_load(mesh, h, known_flux));
    const auto& chain = mesh.chain(seg);
    const int n = static_cast<int>(chain.size());

    const bool closure_lo =
        !known_flux[static_cast<std::size_t>(segment_index(detail::corner_neighbor(seg, false)))];
    const bool closure_hi =
        !known_flux[static_cast<std::size_t>(segment_index(detail::corner_neighbor(seg, true)))];
    if ((closure_lo || closure_hi) && n < 4)
        throw SolverError("neumann_trace: chain too short for the corner closure");

    std::vector<std::vector<double>> a(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);

    auto arc = [&](int i) { return mesh.arc_coordinate(seg, chain[static_cast<std::size_t>(i)]); };
    auto add_mass_row = [&](int i) {
        auto& row = a[static_cast<std::size_t>(i)];
        if (i > 0) {
            const double len = arc(i) - arc(i - 1);
            row[static_cast<std::size_t>(i - 1)] += len / 6.0;
            row[static_cast<std::size_t>(i)] += len / 3.0;
        }
        if (i + 1 < n) {
            const double len = arc(i + 1) - arc(i);
            row[static_cast<std::size_t>(i + 1)] += len / 6.0;
            row[static_cast<std::size_t>(i)] += len / 3.0;
        }
        rhs[static_cast<std::size_t>(i)] = r_full[static_cast<std::size_t>(chain[static_cast<std::size_t>(i)])];
    };

    for (int i = 0; i < n; ++i) {
        if (i == 0 && closure_lo) {
            a[0][0] = 1.0;
            a[0][1] = -3.0;
            a[0][2] = 3.0;
            a[0][3] = -1.0;
            rhs[0] = 0.0;
        } else if (i == n - 1 && closure_hi) {
            auto& row = a[static_cast<std::size_t>(i)];
            row[static_cast<std::size_t>(n - 1)] = 1.0;
            row[static_cast<std::size_t>(n - 2)] = -3.0;
            row[static_cast<std::size_t>(n - 3)] = 3.0;
            row[static_cast<std::size_t>(n - 4)] = -1.0;
            rhs[static_cast<std::size_t>(i)] = 0.0;
        } else {
            add_mass_row(i);
        }
    }

    const auto lambda = detail::solve_dense(std::move(a), std::move(rhs));
    TraceFunction t(mesh, seg);
    for (int i = 0; i < n; ++i) t[i] = lambda[static_cast<std::size_t>(i)];
    return t;
}

// L2 norms induced by the consistent P1 mass matrices.

inline double l2_norm_segment(const TraceFunction& t) {
    double acc = 0.0;
    for (int i = 0; i + 1 < t.size(); ++i) {
        const double len = t.s[static_cast<std::size_t>(i + 1)] - t.s[static_cast<std::size_t>(i)];
        const double a = t[i], b = t[i + 1];
        acc += len / 3.0 * (a * a + a * b + b * b);
    }
    return std::sqrt(acc);
}

inline double l2_dist_segment(const TraceFunction& a, const TraceFunction& b) {
    detail::require_matching(a, b);
    TraceFunction diff = a;
    for (int i = 0; i < diff.size(); ++i) diff[i] -= b[i];
    return l2_norm_segment(diff);
}

inline double l2_norm_domain(const GridFunction& u) {
    const Mesh& mesh = *u.mesh;
    double acc = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        const double area = triangle_area(mesh, t);
        const double u0 = u[tri[0]], u1 = u[tri[1]], u2 = u[tri[2]];
        const double sum = u0 + u1 + u2;
        acc += area / 12.0 * (u0 * u0 + u1 * u1 + u2 * u2 + sum * sum);
    }
    return std::sqrt(acc);
}

inline double l2_dist_domain(const GridFunction& a, const GridFunction& b) {
    if (a.mesh != b.mesh || a.size() != b.size())
        throw std::invalid_argument("l2_dist_domain: mesh mismatch");
    GridFunction diff = a;
    for (int i = 0; i < diff.size(); ++i) diff[i] -= b[i];
    return l2_norm_domain(diff);
}

inline double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace cauchymann
