// The fixed-point operators on Gamma2 traces whose fixed points solve the
// Cauchy problem
//     -div(q(u) grad u) = h in Omega,  u = f and q(u) u_nu = g on Gamma1.
//
// Nonlinear path: L_n maps a Neumann trace to the Dirichlet trace of the mixed
// solve with Dirichlet f on Gamma1; L_d maps a Dirichlet trace to the
// recovered flux of the mixed solve with Neumann g on Gamma1. T = L_d o L_n
// iterates Neumann traces, S = L_n o L_d iterates Dirichlet traces.
//
// Linear (Kirchhoff) path: the same compositions for -Lap(U) = h with
// transformed Dirichlet data Q(f); Neumann data is invariant under the
// transformation. lin_T is affine; its linear part and offset are exposed via
// affine_split for the discrepancy-principle machinery.

#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>

#include "cauchymann/fem.hpp"
#include "cauchymann/field.hpp"
#include "cauchymann/kirchhoff.hpp"
#include "cauchymann/mesh.hpp"

namespace cauchymann {

struct ProblemSpec {
    const Mesh* mesh = nullptr;
    Coefficient q;
    KirchhoffMap kmap;
    Field h = constant_field(0.0);
    TraceFunction cauchy_f;  // Dirichlet datum on Gamma1
    TraceFunction cauchy_g;  // Neumann datum on Gamma1
    // Extra Dirichlet conditions on the vertical sides. When absent the sides
    // are treated as homogeneous Neumann segments in every internal solve.
    std::optional<TraceFunction> extra_gamma3;
    std::optional<TraceFunction> extra_gamma4;
    NewtonParams newton;
};

// Compatibility values the Gamma2 endpoints must take: the corner values of
// the side conditions (3/4 and 21/4 in the first study). No-op without them.
inline void pin_endpoints(const ProblemSpec& spec, TraceFunction& t) {
    if (t.size() == 0) return;
    if (spec.extra_gamma3) t[0] = spec.extra_gamma3->values.back();
    if (spec.extra_gamma4) t[t.size() - 1] = spec.extra_gamma4->values.back();
}

namespace detail {

inline void side_conditions(const ProblemSpec& spec, BoundarySpec& bc) {
    bc.at(SegmentId::gamma3) = spec.extra_gamma3 ? dirichlet(trace_to_field(*spec.extra_gamma3))
                                                 : neumann(constant_field(0.0));
    bc.at(SegmentId::gamma4) = spec.extra_gamma4 ? dirichlet(trace_to_field(*spec.extra_gamma4))
                                                 : neumann(constant_field(0.0));
}

inline void transformed_side_conditions(const ProblemSpec& spec, BoundarySpec& bc) {
    bc.at(SegmentId::gamma3) = spec.extra_gamma3
                                   ? dirichlet(trace_to_field(transform_trace(spec.kmap, *spec.extra_gamma3)))
                                   : neumann(constant_field(0.0));
    bc.at(SegmentId::gamma4) = spec.extra_gamma4
                                   ? dirichlet(trace_to_field(transform_trace(spec.kmap, *spec.extra_gamma4)))
                                   : neumann(constant_field(0.0));
}

// Fluxes already known to the flux recovery in the L_d solves: the Cauchy
// Neumann datum on Gamma1 and the zero flux of Neumann side segments.
inline std::array<std::optional<Field>, 4> known_fluxes_for_ld(const ProblemSpec& spec) {
    std::array<std::optional<Field>, 4> known;
    known[static_cast<std::size_t>(segment_index(SegmentId::gamma1))] = trace_to_field(spec.cauchy_g);
    if (!spec.extra_gamma3)
        known[static_cast<std::size_t>(segment_index(SegmentId::gamma3))] = constant_field(0.0);
    if (!spec.extra_gamma4)
        known[static_cast<std::size_t>(segment_index(SegmentId::gamma4))] = constant_field(0.0);
    return known;
}

inline TraceFunction scaled(TraceFunction t, double factor) {
    for (auto& v : t.values) v *= factor;
    return t;
}

// Two-case normalization of eq. (gl:barT_def) against the raw input norm.
// At ||phi|| = 0 the scaled branch degenerates; its continuous limit is 0.
inline TraceFunction normalize_against(const TraceFunction& in, TraceFunction out) {
    const double in_norm = l2_norm_segment(in);
    const double out_norm = l2_norm_segment(out);
    if (in_norm == 0.0) {
        if (out_norm == 0.0) return out;
        for (auto& v : out.values) v = 0.0;
        return out;
    }
    if (out_norm <= in_norm) return out;
    return scaled(std::move(out), in_norm / out_norm);
}

}  // namespace detail

// L_n: Neumann trace on Gamma2 -> Dirichlet trace of the (MP) solve with
// u = f on Gamma1, q(w) w_nu = phi on Gamma2.
inline TraceFunction op_Ln(const ProblemSpec& spec, const TraceFunction& phi,
                           GridFunction* warm = nullptr) {
    BoundarySpec bc;
    bc.at(SegmentId::gamma1) = dirichlet(trace_to_field(spec.cauchy_f));
    bc.at(SegmentId::gamma2) = neumann(trace_to_field(phi));
    detail::side_conditions(spec, bc);
    GridFunction w = solve_nonlinear_mixed(*spec.mesh, spec.q, bc, spec.h, spec.newton,
                                           (warm && warm->size() > 0) ? warm : nullptr);
    if (warm) *warm = w;
    return dirichlet_trace(w, SegmentId::gamma2);
}

// L_d: Dirichlet trace on Gamma2 -> consistent flux q(v) v_nu of the (MP)
// solve with q(v) v_nu = g on Gamma1, v = psi on Gamma2.
inline TraceFunction op_Ld(const ProblemSpec& spec, const TraceFunction& psi,
                           GridFunction* warm = nullptr) {
    BoundarySpec bc;
    bc.at(SegmentId::gamma1) = neumann(trace_to_field(spec.cauchy_g));
    bc.at(SegmentId::gamma2) = dirichlet(trace_to_field(psi));
    detail::side_conditions(spec, bc);
    GridFunction v = solve_nonlinear_mixed(*spec.mesh, spec.q, bc, spec.h, spec.newton,
                                           (warm && warm->size() > 0) ? warm : nullptr);
    if (warm) *warm = v;
    return neumann_trace(*spec.mesh, v, spec.q, spec.h, detail::known_fluxes_for_ld(spec),
                         SegmentId::gamma2);
}

inline TraceFunction op_T(const ProblemSpec& spec, const TraceFunction& phi,
                          GridFunction* warm_ln = nullptr, GridFunction* warm_ld = nullptr) {
    return op_Ld(spec, op_Ln(spec, phi, warm_ln), warm_ld);
}

// S = L_n o L_d iterates Dirichlet traces; the iterate's endpoints are
// overwritten with the compatibility values first (inert for the solve, which
// resolves corners from the side conditions anyway).
inline TraceFunction op_S(const ProblemSpec& spec, const TraceFunction& psi,
                          GridFunction* warm_ld = nullptr, GridFunction* warm_ln = nullptr) {
    TraceFunction pinned = psi;
    pin_endpoints(spec, pinned);
    return op_Ln(spec, op_Ld(spec, pinned, warm_ld), warm_ln);
}

inline TraceFunction op_Tbar(const ProblemSpec& spec, const TraceFunction& phi,
                             GridFunction* warm_ln = nullptr, GridFunction* warm_ld = nullptr) {
    return detail::normalize_against(phi, op_T(spec, phi, warm_ln, warm_ld));
}

inline TraceFunction op_Sbar(const ProblemSpec& spec, const TraceFunction& psi,
                             GridFunction* warm_ld = nullptr, GridFunction* warm_ln = nullptr) {
    return detail::normalize_against(psi, op_S(spec, psi, warm_ld, warm_ln));
}

// Linear path. Dirichlet data enters transformed, Neumann data unchanged; the
// transformed problem is -Lap(U) = h.

inline TraceFunction lin_Ln(const ProblemSpec& spec, const TraceFunction& phi) {
    BoundarySpec bc;
    bc.at(SegmentId::gamma1) = dirichlet(trace_to_field(transform_trace(spec.kmap, spec.cauchy_f)));
    bc.at(SegmentId::gamma2) = neumann(trace_to_field(phi));
    detail::transformed_side_conditions(spec, bc);
    const GridFunction big_u = solve_linear_mixed(*spec.mesh, bc, spec.h);
    return dirichlet_trace(big_u, SegmentId::gamma2);
}

inline TraceFunction lin_Ld(const ProblemSpec& spec, const TraceFunction& big_psi) {
    BoundarySpec bc;
    bc.at(SegmentId::gamma1) = neumann(trace_to_field(spec.cauchy_g));
    bc.at(SegmentId::gamma2) = dirichlet(trace_to_field(big_psi));
    detail::transformed_side_conditions(spec, bc);
    const GridFunction big_u = solve_linear_mixed(*spec.mesh, bc, spec.h);
    return neumann_trace(*spec.mesh, big_u, unit_coefficient(), spec.h,
                         detail::known_fluxes_for_ld(spec), SegmentId::gamma2);
}

inline TraceFunction lin_T(const ProblemSpec& spec, const TraceFunction& phi) {
    return lin_Ld(spec, lin_Ln(spec, phi));
}

// lin_T(phi) = T_l(phi) + z_{f,g}: offset z = lin_T(0) and linear part
// T_l(phi) = lin_T(phi) - z. (I - T_l) phi = z is the affine fixed-point
// equation of the transformed problem.
struct AffineSplit {
    TraceFunction offset;
    std::function<TraceFunction(const TraceFunction&)> apply_linear;
};

inline AffineSplit affine_split(const ProblemSpec& spec) {
    AffineSplit split;
    split.offset = lin_T(spec, TraceFunction(*spec.mesh, SegmentId::gamma2, 0.0));
    const TraceFunction offset = split.offset;
    split.apply_linear = [&spec, offset](const TraceFunction& phi) {
        TraceFunction out = lin_T(spec, phi);
        trace_axpby(1.0, out, -1.0, offset);
        return out;
    };
    return split;
}

// Operator functors for the iteration drivers: same maps with warm-started
// Newton across evaluations. Caches are per-functor; do not share one functor
// across threads.

using TraceOperator = std::function<TraceFunction(const TraceFunction&)>;

inline TraceOperator make_T_operator(const ProblemSpec& spec, bool normalized) {
    auto warm_ln = std::make_shared<GridFunction>();
    auto warm_ld = std::make_shared<GridFunction>();
    return [&spec, normalized, warm_ln, warm_ld](const TraceFunction& phi) {
        return normalized ? op_Tbar(spec, phi, warm_ln.get(), warm_ld.get())
                          : op_T(spec, phi, warm_ln.get(), warm_ld.get());
    };
}

inline TraceOperator make_S_operator(const ProblemSpec& spec, bool normalized) {
    auto warm_ld = std::make_shared<GridFunction>();
    auto warm_ln = std::make_shared<GridFunction>();
    return [&spec, normalized, warm_ld, warm_ln](const TraceFunction& psi) {
        return normalized ? op_Sbar(spec, psi, warm_ld.get(), warm_ln.get())
                          : op_S(spec, psi, warm_ld.get(), warm_ln.get());
    };
}

inline TraceOperator make_linear_T_operator(const ProblemSpec& spec) {
    return [&spec](const TraceFunction& phi) { return lin_T(spec, phi); };
}

}  // namespace cauchymann
