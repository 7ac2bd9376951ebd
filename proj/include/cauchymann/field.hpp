// Nodal fields on the mesh and on single boundary segments.

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cauchymann/mesh.hpp"

namespace cauchymann {

// Scalar field over the closure of the domain, evaluated at (x, y).
using Field = std::function<double(double, double)>;

inline Field constant_field(double c) {
    return [c](double, double) { return c; };
}

// P1 nodal field on the whole mesh.
struct GridFunction {
    const Mesh* mesh = nullptr;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(const Mesh& m, double fill = 0.0)
        : mesh(&m), values(static_cast<std::size_t>(m.node_count()), fill) {}

    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
    int size() const { return static_cast<int>(values.size()); }
};

inline GridFunction sample_grid(const Mesh& mesh, const Field& f) {
    GridFunction g(mesh);
    for (int i = 0; i < mesh.node_count(); ++i) g[i] = f(mesh.x_of(i), mesh.y_of(i));
    return g;
}

// Nodal function on one boundary segment's ordered node chain. The arc
// coordinates are carried along so norms and interpolation are self-contained.
struct TraceFunction {
    SegmentId segment = SegmentId::gamma2;
    std::vector<double> s;       // arc coordinates, strictly increasing
    std::vector<double> values;  // one value per chain node

    TraceFunction() = default;
    TraceFunction(const Mesh& mesh, SegmentId seg, double fill = 0.0) : segment(seg) {
        const auto& chain = mesh.chain(seg);
        s.reserve(chain.size());
        for (int n : chain) s.push_back(mesh.arc_coordinate(seg, n));
        values.assign(chain.size(), fill);
    }

    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
    int size() const { return static_cast<int>(values.size()); }
};

inline TraceFunction sample_trace(const Mesh& mesh, SegmentId seg,
                                  const std::function<double(double)>& f) {
    TraceFunction t(mesh, seg);
    for (int i = 0; i < t.size(); ++i) t[i] = f(t.s[static_cast<std::size_t>(i)]);
    return t;
}

// Piecewise-linear interpolation of a trace in its arc coordinate, exposed as
// a Field (the off-segment coordinate is ignored).
inline Field trace_to_field(const TraceFunction& t) {
    const bool horizontal = (t.segment == SegmentId::gamma1 || t.segment == SegmentId::gamma2);
    return [t, horizontal](double x, double y) {
        const double c = horizontal ? x : y;
        const auto& s = t.s;
        const int n = t.size();
        if (n == 1 || c <= s.front()) return t.values.front();
        if (c >= s.back()) return t.values.back();
        int lo = 0, hi = n - 1;
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            (s[static_cast<std::size_t>(mid)] <= c ? lo : hi) = mid;
        }
        const double s0 = s[static_cast<std::size_t>(lo)], s1 = s[static_cast<std::size_t>(lo + 1)];
        const double w = (c - s0) / (s1 - s0);
        return (1.0 - w) * t.values[static_cast<std::size_t>(lo)] +
               w * t.values[static_cast<std::size_t>(lo + 1)];
    };
}

namespace detail {

inline void require_matching(const TraceFunction& a, const TraceFunction& b) {
    if (a.segment != b.segment || a.size() != b.size())
        throw std::invalid_argument("trace functions live on different segments");
}

}  // namespace detail

// a := alpha*a + beta*b, elementwise.
inline void trace_axpby(double alpha, TraceFunction& a, double beta, const TraceFunction& b) {
    detail::require_matching(a, b);
    for (int i = 0; i < a.size(); ++i) a[i] = alpha * a[i] + beta * b[i];
}

}  // namespace cauchymann
