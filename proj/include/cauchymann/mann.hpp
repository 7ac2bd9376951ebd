// Segmenting Mann (mean value) iteration machinery: schedules d_k, matrix-row
// reconstruction, the iteration drivers with step-change / discrepancy / max-
// iteration stopping, the restart strategy, and the uniform-convexity lemma
// check used by the convergence argument.
//
// A segmenting matrix is determined by its diagonal d_k = a_{k+1,k+1} through
//   a_{i+1,j} = (1 - a_{i+1,i+1}) a_{ij},
// and the iteration takes the two-term form
//   x_{k+1} = T(v_k),   v_{k+1} = (1 - d_k) v_k + d_k x_{k+1}.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cauchymann/operators.hpp"

namespace cauchymann {

struct SegmentingSchedule {
    std::string name;
    std::function<double(int)> d;  // diagonal d_k, k >= 1, values in [0,1]
    // Exact rational diagonal when available; enables exact row reconstruction.
    std::function<std::pair<std::int64_t, std::int64_t>(int)> d_exact;
};

// Cesaro matrix: row k is (1/k, ..., 1/k), i.e. d_k = 1/(k+1).
inline SegmentingSchedule cesaro_schedule() {
    return {"cesaro", [](int k) { return 1.0 / (k + 1); },
            [](int k) { return std::pair<std::int64_t, std::int64_t>{1, k + 1}; }};
}

inline SegmentingSchedule constant_schedule(double d) {
    if (!(d >= 0.0 && d <= 1.0))
        throw std::invalid_argument("constant_schedule: d must lie in [0,1]");
    return {"constant", [d](int) { return d; }, nullptr};
}

// A = I: the plain Picard iteration x_{k+1} = T(x_k).
inline SegmentingSchedule picard_schedule() {
    return {"picard", [](int) { return 1.0; },
            [](int) { return std::pair<std::int64_t, std::int64_t>{1, 1}; }};
}

namespace detail {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
};

inline bool rational_mul(const Rational& a, const Rational& b, Rational& out) {
    Rational x = a, y = b;
    // cross-reduce first to keep the factors small
    const std::int64_t g1 = std::gcd(x.num < 0 ? -x.num : x.num, y.den);
    const std::int64_t g2 = std::gcd(y.num < 0 ? -y.num : y.num, x.den);
    if (g1 > 1) {
        x.num /= g1;
        y.den /= g1;
    }
    if (g2 > 1) {
        y.num /= g2;
        x.den /= g2;
    }
    const __int128 n = static_cast<__int128>(x.num) * y.num;
    const __int128 d = static_cast<__int128>(x.den) * y.den;
    if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min() ||
        d > std::numeric_limits<std::int64_t>::max())
        return false;
    out.num = static_cast<std::int64_t>(n);
    out.den = static_cast<std::int64_t>(d);
    out.reduce();
    return true;
}

}  // namespace detail

// Lower-triangular n x n matrix rebuilt from the diagonal by the segmenting
// recursion, starting from a_11 = 1. Rows are exact when the schedule carries
// an exact rational diagonal (with double-recursion fallback on overflow).
inline std::vector<std::vector<double>> reconstruct_matrix_rows(const SegmentingSchedule& s,
                                                                int n) {
    if (n < 1) throw std::invalid_argument("reconstruct_matrix_rows: n must be >= 1");
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(n), 0.0));
    if (s.d_exact) {
        std::vector<detail::Rational> row{{1, 1}};
        bool exact_ok = true;
        rows[0][0] = 1.0;
        for (int i = 1; i < n && exact_ok; ++i) {
            const auto [num, den] = s.d_exact(i);
            detail::Rational di{num, den};
            di.reduce();
            detail::Rational one_minus{den - num, den};
            one_minus.reduce();
            for (auto& a : row) {
                if (!rational_mul(a, one_minus, a)) {
                    exact_ok = false;
                    break;
                }
            }
            if (!exact_ok) break;
            row.push_back(di);
            for (std::size_t j = 0; j < row.size(); ++j)
                rows[static_cast<std::size_t>(i)][j] =
                    static_cast<double>(row[j].num) / static_cast<double>(row[j].den);
        }
        if (exact_ok) return rows;
    }
    std::vector<double> row{1.0};
    rows[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const double di = s.d(i);
        for (auto& a : row) a *= (1.0 - di);
        row.push_back(di);
        for (std::size_t j = 0; j < row.size(); ++j) rows[static_cast<std::size_t>(i)][j] = row[j];
    }
    return rows;
}

enum class StopReason { step_tol, discrepancy, max_iter, operator_failure };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::step_tol: return "step_tol";
        case StopReason::discrepancy: return "discrepancy";
        case StopReason::max_iter: return "max_iter";
        case StopReason::operator_failure: return "operator_failure";
    }
    return "unknown";
}

struct DiscrepancyRule {
    const AffineSplit* split = nullptr;
    TraceFunction z_eps;
    double mu = 2.5;
    double eps = 0.0;
};

struct StoppingRule {
    double step_tol = 0.0;  // 0 disables the step-change test
    int max_iter = 5000;
    std::optional<DiscrepancyRule> discrepancy;
};

inline StoppingRule step_stop(double tol, int max_iter = 5000) {
    if (!(tol > 0.0)) throw std::invalid_argument("step_stop: tol must be positive");
    return {tol, max_iter, std::nullopt};
}

inline StoppingRule max_iter_stop(int n) {
    if (n < 1) throw std::invalid_argument("max_iter_stop: need at least one iteration");
    return {0.0, n, std::nullopt};
}

// Stop at k_eps = min{ k : || z_eps - (I - T_l) v_k || <= mu * eps }.
inline StoppingRule discrepancy_stop(const AffineSplit& split, TraceFunction z_eps, double mu,
                                     double eps, int max_iter = 5000) {
    if (!(mu > 1.0)) throw std::invalid_argument("discrepancy_stop: mu must exceed 1");
    if (!(eps > 0.0)) throw std::invalid_argument("discrepancy_stop: eps must be positive");
    StoppingRule rule{0.0, max_iter, DiscrepancyRule{&split, std::move(z_eps), mu, eps}};
    return rule;
}

struct IterationEntry {
    int k = 0;
    double x_norm = 0.0;
    double v_norm = 0.0;
    double step_change = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    bool restart = false;
};

struct IterationRecord {
    std::vector<IterationEntry> history;
    std::vector<TraceFunction> v_history;  // v_1 .. v_K
    TraceFunction final_v;
    StopReason stop_reason = StopReason::max_iter;
    std::vector<int> restart_marks;  // global iterate indices opening a new cycle
    std::optional<int> k_eps;
    int evaluations = 0;        // operator evaluations inside the iteration
    int extra_evaluations = 0;  // outer defect checks of the restart driver
    std::string failure_message;
};

inline std::optional<int> discrepancy_index(const IterationRecord& rec) { return rec.k_eps; }

// One segmenting step: x_next = op(v), v_next = (1 - d_k) v + d_k x_next.
inline std::pair<TraceFunction, TraceFunction> mann_step(const TraceFunction& v, double d_k,
                                                         const TraceOperator& op) {
    if (!(d_k >= 0.0 && d_k <= 1.0)) throw std::invalid_argument("mann_step: d_k must lie in [0,1]");
    TraceFunction x = op(v);
    TraceFunction v_next = v;
    trace_axpby(1.0 - d_k, v_next, d_k, x);
    return {std::move(v_next), std::move(x)};
}

using PinCallback = std::function<void(TraceFunction&)>;

namespace detail {

inline double discrepancy_residual(const DiscrepancyRule& rule, const TraceFunction& v) {
    TraceFunction r = rule.z_eps;       // z_eps - v + T_l v
    trace_axpby(1.0, r, -1.0, v);
    TraceFunction tl = rule.split->apply_linear(v);
    trace_axpby(1.0, r, 1.0, tl);
    return l2_norm_segment(r);
}

}  // namespace detail

// Mann iteration M(x_1, A, T). v_1 = x_1; the pin callback, when given, is
// applied to every mean iterate (and the start) before it is used or recorded.
inline IterationRecord run_mann(const TraceFunction& x1, const SegmentingSchedule& schedule,
                                const TraceOperator& op, const StoppingRule& stop,
                                const PinCallback& pin = {}) {
    IterationRecord rec;
    TraceFunction v = x1;
    if (pin) pin(v);

    const double v1_norm = l2_norm_segment(v);
    double residual = std::numeric_limits<double>::quiet_NaN();
    if (stop.discrepancy) residual = detail::discrepancy_residual(*stop.discrepancy, v);
    rec.history.push_back({1, v1_norm, v1_norm, std::numeric_limits<double>::quiet_NaN(), residual, false});
    rec.v_history.push_back(v);

    int k = 1;
    while (true) {
        if (stop.discrepancy && residual <= stop.discrepancy->mu * stop.discrepancy->eps) {
            rec.stop_reason = StopReason::discrepancy;
            rec.k_eps = k;
            break;
        }
        if (rec.evaluations >= stop.max_iter) {
            rec.stop_reason = StopReason::max_iter;
            break;
        }
        TraceFunction x;
        try {
            x = op(v);
        } catch (const SolverError& err) {
            rec.stop_reason = StopReason::operator_failure;
            rec.failure_message = err.what();
            break;
        }
        ++rec.evaluations;
        const double d_k = schedule.d(k);
        if (!(d_k >= 0.0 && d_k <= 1.0))
            throw std::invalid_argument("run_mann: schedule diagonal outside [0,1]");
        TraceFunction v_next = v;
        trace_axpby(1.0 - d_k, v_next, d_k, x);
        if (pin) pin(v_next);
        const double step = l2_dist_segment(v_next, v);
        ++k;
        v = std::move(v_next);
        residual = std::numeric_limits<double>::quiet_NaN();
        if (stop.discrepancy) residual = detail::discrepancy_residual(*stop.discrepancy, v);
        rec.history.push_back({k, l2_norm_segment(x), l2_norm_segment(v), step, residual, false});
        rec.v_history.push_back(v);
        if (stop.step_tol > 0.0 && step <= stop.step_tol) {
            rec.stop_reason = StopReason::step_tol;
            break;
        }
    }
    rec.final_v = v;
    return rec;
}

// Restart strategy: run inner Mann cycles (fixed evaluation count, or until
// the mean iterate stops changing by more than eps_prime), restart each cycle
// from the current mean with the schedule index reset to 1, and stop the outer
// loop once || op(v) - v || <= outer_eps (checked only when outer_eps > 0; the
// checks are counted in extra_evaluations). Exhausting max_restarts reports
// max_iter; reaching outer_eps reports step_tol.
struct RestartConfig {
    int period = 0;          // > 0: restart after exactly `period` evaluations
    double eps_prime = 0.0;  // > 0: restart when the step change drops below it
    double outer_eps = 0.0;
    int max_restarts = 4;
    int max_total_evaluations = 100000;
};

inline IterationRecord run_restarted(const TraceFunction& x1, const SegmentingSchedule& schedule,
                                     const TraceOperator& op, const RestartConfig& cfg,
                                     const PinCallback& pin = {}) {
    if (cfg.period < 1 && !(cfg.eps_prime > 0.0))
        throw std::invalid_argument("run_restarted: need period >= 1 or eps_prime > 0");

    IterationRecord rec;
    TraceFunction v = x1;
    if (pin) pin(v);
    bool stopped = false;

    for (int cycle = 0; cycle < cfg.max_restarts && !stopped; ++cycle) {
        if (cfg.outer_eps > 0.0) {
            TraceFunction x = op(v);
            ++rec.extra_evaluations;
            if (l2_dist_segment(x, v) <= cfg.outer_eps) {
                rec.stop_reason = StopReason::step_tol;
                stopped = true;
                break;
            }
        }
        StoppingRule inner;
        inner.step_tol = cfg.eps_prime;
        const int budget = cfg.max_total_evaluations - rec.evaluations;
        inner.max_iter = cfg.period > 0 ? std::min(cfg.period, budget) : budget;
        if (inner.max_iter < 1) {
            rec.stop_reason = StopReason::max_iter;
            stopped = true;
            break;
        }

        IterationRecord part = run_mann(v, schedule, op, inner, pin);

        const int base = rec.history.empty() ? 0 : rec.history.back().k;
        const std::size_t skip = rec.history.empty() ? 0 : 1;  // drop duplicated start
        for (std::size_t i = skip; i < part.history.size(); ++i) {
            IterationEntry e = part.history[i];
            e.k += base > 0 ? base - 1 : 0;
            if (i == skip && skip == 1) {
                e.restart = true;
                rec.restart_marks.push_back(e.k);
            }
            rec.history.push_back(e);
        }
        for (std::size_t i = skip; i < part.v_history.size(); ++i)
            rec.v_history.push_back(part.v_history[i]);
        rec.evaluations += part.evaluations;
        v = part.final_v;

        if (part.stop_reason == StopReason::operator_failure) {
            rec.stop_reason = StopReason::operator_failure;
            rec.failure_message = part.failure_message;
            stopped = true;
        } else if (rec.evaluations >= cfg.max_total_evaluations) {
            rec.stop_reason = StopReason::max_iter;
            stopped = true;
        }
    }
    if (!stopped) rec.stop_reason = StopReason::max_iter;
    rec.final_v = v;
    return rec;
}

// Uniform-convexity inequality with the Hilbert-space modulus
// delta(t) = 1 - sqrt(1 - t^2/4): for ||psi|| <= ||phi|| <= d and
// ||phi - psi|| >= eps,
//   ||(1-l) phi + l psi|| <= ||phi|| (1 - 2 delta(eps/d) min{l, 1-l}).
// eps < 0 selects the sharpest admissible choice eps = ||phi - psi||.
inline bool check_convexity_lemma(const std::vector<double>& phi, const std::vector<double>& psi,
                                  double lambda, double d, double eps = -1.0) {
    if (phi.size() != psi.size())
        throw std::invalid_argument("check_convexity_lemma: dimension mismatch");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("check_convexity_lemma: lambda must lie in [0,1]");
    if (!(d > 0.0)) throw std::invalid_argument("check_convexity_lemma: d must be positive");

    auto norm = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    };
    const double nphi = norm(phi), npsi = norm(psi);
    double dist = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double t = phi[i] - psi[i];
        dist += t * t;
    }
    dist = std::sqrt(dist);
    if (eps < 0.0) eps = dist;

    const double slack = 1e-12 * (1.0 + nphi + d);
    if (!(npsi <= nphi + slack && nphi <= d + slack))
        throw std::invalid_argument("check_convexity_lemma: requires ||psi|| <= ||phi|| <= d");
    if (!(eps > 0.0) || dist + slack < eps)
        throw std::invalid_argument("check_convexity_lemma: requires ||phi - psi|| >= eps > 0");

    std::vector<double> comb(phi.size());
    for (std::size_t i = 0; i < comb.size(); ++i)
        comb[i] = (1.0 - lambda) * phi[i] + lambda * psi[i];
    const double t = eps / d;
    const double delta = 1.0 - std::sqrt(std::max(0.0, 1.0 - 0.25 * t * t));
    const double rhs = nphi * (1.0 - 2.0 * delta * std::min(lambda, 1.0 - lambda));
    return norm(comb) <= rhs + slack;
}

// History CSV: one row per iterate. Missing values print empty fields.
inline void write_history_csv(std::ostream& os, const IterationRecord& rec,
                              const TraceFunction* truth = nullptr) {
    os << "k,step_change,l2_error,residual,restart\n";
    for (std::size_t i = 0; i < rec.history.size(); ++i) {
        const auto& e = rec.history[i];
        os << e.k << ",";
        if (!std::isnan(e.step_change)) os << e.step_change;
        os << ",";
        if (truth && i < rec.v_history.size()) os << l2_dist_segment(rec.v_history[i], *truth);
        os << ",";
        if (!std::isnan(e.residual)) os << e.residual;
        os << "," << (e.restart ? 1 : 0) << "\n";
    }
}

}  // namespace cauchymann
