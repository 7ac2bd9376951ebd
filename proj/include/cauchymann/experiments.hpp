// The three numerical studies as reproducible configurations: manufactured
// Cauchy problems with known boundary traces, seeded noise injection, and the
// experiment driver tying mesh, problem, schedule and stopping together.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cauchymann/mann.hpp"
#include "cauchymann/operators.hpp"

namespace cauchymann {

struct ManufacturedProblem {
    std::string name;
    Coefficient q;
    KirchhoffMap kmap;
    std::function<double(double, double)> exact_u;
    std::function<double(double, double)> du_dx;
    std::function<double(double, double)> du_dy;
    std::function<double(double, double)> laplacian;
    Field h;
    std::function<double(double)> f;  // Dirichlet datum on Gamma1
    std::function<double(double)> g;  // Neumann datum on Gamma1
    std::function<double(double)> trace_dirichlet;  // exact u on Gamma2
    std::function<double(double)> trace_neumann;    // exact q(u) u_nu on Gamma2
    double initial_value = 0.0;                     // constant initial iterate
    double width = 1.0;
    double height = 0.5;
};

// First and third studies: q(t) = 1 + t^2 and the harmonic solution
// u = x^2 - y^2 + 5x + 2y - 3xy on (0,1) x (0,1/2). The reconstruction target
// is u(x, 1/2) = x^2 + 7/2 x + 3/4 with endpoint values 3/4 and 21/4.
inline ManufacturedProblem problem_harmonic() {
    ManufacturedProblem p;
    p.name = "harmonic";
    p.q = quadratic_coefficient();
    p.kmap = quadratic_kirchhoff();
    p.exact_u = [](double x, double y) { return x * x - y * y + 5 * x + 2 * y - 3 * x * y; };
    p.du_dx = [](double x, double y) { return 2 * x + 5 - 3 * y; };
    p.du_dy = [](double x, double y) { return -2 * y + 2 - 3 * x; };
    p.laplacian = [](double, double) { return 0.0; };
    p.h = [p_u = p.exact_u, p_x = p.du_dx, p_y = p.du_dy](double x, double y) {
        const double ux = p_x(x, y), uy = p_y(x, y);
        return -2.0 * p_u(x, y) * (ux * ux + uy * uy);
    };
    p.f = [](double x) { return x * x + 5 * x; };
    p.g = [](double x) {
        const double fx = x * x + 5 * x;
        return (1.0 + fx * fx) * (3 * x - 2);
    };
    p.trace_dirichlet = [](double x) { return x * x + 3.5 * x + 0.75; };
    p.trace_neumann = [](double x) {
        const double phi = x * x + 3.5 * x + 0.75;
        return (1.0 + phi * phi) * (1 - 3 * x);
    };
    p.initial_value = 0.0;
    return p;
}

// Second study: q(t) = 2 + sin t and u = cos(pi x) exp(y). The reconstruction
// target is cos(pi x) exp(1/2) with endpoint values +-exp(1/2).
inline ManufacturedProblem problem_nonharmonic() {
    const double pi = std::acos(-1.0);
    ManufacturedProblem p;
    p.name = "nonharmonic";
    p.q = sine_coefficient();
    p.kmap = sine_kirchhoff();
    p.exact_u = [pi](double x, double y) { return std::cos(pi * x) * std::exp(y); };
    p.du_dx = [pi](double x, double y) { return -pi * std::sin(pi * x) * std::exp(y); };
    p.du_dy = [pi](double x, double y) { return std::cos(pi * x) * std::exp(y); };
    p.laplacian = [pi](double x, double y) {
        return (1.0 - pi * pi) * std::cos(pi * x) * std::exp(y);
    };
    p.h = [pi](double x, double y) {
        const double u = std::cos(pi * x) * std::exp(y);
        const double ux = -pi * std::sin(pi * x) * std::exp(y);
        const double uy = u;
        return (2.0 + std::sin(u)) * (pi * pi - 1.0) * u - std::cos(u) * (ux * ux + uy * uy);
    };
    p.f = [pi](double x) { return std::cos(pi * x); };
    p.g = [pi](double x) {
        const double fx = std::cos(pi * x);
        return -(2.0 + std::sin(fx)) * fx;
    };
    p.trace_dirichlet = [pi](double x) { return std::cos(pi * x) * std::exp(0.5); };
    p.trace_neumann = [pi](double x) {
        const double phi = std::cos(pi * x) * std::exp(0.5);
        return (2.0 + std::sin(phi)) * phi;
    };
    p.initial_value = 4.0;
    return p;
}

// -div(q(u) grad u) - h evaluated from the stored closed forms; vanishes
// identically for a consistent manufactured problem.
inline double manufactured_residual(const ManufacturedProblem& p, double x, double y) {
    const double u = p.exact_u(x, y);
    const double ux = p.du_dx(x, y), uy = p.du_dy(x, y);
    return -p.q.q_prime(u) * (ux * ux + uy * uy) - p.q.q(u) * p.laplacian(x, y) - p.h(x, y);
}

enum class NoiseTarget { dirichlet_only, neumann_only, both };

struct NoiseModel {
    double level = 0.0;
    std::uint32_t seed = 1;
    NoiseTarget target = NoiseTarget::both;
};

// Perturbation with i.i.d. uniform[-1,1] nodal values from the seeded
// generator (raw mt19937 draws, identical across standard libraries), zeroed
// at the endpoints to preserve compatibility, then scaled to the exact
// relative L2 level. level = 0 returns the input bit for bit.
inline TraceFunction add_noise(const TraceFunction& t, const NoiseModel& model) {
    if (model.level < 0.0) throw std::invalid_argument("add_noise: level must be >= 0");
    if (model.level == 0.0) return t;

    std::mt19937 gen(model.seed);
    TraceFunction e = t;
    for (auto& v : e.values)
        v = 2.0 * (static_cast<double>(gen()) / 4294967295.0) - 1.0;
    if (e.size() > 0) {
        e[0] = 0.0;
        e[e.size() - 1] = 0.0;
    }
    const double enorm = l2_norm_segment(e);
    if (enorm == 0.0) return t;
    const double scale = model.level * l2_norm_segment(t) / enorm;
    TraceFunction out = t;
    for (int i = 0; i < out.size(); ++i) out[i] += scale * e[i];
    return out;
}

// Samples the Cauchy data (possibly noisy) and side conditions on the mesh.
// For target `both`, f uses the model seed and g uses seed + 1 so the two
// perturbations are independent.
inline ProblemSpec make_problem_spec(const Mesh& mesh, const ManufacturedProblem& p,
                                     const NoiseModel& noise = {}) {
    ProblemSpec spec;
    spec.mesh = &mesh;
    spec.q = p.q;
    spec.kmap = p.kmap;
    spec.h = p.h;
    spec.cauchy_f = sample_trace(mesh, SegmentId::gamma1, p.f);
    spec.cauchy_g = sample_trace(mesh, SegmentId::gamma1, p.g);
    if (noise.level > 0.0) {
        if (noise.target != NoiseTarget::neumann_only)
            spec.cauchy_f = add_noise(spec.cauchy_f, noise);
        if (noise.target != NoiseTarget::dirichlet_only) {
            NoiseModel m = noise;
            m.seed = noise.seed + 1;
            spec.cauchy_g = add_noise(spec.cauchy_g, m);
        }
    }
    spec.extra_gamma3 = sample_trace(mesh, SegmentId::gamma3,
                                     [&p](double y) { return p.exact_u(0.0, y); });
    spec.extra_gamma4 = sample_trace(mesh, SegmentId::gamma4,
                                     [&p](double y) { return p.exact_u(p.width, y); });
    // cold starts on these strongly nonlinear problems spend ~30 damped
    // iterations in the global phase; warm starts use two or three
    spec.newton.max_iterations = 60;
    return spec;
}

// Constant initial iterate with the compatibility endpoints of the problem.
inline TraceFunction initial_iterate(const Mesh& mesh, const ManufacturedProblem& p,
                                     const ProblemSpec& spec) {
    TraceFunction psi(mesh, SegmentId::gamma2, p.initial_value);
    pin_endpoints(spec, psi);
    return psi;
}

enum class Approach { nonlinear_S, nonlinear_T, linear_kirchhoff };

struct DiscrepancyConfig {
    double mu = 2.5;
    double eps = 0.0;  // > 0 enables the rule
};

struct ExperimentSetup {
    ManufacturedProblem problem = problem_harmonic();
    int nx = 33;
    int ny = 17;
    SegmentingSchedule schedule = cesaro_schedule();
    double step_tol = 1e-2;
    int max_iter = 5000;
    std::optional<DiscrepancyConfig> discrepancy;
    std::optional<RestartConfig> restart;
    NoiseModel noise{};
    Approach approach = Approach::nonlinear_S;
};

struct ExperimentReport {
    std::shared_ptr<Mesh> mesh;
    IterationRecord record;
    TraceFunction truth;
    std::vector<double> errors;  // per recorded mean iterate, vs truth
    double initial_error = 0.0;
    double final_error = 0.0;
};

inline ExperimentReport run_experiment(const ExperimentSetup& setup) {
    ExperimentReport report;
    report.mesh = std::make_shared<Mesh>(
        build_rect_mesh(setup.problem.width, setup.problem.height, setup.nx, setup.ny));
    const Mesh& mesh = *report.mesh;
    const ProblemSpec spec = make_problem_spec(mesh, setup.problem, setup.noise);

    TraceOperator op;
    TraceFunction start;
    PinCallback pin;
    switch (setup.approach) {
        case Approach::nonlinear_S:
            op = make_S_operator(spec, /*normalized=*/false);
            start = initial_iterate(mesh, setup.problem, spec);
            pin = [&spec](TraceFunction& t) { pin_endpoints(spec, t); };
            report.truth = sample_trace(mesh, SegmentId::gamma2, setup.problem.trace_dirichlet);
            break;
        case Approach::nonlinear_T:
            op = make_T_operator(spec, /*normalized=*/false);
            start = TraceFunction(mesh, SegmentId::gamma2, 0.0);
            report.truth = sample_trace(mesh, SegmentId::gamma2, setup.problem.trace_neumann);
            break;
        case Approach::linear_kirchhoff:
            op = make_linear_T_operator(spec);
            start = TraceFunction(mesh, SegmentId::gamma2, 0.0);
            report.truth = sample_trace(mesh, SegmentId::gamma2, setup.problem.trace_neumann);
            break;
    }

    AffineSplit split;
    StoppingRule stop;
    stop.step_tol = setup.step_tol;
    stop.max_iter = setup.max_iter;
    if (setup.discrepancy && setup.discrepancy->eps > 0.0) {
        if (setup.approach != Approach::linear_kirchhoff)
            throw std::invalid_argument(
                "run_experiment: the discrepancy rule needs the linear (affine) path");
        split = affine_split(spec);
        stop = discrepancy_stop(split, split.offset, setup.discrepancy->mu,
                                setup.discrepancy->eps, setup.max_iter);
        stop.step_tol = setup.step_tol;
    }

    if (setup.restart)
        report.record = run_restarted(start, setup.schedule, op, *setup.restart, pin);
    else
        report.record = run_mann(start, setup.schedule, op, stop, pin);

    report.errors.reserve(report.record.v_history.size());
    for (const auto& v : report.record.v_history)
        report.errors.push_back(l2_dist_segment(v, report.truth));
    report.initial_error = report.errors.empty() ? 0.0 : report.errors.front();
    report.final_error = report.errors.empty() ? 0.0 : report.errors.back();
    return report;
}

}  // namespace cauchymann
