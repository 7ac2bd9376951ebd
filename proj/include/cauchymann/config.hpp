// Run configuration: JSON schema with strict validation (unknown keys are
// rejected, missing required keys are reported by their dotted path) and the
// mapping onto ExperimentSetup. Defaults reproduce the first study's setup.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cauchymann/experiments.hpp"

namespace cauchymann {

class ConfigError : public std::runtime_error {
 public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class ProblemKind { harmonic, nonharmonic, noisy_harmonic, custom };

struct RunConfig {
    ProblemKind problem = ProblemKind::harmonic;
    int nx = 33;
    int ny = 17;
    std::string schedule_type = "cesaro";  // cesaro | constant | picard
    double schedule_d = 0.5;
    double step_tol = 1e-2;
    int max_iter = 5000;
    bool discrepancy_enabled = false;
    double discrepancy_mu = 2.5;
    double discrepancy_eps = 0.0;
    std::string restart_type = "none";  // none | period | eps-prime
    int restart_period = 50;
    double restart_eps_prime = 0.0;
    int restart_max = 4;
    double restart_outer_eps = 0.0;
    double noise_level = 0.0;
    std::uint32_t noise_seed = 1;
    Approach approach = Approach::nonlinear_S;
    std::string output_dir = "out";

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                           const std::string& scope) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok)
            throw ConfigError("unknown key `" + (scope.empty() ? it.key() : scope + "." + it.key()) +
                              "`");
    }
}

inline const json& require(const json& obj, const char* key, const std::string& scope) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ConfigError("missing key `" + (scope.empty() ? std::string(key) : scope + "." + key) +
                          "`");
    return *it;
}

template <typename T>
T as(const json& v, const std::string& path) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("invalid value for key `" + path + "`");
    }
}

}  // namespace detail

inline std::string to_string(ProblemKind p) {
    switch (p) {
        case ProblemKind::harmonic: return "harmonic";
        case ProblemKind::nonharmonic: return "nonharmonic";
        case ProblemKind::noisy_harmonic: return "noisy-harmonic";
        case ProblemKind::custom: return "custom";
    }
    return "harmonic";
}

inline std::string to_string(Approach a) {
    switch (a) {
        case Approach::nonlinear_S: return "nonlinear-S";
        case Approach::nonlinear_T: return "nonlinear-T";
        case Approach::linear_kirchhoff: return "linear-kirchhoff";
    }
    return "nonlinear-S";
}

inline RunConfig parse_run_config(const nlohmann::json& j) {
    using detail::as;
    using detail::reject_unknown;
    using detail::require;

    if (!j.is_object()) throw ConfigError("configuration root must be a JSON object");
    reject_unknown(j, {"problem", "mesh", "schedule", "stop", "restart", "noise", "approach",
                       "output_dir"},
                   "");

    RunConfig cfg;
    if (j.contains("problem")) {
        const auto s = as<std::string>(j["problem"], "problem");
        if (s == "harmonic")
            cfg.problem = ProblemKind::harmonic;
        else if (s == "nonharmonic")
            cfg.problem = ProblemKind::nonharmonic;
        else if (s == "noisy-harmonic")
            cfg.problem = ProblemKind::noisy_harmonic;
        else if (s == "custom")
            cfg.problem = ProblemKind::custom;
        else
            throw ConfigError("invalid value for key `problem`: " + s);
    }
    if (j.contains("mesh")) {
        const auto& m = j["mesh"];
        if (!m.is_object()) throw ConfigError("`mesh` must be an object");
        reject_unknown(m, {"nx", "ny"}, "mesh");
        cfg.nx = as<int>(require(m, "nx", "mesh"), "mesh.nx");
        cfg.ny = as<int>(require(m, "ny", "mesh"), "mesh.ny");
        if (cfg.nx < 2 || cfg.ny < 2) throw ConfigError("mesh.nx and mesh.ny must be >= 2");
    }
    if (j.contains("schedule")) {
        const auto& s = j["schedule"];
        if (!s.is_object()) throw ConfigError("`schedule` must be an object");
        reject_unknown(s, {"type", "d"}, "schedule");
        cfg.schedule_type = as<std::string>(require(s, "type", "schedule"), "schedule.type");
        if (cfg.schedule_type == "constant") {
            cfg.schedule_d = as<double>(require(s, "d", "schedule"), "schedule.d");
            if (!(cfg.schedule_d >= 0.0 && cfg.schedule_d <= 1.0))
                throw ConfigError("schedule.d must lie in [0,1]");
        } else if (cfg.schedule_type != "cesaro" && cfg.schedule_type != "picard") {
            throw ConfigError("invalid value for key `schedule.type`: " + cfg.schedule_type);
        } else if (s.contains("d")) {
            throw ConfigError("unknown key `schedule.d` for schedule type " + cfg.schedule_type);
        }
    }
    if (j.contains("stop")) {
        const auto& s = j["stop"];
        if (!s.is_object()) throw ConfigError("`stop` must be an object");
        reject_unknown(s, {"step_tol", "max_iter", "discrepancy"}, "stop");
        if (s.contains("step_tol")) cfg.step_tol = as<double>(s["step_tol"], "stop.step_tol");
        if (s.contains("max_iter")) cfg.max_iter = as<int>(s["max_iter"], "stop.max_iter");
        if (cfg.max_iter < 1) throw ConfigError("stop.max_iter must be >= 1");
        if (s.contains("discrepancy")) {
            const auto& d = s["discrepancy"];
            if (!d.is_object()) throw ConfigError("`stop.discrepancy` must be an object");
            reject_unknown(d, {"mu", "eps"}, "stop.discrepancy");
            cfg.discrepancy_enabled = true;
            if (d.contains("mu")) cfg.discrepancy_mu = as<double>(d["mu"], "stop.discrepancy.mu");
            cfg.discrepancy_eps =
                as<double>(require(d, "eps", "stop.discrepancy"), "stop.discrepancy.eps");
            if (!(cfg.discrepancy_mu > 1.0)) throw ConfigError("stop.discrepancy.mu must exceed 1");
            if (!(cfg.discrepancy_eps > 0.0))
                throw ConfigError("stop.discrepancy.eps must be positive");
        }
    }
    if (j.contains("restart")) {
        const auto& r = j["restart"];
        if (!r.is_object()) throw ConfigError("`restart` must be an object");
        reject_unknown(r, {"type", "n", "value", "max_restarts", "outer_eps"}, "restart");
        cfg.restart_type = as<std::string>(require(r, "type", "restart"), "restart.type");
        if (cfg.restart_type == "period") {
            cfg.restart_period = as<int>(require(r, "n", "restart"), "restart.n");
            if (cfg.restart_period < 1) throw ConfigError("restart.n must be >= 1");
        } else if (cfg.restart_type == "eps-prime") {
            cfg.restart_eps_prime = as<double>(require(r, "value", "restart"), "restart.value");
            if (!(cfg.restart_eps_prime > 0.0)) throw ConfigError("restart.value must be positive");
        } else if (cfg.restart_type != "none") {
            throw ConfigError("invalid value for key `restart.type`: " + cfg.restart_type);
        }
        if (r.contains("max_restarts"))
            cfg.restart_max = as<int>(r["max_restarts"], "restart.max_restarts");
        if (r.contains("outer_eps"))
            cfg.restart_outer_eps = as<double>(r["outer_eps"], "restart.outer_eps");
        if (cfg.restart_max < 1) throw ConfigError("restart.max_restarts must be >= 1");
    }
    if (j.contains("noise")) {
        const auto& n = j["noise"];
        if (!n.is_object()) throw ConfigError("`noise` must be an object");
        reject_unknown(n, {"level", "seed"}, "noise");
        cfg.noise_level = as<double>(require(n, "level", "noise"), "noise.level");
        if (n.contains("seed")) cfg.noise_seed = as<std::uint32_t>(n["seed"], "noise.seed");
        if (cfg.noise_level < 0.0) throw ConfigError("noise.level must be >= 0");
    }
    if (j.contains("approach")) {
        const auto s = as<std::string>(j["approach"], "approach");
        if (s == "nonlinear-S")
            cfg.approach = Approach::nonlinear_S;
        else if (s == "nonlinear-T")
            cfg.approach = Approach::nonlinear_T;
        else if (s == "linear-kirchhoff")
            cfg.approach = Approach::linear_kirchhoff;
        else
            throw ConfigError("invalid value for key `approach`: " + s);
    }
    if (j.contains("output_dir")) cfg.output_dir = as<std::string>(j["output_dir"], "output_dir");
    return cfg;
}

inline nlohmann::json to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["problem"] = to_string(cfg.problem);
    j["mesh"] = {{"nx", cfg.nx}, {"ny", cfg.ny}};
    if (cfg.schedule_type == "constant")
        j["schedule"] = {{"type", "constant"}, {"d", cfg.schedule_d}};
    else
        j["schedule"] = {{"type", cfg.schedule_type}};
    j["stop"] = {{"step_tol", cfg.step_tol}, {"max_iter", cfg.max_iter}};
    if (cfg.discrepancy_enabled)
        j["stop"]["discrepancy"] = {{"mu", cfg.discrepancy_mu}, {"eps", cfg.discrepancy_eps}};
    if (cfg.restart_type == "period")
        j["restart"] = {{"type", "period"},
                        {"n", cfg.restart_period},
                        {"max_restarts", cfg.restart_max},
                        {"outer_eps", cfg.restart_outer_eps}};
    else if (cfg.restart_type == "eps-prime")
        j["restart"] = {{"type", "eps-prime"},
                        {"value", cfg.restart_eps_prime},
                        {"max_restarts", cfg.restart_max},
                        {"outer_eps", cfg.restart_outer_eps}};
    else
        j["restart"] = {{"type", "none"}};
    j["noise"] = {{"level", cfg.noise_level}, {"seed", cfg.noise_seed}};
    j["approach"] = to_string(cfg.approach);
    j["output_dir"] = cfg.output_dir;
    return j;
}

inline ExperimentSetup to_setup(const RunConfig& cfg) {
    ExperimentSetup setup;
    switch (cfg.problem) {
        case ProblemKind::harmonic: setup.problem = problem_harmonic(); break;
        case ProblemKind::nonharmonic: setup.problem = problem_nonharmonic(); break;
        case ProblemKind::noisy_harmonic: setup.problem = problem_harmonic(); break;
        case ProblemKind::custom:
            throw ConfigError(
                "problem `custom` is a library-level extension point and cannot be run through "
                "the CLI");
    }
    setup.nx = cfg.nx;
    setup.ny = cfg.ny;
    if (cfg.schedule_type == "cesaro")
        setup.schedule = cesaro_schedule();
    else if (cfg.schedule_type == "picard")
        setup.schedule = picard_schedule();
    else
        setup.schedule = constant_schedule(cfg.schedule_d);
    setup.step_tol = cfg.step_tol;
    setup.max_iter = cfg.max_iter;
    if (cfg.discrepancy_enabled)
        setup.discrepancy = DiscrepancyConfig{cfg.discrepancy_mu, cfg.discrepancy_eps};
    if (cfg.restart_type == "period") {
        RestartConfig rc;
        rc.period = cfg.restart_period;
        rc.max_restarts = cfg.restart_max;
        rc.outer_eps = cfg.restart_outer_eps;
        rc.max_total_evaluations = cfg.max_iter;
        setup.restart = rc;
    } else if (cfg.restart_type == "eps-prime") {
        RestartConfig rc;
        rc.eps_prime = cfg.restart_eps_prime;
        rc.max_restarts = cfg.restart_max;
        rc.outer_eps = cfg.restart_outer_eps;
        rc.max_total_evaluations = cfg.max_iter;
        setup.restart = rc;
    }
    setup.noise.level = cfg.noise_level;
    setup.noise.seed = cfg.noise_seed;
    if (cfg.problem == ProblemKind::noisy_harmonic && setup.noise.level == 0.0)
        setup.noise.level = 0.01;  // the third study's 1% default
    setup.approach = cfg.approach;
    return setup;
}

}  // namespace cauchymann
