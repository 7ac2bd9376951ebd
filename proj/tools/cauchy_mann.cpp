// Command line front end: `run` executes one experiment configuration and
// writes a report bundle, `sweep` repeats a run over parameter values with an
// aggregate CSV, `plot` renders SVG plots from a bundle.

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cauchymann/config.hpp"
#include "cauchymann/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cauchymann;

namespace {

json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(is);
    } catch (const json::parse_error& err) {
        throw ConfigError("config parse error in " + path + ": " + err.what());
    }
}

struct Overrides {
    std::optional<std::string> output_dir;
    std::optional<int> nx, ny, max_iter;
    std::optional<double> step_tol, noise_level;
    std::optional<unsigned> seed;
    std::optional<std::string> approach, problem;
};

json apply_overrides(json j, const Overrides& o) {
    if (o.output_dir) j["output_dir"] = *o.output_dir;
    if (o.nx) j["mesh"]["nx"] = *o.nx;
    if (o.ny) j["mesh"]["ny"] = *o.ny;
    if (o.nx && !j["mesh"].contains("ny")) j["mesh"]["ny"] = 17;
    if (o.ny && !j["mesh"].contains("nx")) j["mesh"]["nx"] = 33;
    if (o.max_iter) j["stop"]["max_iter"] = *o.max_iter;
    if (o.step_tol) j["stop"]["step_tol"] = *o.step_tol;
    if (o.noise_level) {
        j["noise"]["level"] = *o.noise_level;
        if (!j["noise"].contains("seed")) j["noise"]["seed"] = 1;
    }
    if (o.seed) {
        j["noise"]["seed"] = *o.seed;
        if (!j["noise"].contains("level")) j["noise"]["level"] = 0.0;
    }
    if (o.approach) j["approach"] = *o.approach;
    if (o.problem) j["problem"] = *o.problem;
    return j;
}

int exit_code_for(StopReason reason) {
    switch (reason) {
        case StopReason::step_tol:
        case StopReason::discrepancy: return 0;
        case StopReason::max_iter: return 2;
        case StopReason::operator_failure: return 1;
    }
    return 1;
}

// One evaluation of the configured operator at the final iterate; reports how
// far the run ended from a fixed point.
double final_defect(const RunConfig& cfg, const ExperimentReport& report) {
    const Mesh& mesh = *report.mesh;
    ExperimentSetup setup = to_setup(cfg);
    const ProblemSpec spec = make_problem_spec(mesh, setup.problem, setup.noise);
    TraceOperator op;
    switch (setup.approach) {
        case Approach::nonlinear_S: op = make_S_operator(spec, false); break;
        case Approach::nonlinear_T: op = make_T_operator(spec, false); break;
        case Approach::linear_kirchhoff: op = make_linear_T_operator(spec); break;
    }
    return l2_dist_segment(op(report.record.final_v), report.record.final_v);
}

int run_one(const RunConfig& cfg, bool quiet, ExperimentReport* report_out = nullptr) {
    const ExperimentSetup setup = to_setup(cfg);
    ExperimentReport report = run_experiment(setup);
    write_report_bundle(cfg.output_dir, report, to_json(cfg).dump(2));
    if (!quiet) {
        std::cout << "problem=" << to_string(cfg.problem) << " approach=" << to_string(cfg.approach)
                  << " mesh=" << cfg.nx << "x" << cfg.ny << "\n";
        std::cout << "stop=" << to_string(report.record.stop_reason)
                  << " evaluations=" << report.record.evaluations
                  << " initial_error=" << report.initial_error
                  << " final_error=" << report.final_error << "\n";
        if (report.record.k_eps) std::cout << "k_eps=" << *report.record.k_eps << "\n";
        std::cout << "bundle written to " << cfg.output_dir << "\n";
    }
    if (report_out) *report_out = std::move(report);
    return exit_code_for(report.record.stop_reason);
}

void set_dotted(json& j, const std::string& dotted, const json& value) {
    json* node = &j;
    std::string rest = dotted;
    for (std::size_t pos = rest.find('.'); pos != std::string::npos; pos = rest.find('.')) {
        node = &(*node)[rest.substr(0, pos)];
        rest = rest.substr(pos + 1);
    }
    (*node)[rest] = value;
}

json parse_value(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return json(text);  // bare strings are allowed unquoted
    }
}

int cmd_sweep(const json& base, const std::string& param, const std::vector<std::string>& values,
              const std::string& out_dir) {
    if (values.empty()) {
        std::cerr << "sweep: empty value list\n";
        return 1;
    }
    struct Row {
        std::string value;
        bool ok = false;
        std::string stop;
        double final_error = 0.0;
        std::string k_eps;
        double defect = 0.0;
    };
    std::vector<Row> rows(values.size());
    std::vector<std::optional<json>> configs(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        rows[i].value = values[i];
        try {
            json j = base;
            const json v = parse_value(values[i]);
            if (param == "eps") {
                set_dotted(j, "stop.discrepancy.eps", v);
                if (!j["stop"]["discrepancy"].contains("mu")) j["stop"]["discrepancy"]["mu"] = 2.5;
            } else if (param == "nx") {
                // refinement sweep: keep the 2:1 rectangle aspect
                set_dotted(j, "mesh.nx", v);
                set_dotted(j, "mesh.ny", json(std::max(2, (v.get<int>() + 1) / 2)));
            } else {
                set_dotted(j, param, v);
            }
            j["output_dir"] = (fs::path(out_dir) / ("run_" + std::to_string(i))).string();
            configs[i] = std::move(j);
        } catch (const std::exception& err) {
            std::cerr << "sweep: cannot build configuration for " << param << "=" << values[i]
                      << ": " << err.what() << "\n";
        }
    }

    int threads = static_cast<int>(std::min<std::size_t>(
        values.size(), std::max(1u, std::thread::hardware_concurrency())));
    if (const char* cap = std::getenv("CAUCHY_MANN_THREADS")) {
        const int c = std::atoi(cap);
        if (c >= 1) threads = std::min(threads, c);
    }

    std::mutex log_mutex;
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex next_mutex;
    auto worker = [&]() {
        while (true) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(next_mutex);
                if (next >= configs.size()) return;
                i = next++;
            }
            if (!configs[i]) continue;
            try {
                const RunConfig cfg = parse_run_config(*configs[i]);
                ExperimentReport report;
                run_one(cfg, /*quiet=*/true, &report);
                rows[i].ok = true;
                rows[i].stop = to_string(report.record.stop_reason);
                rows[i].final_error = report.final_error;
                if (report.record.k_eps) rows[i].k_eps = std::to_string(*report.record.k_eps);
                rows[i].defect = final_defect(cfg, report);
            } catch (const std::exception& err) {
                std::lock_guard<std::mutex> lock(log_mutex);
                std::cerr << "sweep: " << param << "=" << values[i] << " failed: " << err.what()
                          << "\n";
            }
        }
    };
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    fs::create_directories(out_dir);
    std::ofstream os(fs::path(out_dir) / "sweep.csv");
    os << "param,value,status,final_error,k_eps,fixed_point_defect\n";
    bool any_ok = false;
    for (const auto& r : rows) {
        os << param << "," << r.value << "," << (r.ok ? "ok" : "failed") << ",";
        if (r.ok) os << r.final_error;
        os << "," << r.k_eps << ",";
        if (r.ok) os << r.defect;
        os << "\n";
        any_ok = any_ok || r.ok;
    }
    std::cout << "sweep written to " << (fs::path(out_dir) / "sweep.csv").string() << "\n";
    return any_ok ? 0 : 1;
}

int cmd_plot(const std::string& dir) {
    const fs::path run_csv = fs::path(dir) / "run.csv";
    const fs::path trace_csv = fs::path(dir) / "trace_final.csv";
    if (!fs::exists(run_csv) || !fs::exists(trace_csv)) {
        std::cerr << "plot: missing run.csv or trace_final.csv in " << dir << "\n";
        return 1;
    }

    const CsvTable run = read_csv(run_csv);
    const int kcol = run.column("k"), ecol = run.column("l2_error");
    PlotCurve error_curve;
    error_curve.color = "#d62728";
    error_curve.label = "l2 error";
    if (kcol >= 0 && ecol >= 0) {
        for (const auto& row : run.rows) {
            if (row[static_cast<std::size_t>(ecol)].empty()) continue;
            error_curve.x.push_back(std::stod(row[static_cast<std::size_t>(kcol)]));
            error_curve.y.push_back(std::stod(row[static_cast<std::size_t>(ecol)]));
        }
    }
    {
        std::ofstream os(fs::path(dir) / "error.svg");
        write_line_plot(os, "L2(Gamma2) error vs iteration", {error_curve}, /*log_y=*/true);
    }

    const CsvTable trace = read_csv(trace_csv);
    const int xcol = trace.column("x"), pcol = trace.column("psi_final"),
              tcol = trace.column("truth");
    PlotCurve psi, truth;
    psi.color = "#d62728";
    psi.label = "psi_final";
    truth.color = "#1f77b4";
    truth.label = "exact trace";
    bool has_truth = false;
    for (const auto& row : trace.rows) {
        const double x = std::stod(row[static_cast<std::size_t>(xcol)]);
        psi.x.push_back(x);
        psi.y.push_back(std::stod(row[static_cast<std::size_t>(pcol)]));
        if (tcol >= 0 && !row[static_cast<std::size_t>(tcol)].empty()) {
            truth.x.push_back(x);
            truth.y.push_back(std::stod(row[static_cast<std::size_t>(tcol)]));
            has_truth = true;
        }
    }
    std::vector<PlotCurve> curves{psi};
    if (has_truth)
        curves.push_back(truth);
    else
        std::cerr << "plot: no truth column in trace_final.csv, plotting a single curve\n";
    {
        std::ofstream os(fs::path(dir) / "trace.svg");
        write_line_plot(os, "Reconstructed trace on Gamma2", curves, /*log_y=*/false);
    }
    std::cout << "plots written to " << dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary-trace reconstruction for nonlinear elliptic Cauchy problems"};
    app.require_subcommand(1);

    std::string config_path, out_dir, param;
    std::vector<std::string> values;
    Overrides overrides;

    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--output-dir", overrides.output_dir, "override output directory");
        cmd->add_option("--nx", overrides.nx, "override mesh.nx");
        cmd->add_option("--ny", overrides.ny, "override mesh.ny");
        cmd->add_option("--max-iter", overrides.max_iter, "override stop.max_iter");
        cmd->add_option("--step-tol", overrides.step_tol, "override stop.step_tol");
        cmd->add_option("--noise-level", overrides.noise_level, "override noise.level");
        cmd->add_option("--seed", overrides.seed, "override noise.seed");
        cmd->add_option("--approach", overrides.approach, "override approach");
        cmd->add_option("--problem", overrides.problem, "override problem");
    };

    CLI::App* run = app.add_subcommand("run", "run one configuration and write a report bundle");
    run->add_option("config", config_path, "JSON configuration file")->required();
    add_overrides(run);

    CLI::App* sweep = app.add_subcommand("sweep", "run a configuration over parameter values");
    sweep->add_option("config", config_path, "JSON configuration file")->required();
    sweep->add_option("--param", param,
                      "parameter to vary: `eps`, `nx` (refinement), or a dotted config path")
        ->required();
    sweep->add_option("--values", values, "comma separated values")->delimiter(',');
    sweep->add_option("--output-dir", out_dir, "aggregate output directory");

    CLI::App* plot = app.add_subcommand("plot", "render error.svg and trace.svg from a bundle");
    plot->add_option("dir", config_path, "report bundle directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const json j = apply_overrides(load_json(config_path), overrides);
            return run_one(parse_run_config(j), /*quiet=*/false);
        }
        if (sweep->parsed()) {
            const json j = load_json(config_path);
            parse_run_config(j);  // validate the base configuration up front
            if (out_dir.empty()) out_dir = "sweep_out";
            return cmd_sweep(j, param, values, out_dir);
        }
        if (plot->parsed()) return cmd_plot(config_path);
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 1;
}
