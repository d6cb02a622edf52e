#include "heatlab/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "heatlab/analysis.hpp"

namespace heatlab {

namespace fs = std::filesystem;

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::set<std::string>& allowed_keys() {
    static const std::set<std::string> keys = {
        "mode", "epsilon", "omega0", "lambda", "n_max", "n_max_policy", "certify_growth",
        "alpha_a", "omegac_a", "t_a", "alpha_sigma", "omegac_sigma", "t_sigma",
        "t0", "bias_start", "bias_stop", "bias_points",
        "lambda_grid", "lambda_start", "lambda_stop", "lambda_points", "lambda_scale",
        "delta_list",
        "eps_l", "eps_r", "lambda_l", "lambda_r",
        "alpha_l", "alpha_r", "omegac_l", "omegac_r", "t_r",
        "gate_start", "gate_stop", "gate_points",
        "jobs", "plot", "name"};
    return keys;
}

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw ConfigError("grid needs at least one point");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = (n == 1) ? a : a + (b - a) * i / (n - 1.0);
    return out;
}

std::vector<double> logspace(double a, double b, int n) {
    if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("log grid endpoints must be > 0");
    auto grid = linspace(std::log(a), std::log(b), n);
    for (double& x : grid) x = std::exp(x);
    return grid;
}

struct SingleQubitParams {
    HybridSystem sys;
    BathSpec bath_a;
    BathSpec bath_sigma;
};

SingleQubitParams read_single_qubit(const KeyValueFile& cfg) {
    SingleQubitParams p;
    p.sys.epsilon = cfg.get_double("epsilon", 1.0);
    p.sys.omega0 = cfg.get_double("omega0", 1.0);
    p.sys.lambda = cfg.get_double("lambda", 0.05);
    p.sys.n_max = cfg.get_int("n_max", 30);
    p.bath_a = {cfg.get_double("alpha_a", 0.005), cfg.get_double("omegac_a", 10.0),
                cfg.get_double("t_a", 1.5), BathLabel::PhononA};
    p.bath_sigma = {cfg.get_double("alpha_sigma", 0.005), cfg.get_double("omegac_sigma", 10.0),
                    cfg.get_double("t_sigma", 0.5), BathLabel::QubitSigma};
    try {
        p.sys.validate();
        p.bath_a.validate();
        p.bath_sigma.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return p;
}

std::vector<double> read_lambda_grid(const KeyValueFile& cfg) {
    if (cfg.has("lambda_grid")) return cfg.get_double_list("lambda_grid");
    const double start = cfg.get_double("lambda_start");
    const double stop = cfg.get_double("lambda_stop");
    const int points = cfg.get_int("lambda_points");
    const std::string scale = cfg.get_or("lambda_scale", "linear");
    if (scale == "log") return logspace(start, stop, points);
    if (scale == "linear") return linspace(start, stop, points);
    throw ConfigError("config key 'lambda_scale': expected linear or log");
}

std::vector<double> read_bias_grid(const KeyValueFile& cfg, double t0) {
    const double start = cfg.get_double("bias_start", 0.99 * -2.0 * t0);
    const double stop = cfg.get_double("bias_stop", 0.99 * 2.0 * t0);
    const int points = cfg.get_int("bias_points", 99);
    return linspace(start, stop, points);
}

class CsvWriter {
  public:
    CsvWriter(const fs::path& path, const std::vector<std::string>& columns) : path_(path) {
        out_.open(path, std::ios::binary);
        if (!out_) throw IoError("cannot open output file: " + path.string());
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? "," : "") << columns[i];
        out_ << '\n';
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }
    void close() {
        out_.close();
        if (!out_) throw IoError("write failed: " + path_.string());
    }

  private:
    fs::path path_;
    std::ofstream out_;
};

std::string fmt(double v) { return format_double(v); }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    out << text;
    out.close();
    if (!out) throw IoError("write failed: " + path.string());
}

std::string plot_script(const std::string& csv_name, const std::vector<std::string>& columns) {
    std::string py =
        "#!/usr/bin/env python3\n"
        "import csv\n"
        "import matplotlib.pyplot as plt\n\n"
        "rows = list(csv.DictReader(open(\"" + csv_name + "\")))\n"
        "x = [float(r[\"" + columns[0] + "\"]) for r in rows]\n";
    for (std::size_t i = 1; i < columns.size(); ++i)
        py += "plt.plot(x, [float(r[\"" + columns[i] + "\"]) for r in rows], label=\"" +
              columns[i] + "\")\n";
    py += "plt.xlabel(\"" + columns[0] + "\")\nplt.legend()\nplt.show()\n";
    return py;
}

int resolve_jobs(const RunOptions& options, const KeyValueFile& cfg) {
    int jobs = options.jobs > 0 ? options.jobs : cfg.get_int("jobs", 1);
    if (const char* env = std::getenv("HEATLAB_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) jobs = static_cast<int>(v);
    }
    return std::max(1, jobs);
}

// Per-mode execution. Each fills the CSV, records resolved values in meta,
// and returns the column list (for the optional plot script).

std::vector<std::string> run_steady(const KeyValueFile& cfg, CsvWriter& csv, KeyValueFile& meta) {
    auto p = read_single_qubit(cfg);
    const auto rates = build_rate_matrices(p.sys, p.bath_a, p.bath_sigma);
    const auto ss = solve_steady_state(rates);
    const auto report = current_report(ss, rates);
    const auto basis = build_dressed_basis(p.sys);
    for (int b = 0; b < 2; ++b)
        for (int n = 0; n < basis.n_levels; ++n) {
            const int i = basis.index(b, n);
            csv.row({b == 0 ? "up" : "down", std::to_string(n), fmt(basis.energies[i]),
                     fmt(ss.populations[i])});
        }
    meta.set("j_a", report.j_per_bath.at(BathLabel::PhononA));
    meta.set("j_sigma", report.j_per_bath.at(BathLabel::QubitSigma));
    meta.set("j_ss", report.j_ss);
    meta.set("conservation_residual", report.conservation_residual);
    meta.set("sigma_z", qubit_polarization(ss.populations, rates.n_levels));
    meta.set("residual", ss.residual);
    return {};
}

std::vector<std::string> run_sweep_lambda(const KeyValueFile& cfg, CsvWriter& csv,
                                          KeyValueFile& meta, int jobs) {
    auto p = read_single_qubit(cfg);
    const auto grid = read_lambda_grid(cfg);
    const auto rows = sweep_coupling(p.sys, p.bath_a, p.bath_sigma, grid, jobs);
    double worst = 0.0;
    for (const auto& r : rows) {
        csv.row({fmt(r.axis), fmt(r.j_ss), fmt(r.sigma_z), std::to_string(r.n_max_used),
                 fmt(r.residual)});
        worst = std::max(worst, r.residual);
    }
    meta.set("max_residual", worst);
    return {"lambda", "j_ss", "sigma_z"};
}

std::vector<std::string> run_sweep_bias(const KeyValueFile& cfg, CsvWriter& csv,
                                        KeyValueFile& meta, int jobs) {
    auto p = read_single_qubit(cfg);
    const double t0 = cfg.get_double("t0", 1.0);
    const auto bias = read_bias_grid(cfg, t0);
    const auto lambdas =
        cfg.has("lambda_grid") ? cfg.get_double_list("lambda_grid") : std::vector{p.sys.lambda};
    meta.set("t0", t0);
    double worst = 0.0;
    for (double lambda : lambdas) {
        if (!(lambda > 0.0))
            throw ConfigError("config key 'lambda_grid': sweep-bias needs lambda > 0");
        HybridSystem sys = p.sys;
        sys.lambda = lambda;
        const auto rows = sweep_temperature_bias(sys, p.bath_a, p.bath_sigma, t0, bias, jobs);
        for (const auto& r : rows) {
            csv.row({fmt(r.axis), fmt(lambda), fmt(r.j_ss / (lambda * lambda))});
            worst = std::max(worst, r.residual);
        }
    }
    meta.set("max_residual", worst);
    return {"delta_t", "lambda", "j_ss_over_lambda2"};
}

std::vector<std::string> run_rectify(const KeyValueFile& cfg, CsvWriter& csv, KeyValueFile& meta,
                                     int jobs) {
    auto p = read_single_qubit(cfg);
    const double t0 = cfg.get_double("t0", 1.0);
    const double start = cfg.get_double("bias_start", 0.05);
    const double stop = cfg.get_double("bias_stop", 0.99 * 2.0 * t0);
    const auto bias = linspace(start, stop, cfg.get_int("bias_points", 40));
    for (double dt : bias)
        if (!(dt > 0.0)) throw ConfigError("config key 'bias_start': rectify needs dT > 0");
    const auto lambdas =
        cfg.has("lambda_grid") ? cfg.get_double_list("lambda_grid") : std::vector{p.sys.lambda};
    meta.set("t0", t0);
    for (double lambda : lambdas) {
        HybridSystem sys = p.sys;
        sys.lambda = lambda;
        const auto fwd = sweep_temperature_bias(sys, p.bath_a, p.bath_sigma, t0, bias, jobs);
        std::vector<double> neg(bias.begin(), bias.end());
        for (double& x : neg) x = -x;
        const auto rev = sweep_temperature_bias(sys, p.bath_a, p.bath_sigma, t0, neg, jobs);
        for (std::size_t i = 0; i < bias.size(); ++i)
            csv.row({fmt(bias[i]), fmt(lambda), fmt(fwd[i].j_ss), fmt(rev[i].j_ss),
                     fmt(rectification_factor(fwd[i].j_ss, rev[i].j_ss))});
    }
    return {"delta_t", "lambda", "j_forward", "j_reverse", "r"};
}

std::vector<std::string> run_detune(const KeyValueFile& cfg, CsvWriter& csv, KeyValueFile& meta,
                                    int jobs) {
    auto p = read_single_qubit(cfg);
    const double t0 = cfg.get_double("t0", 1.0);
    const auto bias = read_bias_grid(cfg, t0);
    const auto deltas = cfg.get_double_list("delta_list");
    const double lambda = p.sys.lambda;
    if (!(lambda > 0.0)) throw ConfigError("config key 'lambda': detune needs lambda > 0");
    meta.set("t0", t0);
    for (double delta : deltas) {
        HybridSystem sys = p.sys;
        sys.epsilon = sys.omega0 - delta;
        if (!(sys.epsilon > 0.0))
            throw ConfigError("config key 'delta_list': requires epsilon = omega0 - delta > 0");
        const auto rows = sweep_temperature_bias(sys, p.bath_a, p.bath_sigma, t0, bias, jobs);
        for (const auto& r : rows)
            csv.row({fmt(delta), fmt(r.axis), fmt(lambda), fmt(r.j_ss / (lambda * lambda))});
    }
    return {"delta", "delta_t", "lambda", "j_ss_over_lambda2"};
}

std::vector<std::string> run_amplify(const KeyValueFile& cfg, CsvWriter& csv, KeyValueFile& meta,
                                     int jobs) {
    TwoQubitSystem sys;
    sys.eps_left = cfg.get_double("eps_l", 1.0);
    sys.eps_right = cfg.get_double("eps_r", 1.0);
    sys.lambda_left = cfg.get_double("lambda_l", 0.1);
    sys.lambda_right = cfg.get_double("lambda_r", 0.4);
    sys.omega0 = cfg.get_double("omega0", 1.0);
    sys.n_max = cfg.get_int("n_max", 30);
    const BathSpec bath_a{cfg.get_double("alpha_a", 0.005), cfg.get_double("omegac_a", 10.0),
                          cfg.get_double("t_a", 1.2), BathLabel::PhononA};
    const BathSpec bath_l{cfg.get_double("alpha_l", 0.005), cfg.get_double("omegac_l", 10.0),
                          0.0, BathLabel::LeftSigma};
    const BathSpec bath_r{cfg.get_double("alpha_r", 0.005), cfg.get_double("omegac_r", 10.0),
                          cfg.get_double("t_r", 0.2), BathLabel::RightSigma};
    try {
        sys.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const auto gate = linspace(cfg.get_double("gate_start", bath_r.temperature),
                               cfg.get_double("gate_stop", bath_a.temperature),
                               cfg.get_int("gate_points", 41));
    const auto rows = amplification_factor(sys, bath_a, bath_l, bath_r, gate, jobs);
    for (const auto& r : rows)
        csv.row({fmt(r.t_gate), fmt(r.j_left), fmt(r.j_right),
                 r.beta_unbounded ? "inf" : fmt(r.beta)});
    return {"t_sigma_l", "j_l", "j_r", "beta_r"};
}

}  // namespace

int run(const RunOptions& options, std::ostream& log, std::ostream& err) {
    KeyValueFile cfg;
    std::string run_name = "run";
    try {
        if (options.preset.empty() && options.config_path.empty())
            throw ConfigError("either --preset or --config is required");
        if (!options.preset.empty()) {
            cfg = KeyValueFile::load(preset_path(options.preset));
            run_name = options.preset;
        }
        if (!options.config_path.empty()) {
            // explicit config overlays the preset
            const KeyValueFile overlay = KeyValueFile::load(options.config_path);
            for (const auto& [k, v] : overlay.items()) cfg.set(k, v);
            if (options.preset.empty())
                run_name = fs::path(options.config_path).stem().string();
        }
        for (const auto& [k, v] : cfg.items())
            if (!allowed_keys().contains(k)) throw ConfigError("unknown config key: " + k);
        run_name = cfg.get_or("name", run_name);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    }

    try {
        const RunMode mode = parse_run_mode(cfg.get_or("mode", "steady"));
        const int jobs = resolve_jobs(options, cfg);

        // resolved configuration, defaults included, echoed into the sidecar
        KeyValueFile meta;
        meta.set("name", run_name);
        meta.set("mode", to_string(mode));
        for (const auto& [k, v] : cfg.items())
            if (k != "mode" && k != "name") meta.set(k, v);
        meta.set("jobs", jobs);

        // n_max policy: fixed value or grown until the current is stable
        const std::string policy = cfg.get_or("n_max_policy", "fixed");
        if (policy == "certify" && mode != RunMode::Amplify && mode != RunMode::Steady) {
            auto p = read_single_qubit(cfg);
            const auto cert = certify_truncation(p.sys, p.bath_a, p.bath_sigma,
                                                 cfg.get_int("certify_growth", 5));
            cfg.set("n_max", cert.n_max);
            meta.set("n_max", cert.n_max);
            meta.set("n_max_certified", cert.n_max);
            meta.set("truncation_delta", cert.current_delta);
        } else if (policy != "fixed" && policy != "certify") {
            throw ConfigError("config key 'n_max_policy': expected fixed or certify");
        }
        if (!meta.has("n_max")) meta.set("n_max", cfg.get_int("n_max", 30));

        std::error_code ec;
        fs::create_directories(options.out_dir, ec);
        if (ec) throw IoError("cannot create output directory: " + options.out_dir);
        const fs::path csv_path = fs::path(options.out_dir) / (run_name + ".csv");

        static const std::map<RunMode, std::vector<std::string>> csv_columns = {
            {RunMode::Steady, {"branch", "n", "energy", "population"}},
            {RunMode::SweepLambda, {"lambda", "j_ss", "sigma_z", "n_max", "residual"}},
            {RunMode::SweepBias, {"delta_t", "lambda", "j_ss_over_lambda2"}},
            {RunMode::Rectify, {"delta_t", "lambda", "j_forward", "j_reverse", "r"}},
            {RunMode::Detune, {"delta", "delta_t", "lambda", "j_ss_over_lambda2"}},
            {RunMode::Amplify, {"t_sigma_l", "j_l", "j_r", "beta_r"}}};
        CsvWriter csv(csv_path, csv_columns.at(mode));

        std::vector<std::string> plot_cols;
        switch (mode) {
            case RunMode::Steady: plot_cols = run_steady(cfg, csv, meta); break;
            case RunMode::SweepLambda: plot_cols = run_sweep_lambda(cfg, csv, meta, jobs); break;
            case RunMode::SweepBias: plot_cols = run_sweep_bias(cfg, csv, meta, jobs); break;
            case RunMode::Rectify: plot_cols = run_rectify(cfg, csv, meta, jobs); break;
            case RunMode::Detune: plot_cols = run_detune(cfg, csv, meta, jobs); break;
            case RunMode::Amplify: plot_cols = run_amplify(cfg, csv, meta, jobs); break;
        }
        csv.close();
        write_text(csv_path.string() + ".meta", meta.serialize());
        if (cfg.get_or("plot", "false") == "true" && !plot_cols.empty())
            write_text((fs::path(options.out_dir) / (run_name + "_plot.py")).string(),
                       plot_script(csv_path.filename().string(), plot_cols));
        log << "wrote " << csv_path.string() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::runtime_error& e) {
        err << "solver error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace heatlab
