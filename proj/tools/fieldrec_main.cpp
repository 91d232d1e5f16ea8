#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fieldrec/design.hpp"
#include "fieldrec/experiment.hpp"
#include "fieldrec/verify.hpp"

namespace {

using namespace fieldrec;

struct RunArgs {
    std::string config;
    std::string preset_name;
    std::vector<std::string> settings;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::string output;
    unsigned threads = 0;
    bool quiet = false;
};

int cmd_run(const RunArgs& args) {
    if (args.config.empty() == args.preset_name.empty()) {
        std::cerr << "run: give exactly one of <config> or --preset\n";
        return 2;
    }
    std::vector<ExperimentConfig> configs =
        args.preset_name.empty() ? load_config(args.config) : preset(args.preset_name);

    for (ExperimentConfig& cfg : configs) {
        for (const std::string& s : args.settings) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + s + "'");
            apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        if (args.trials) cfg.trials = *args.trials;
        if (args.seed) cfg.seed = *args.seed;
        cfg.validate();
    }

    std::string output = args.output;
    if (output.empty()) output = configs.front().output;
    if (output.empty()) output = (configs.front().name.empty() ? std::string("results") : configs.front().name) + ".csv";

    RunOptions opts;
    opts.threads = args.threads;
    opts.progress = args.quiet ? nullptr : &std::cerr;
    const std::vector<ResultRow> rows = run_experiment(configs, opts);
    write_csv(output, rows);
    print_summary(std::cout, rows);
    std::cout << "wrote " << rows.size() << " rows to " << output << '\n';
    return 0;
}

int cmd_verify(bool full, std::uint64_t seed, unsigned threads) {
    VerifyOptions opt;
    opt.level = full ? VerifyLevel::Full : VerifyLevel::Quick;
    opt.seed = seed;
    opt.threads = threads;
    const VerifyReport report = run_verification(opt);
    for (const CheckResult& c : report.checks) {
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": measured " << std::setprecision(10)
                  << c.measured << ", expected " << c.expected << " +/- " << std::setprecision(3) << c.tolerance;
        if (!c.detail.empty()) std::cout << " (" << c.detail << ')';
        std::cout << '\n';
    }
    std::cout << (report.checks.size() - static_cast<std::size_t>(report.failures())) << '/' << report.checks.size()
              << " checks passed\n";
    return report.all_passed() ? 0 : 1;
}

struct DesignArgs {
    std::optional<double> target;
    std::string filter = "LMMSE";
    std::string model = "A";
    std::optional<int> m;
    std::optional<int> r;
    std::optional<double> beta;
    std::optional<double> snr_m_db;
    std::optional<double> snr_x_db;
    std::optional<double> sigma_delta2;
    int eigen_m = 200;
    int eigen_realizations = 50;
    std::uint64_t seed = 1;
    double floor_tolerance = 0.05;
    unsigned threads = 0;
};

int cmd_design(const DesignArgs& a) {
    DesignQuery q;
    q.target_mse = a.target;
    q.model = parse_model(a.model);
    q.kind = parse_filter_kind(a.filter);
    q.m = a.m;
    q.r = a.r;
    q.beta = a.beta;
    if (a.snr_m_db) q.alpha = ScenarioParams::alpha_from_snr_db(*a.snr_m_db);
    if (a.snr_x_db) q.omega = ScenarioParams::omega_from_snr_db(*a.snr_x_db);
    q.sigma_delta2 = a.sigma_delta2;
    q.eigen_m = a.eigen_m;
    q.eigen_realizations = a.eigen_realizations;
    q.seed = a.seed;
    q.floor_tolerance = a.floor_tolerance;
    q.threads = a.threads;

    const DesignAnswer ans = design_query(q);
    std::cout << std::setprecision(4);
    switch (ans.unknown) {
        case DesignUnknown::Sensors:
            std::cout << "r = " << *ans.r << " sensors (beta = " << ans.params.beta << ", M = " << *ans.m << ")\n";
            break;
        case DesignUnknown::Harmonics:
            std::cout << "M = " << *ans.m << " harmonics (beta = " << ans.params.beta << ", r = " << *ans.r << ")\n";
            break;
        case DesignUnknown::SnrM:
            std::cout << "SNR_m = " << ans.snr_m_db << " dB suffices (beta = " << ans.params.beta << ")\n";
            break;
    }
    if (ans.floor) std::cout << "MSE floor (SNR_m -> inf) = " << *ans.floor << '\n';
    std::cout << "asymptotic MSE at answer = " << ans.mse << " (target " << ans.target << ")\n";
    std::cout << (ans.unknown == DesignUnknown::SnrM ? "snr_m_db" : "beta") << ",mse\n";
    for (const CurvePoint& p : ans.curve) std::cout << p.x << ',' << p.mse << '\n';
    return 0;
}

int cmd_eigensample(double beta, int m, int realizations, std::optional<double> snr_x_db, std::uint64_t seed,
                    const std::string& out_path, unsigned threads) {
    const EigenSample pool = snr_x_db ? sample_jitter_eigenvalues(beta, ScenarioParams::omega_from_snr_db(*snr_x_db), m,
                                                                  realizations, seed, threads)
                                      : sample_eigenvalues(beta, m, realizations, seed, threads);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << "realization,index,eigenvalue\n";
    const std::size_t per = pool.per_realization();
    char buf[64];
    for (std::size_t i = 0; i < pool.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", pool.values[i]);
        out << i / per << ',' << i % per << ',' << buf << '\n';
    }
    if (!out) throw std::runtime_error("error while writing " + out_path);
    std::cout << std::setprecision(6) << "pooled " << pool.values.size() << " eigenvalues (M=" << pool.m_used
              << ", r=" << pool.sensors << ", beta=" << pool.effective_beta << ")\n"
              << "E[lambda] = " << pool.expect([](double v) { return v; })
              << ", E[lambda^2] = " << pool.expect([](double v) { return v * v; }) << '\n'
              << "wrote " << out_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bandlimited field reconstruction from irregular, noisy, jittered samples"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: FIELDREC_THREADS or hardware)");

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run a sweep from a config file or preset and write CSV");
    run_cmd->add_option("config", run.config, "Config file");
    run_cmd->add_option("--preset", run.preset_name, "Preset name, fig1..fig10");
    run_cmd->add_option("--set", run.settings, "Override a config key, key=value (repeatable)");
    run_cmd->add_option("--trials", run.trials, "Monte Carlo trials per point");
    run_cmd->add_option("--seed", run.seed, "Master seed");
    run_cmd->add_option("-o,--output", run.output, "CSV output path");
    run_cmd->add_flag("-q,--quiet", run.quiet, "No progress on stderr");

    bool full = false;
    std::uint64_t verify_seed = VerifyOptions{}.seed;
    auto* verify_cmd = app.add_subcommand("verify", "Numerical checks of the identities behind the MSE formulas");
    verify_cmd->add_flag("--full", full, "Include the M=200 eigenvalue pools and 1e5-draw expectations");
    verify_cmd->add_option("--seed", verify_seed, "Seed");

    DesignArgs design;
    auto* design_cmd = app.add_subcommand("design", "Solve for r, M or SNR_m from the asymptotic MSE");
    design_cmd->add_option("--target", design.target, "Target MSE (omit for an SNR_m floor query)");
    design_cmd->add_option("--filter", design.filter, "MF, ZF, LMMSE or LMMSE_JITTER");
    design_cmd->add_option("--model", design.model, "A or B");
    design_cmd->add_option("--m", design.m, "Harmonic half-count M");
    design_cmd->add_option("--r", design.r, "Sensor count r");
    design_cmd->add_option("--beta", design.beta, "(2M+1)/r");
    design_cmd->add_option("--snr-m", design.snr_m_db, "Measurement SNR in dB");
    design_cmd->add_option("--snr-x", design.snr_x_db, "Position SNR in dB");
    design_cmd->add_option("--sigma-delta2", design.sigma_delta2, "Displacement variance (needs --r)");
    design_cmd->add_option("--eigen-m", design.eigen_m, "M of the eigenvalue pool");
    design_cmd->add_option("--eigen-realizations", design.eigen_realizations, "Realizations in the pool");
    design_cmd->add_option("--seed", design.seed, "Seed");
    design_cmd->add_option("--floor-tol", design.floor_tolerance, "Relative distance from the floor (no target)");

    double es_beta = 0.2;
    int es_m = 200;
    int es_realizations = 50;
    std::optional<double> es_snr_x;
    std::uint64_t es_seed = 1;
    std::string es_out;
    auto* es_cmd = app.add_subcommand("eigensample", "Pool eigenvalues of beta R over random layouts");
    es_cmd->add_option("--beta", es_beta, "(2M+1)/r")->required();
    es_cmd->add_option("--m", es_m, "Harmonic half-count M")->required();
    es_cmd->add_option("--realizations", es_realizations, "Number of layouts");
    es_cmd->add_option("--snr-x", es_snr_x, "Pool beta C R C at this position SNR (dB)");
    es_cmd->add_option("--seed", es_seed, "Seed");
    es_cmd->add_option("--out", es_out, "CSV output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            run.threads = threads;
            return cmd_run(run);
        }
        if (*verify_cmd) return cmd_verify(full, verify_seed, threads);
        if (*design_cmd) {
            design.threads = threads;
            return cmd_design(design);
        }
        if (*es_cmd) return cmd_eigensample(es_beta, es_m, es_realizations, es_snr_x, es_seed, es_out, threads);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const InfeasibleTarget& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
