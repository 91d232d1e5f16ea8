#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fieldrec/asymptotic.hpp"

namespace fieldrec {

enum class SweepAxis { Beta, SnrM, SnrX };

std::string_view to_string(SweepAxis axis);

/// One sweep: a single model, a set of filters evaluated on shared draws at
/// every point, and one swept parameter. Sweep values are stored in the
/// internal parameter (beta, alpha or omega), not in dB.
struct ExperimentConfig {
    std::string name;
    Model model = Model::A;
    std::vector<FilterKind> filters;
    int m = 10;
    SweepAxis sweep = SweepAxis::Beta;
    std::vector<double> values;
    double beta = 0.0;
    double alpha = 0.0;
    double omega = 0.0;
    int trials = 100;
    int eigen_m = 200;
    int eigen_realizations = 50;
    std::uint64_t seed = 1;
    LayoutMode layout = LayoutMode::Redraw;
    std::string output;

    /// Throws ConfigError unless the config describes a runnable sweep.
    void validate() const;
    /// The scenario at sweep point i.
    ScenarioParams point(std::size_t i) const;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

/// Parses the key = value format documented in the README. Keys before the
/// first [run] header are shared; every [run] section starts from them and
/// yields one config. Without sections the shared keys form a single run.
std::vector<ExperimentConfig> parse_config(std::string_view text);
std::vector<ExperimentConfig> load_config(const std::string& path);

/// Sets one key exactly as a config line would; used for command-line overrides.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// "fig1" .. "fig10".
std::vector<std::string> preset_names();
std::vector<ExperimentConfig> preset(std::string_view name);

struct ResultRow {
    Model model = Model::A;
    FilterKind kind = FilterKind::Matched;
    ScenarioParams params;  ///< beta is the effective (2M+1)/r
    int m = 0;
    int r = 0;
    int trials = 0;
    int failures = 0;
    std::uint64_t seed = 0;
    double mse_emp = 0.0;  ///< NaN when every trial failed
    double std_error = 0.0;
    double mse_trace = 0.0;
    AsymptoticResult mse_asym;
    double lower_bound = 0.0;
};

struct RunOptions {
    unsigned threads = 0;
    std::ostream* progress = nullptr;
};

/// Runs every sweep point of every config in order; rows come back in sweep
/// order, filters in config order within a point.
std::vector<ResultRow> run_experiment(const std::vector<ExperimentConfig>& configs, const RunOptions& options = {});

inline constexpr std::string_view kCsvHeader =
    "model,filter,beta,alpha,snr_m_db,omega,snr_x_db,m,r,trials,seed,mse_emp,stderr,mse_trace,mse_asym,lower_bound";

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// Throws std::runtime_error when the file cannot be written.
void write_csv(const std::string& path, const std::vector<ResultRow>& rows);

/// Fixed-width table of the rows for terminal output.
void print_summary(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace fieldrec
