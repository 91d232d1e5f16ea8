#include "fieldrec/experiment.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

namespace fieldrec {

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Beta: return "beta";
        case SweepAxis::SnrM: return "snr_m";
        case SweepAxis::SnrX: return "snr_x";
    }
    return "?";
}

namespace {

std::string message_with_line(int line, const std::string& message) {
    return line > 0 ? "line " + std::to_string(line) + ": " + message : message;
}

std::string_view trim(std::string_view s) {
    const auto ws = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> items;
    while (true) {
        const auto comma = s.find(',');
        const std::string_view item = trim(s.substr(0, comma));
        if (!item.empty()) items.push_back(item);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return items;
}

double parse_number(std::string_view text) {
    const std::string s(trim(text));
    if (s.empty()) throw std::invalid_argument("expected a number");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

long long parse_integer(std::string_view text) {
    const std::string s(trim(text));
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

std::uint64_t parse_seed(std::string_view text) {
    const std::string s(trim(text));
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(s, &used, 0);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a seed: '" + s + "'");
    }
    if (used != s.size() || s.front() == '-') throw std::invalid_argument("not a seed: '" + s + "'");
    return v;
}

// Linear SNR from "20dB", "inf dB", "100" or "inf".
double parse_snr(std::string_view text) {
    std::string s = lower(trim(text));
    if (s.size() > 2 && s.compare(s.size() - 2, 2, "db") == 0) {
        const double db = parse_number(std::string_view(s).substr(0, s.size() - 2));
        if (std::isnan(db)) throw std::invalid_argument("SNR is NaN");
        return std::pow(10.0, db / 10.0);
    }
    const double v = parse_number(s);
    if (!(v > 0.0)) throw std::invalid_argument("linear SNR must be > 0: '" + s + "'");
    return v;
}

double alpha_from_snr(double snr) { return std::isinf(snr) ? 0.0 : 1.0 / snr; }
double omega_from_snr(double snr) { return std::isinf(snr) ? 0.0 : 1.0 / std::sqrt(snr); }

double parse_nonnegative(std::string_view text, const char* what) {
    const double v = parse_number(text);
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
    return v;
}

double parse_positive(std::string_view text, const char* what) {
    const double v = parse_number(text);
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite and > 0");
    return v;
}

int parse_count(std::string_view text, const char* what, int minimum) {
    const long long v = parse_integer(text);
    if (v < minimum || v > std::numeric_limits<int>::max()) {
        throw std::invalid_argument(std::string(what) + " must be >= " + std::to_string(minimum));
    }
    return static_cast<int>(v);
}

SweepAxis parse_axis(std::string_view text) {
    const std::string s = lower(trim(text));
    if (s == "beta") return SweepAxis::Beta;
    if (s == "snr_m" || s == "snr_m_db" || s == "alpha") return SweepAxis::SnrM;
    if (s == "snr_x" || s == "snr_x_db" || s == "omega") return SweepAxis::SnrX;
    throw std::invalid_argument("unknown sweep axis '" + s + "' (beta, snr_m, snr_x)");
}

LayoutMode parse_layout(std::string_view text) {
    const std::string s = lower(trim(text));
    if (s == "redraw") return LayoutMode::Redraw;
    if (s == "fixed") return LayoutMode::Fixed;
    if (s == "regular") return LayoutMode::Regular;
    throw std::invalid_argument("unknown layout '" + s + "' (redraw, fixed, regular)");
}

std::vector<double> parse_values(SweepAxis axis, std::string_view text) {
    std::vector<double> out;
    for (std::string_view item : split_list(text)) {
        switch (axis) {
            case SweepAxis::Beta: out.push_back(parse_positive(item, "beta")); break;
            case SweepAxis::SnrM: out.push_back(alpha_from_snr(parse_snr(item))); break;
            case SweepAxis::SnrX: out.push_back(omega_from_snr(parse_snr(item))); break;
        }
    }
    if (out.empty()) throw std::invalid_argument("empty value list");
    return out;
}

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

ExperimentConfig build(const Section& entries, int section_line) {
    ExperimentConfig cfg;
    // The sweep axis decides how `values` is read, so it goes first.
    if (auto it = entries.find("sweep"); it != entries.end()) {
        try {
            apply_setting(cfg, "sweep", it->second.value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(it->second.line, e.what());
        }
    }
    for (const auto& [key, entry] : entries) {
        if (key == "sweep") continue;
        try {
            apply_setting(cfg, key, entry.value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(entry.line, e.what());
        }
    }
    const auto vals = entries.find("values");
    if (vals == entries.end()) throw ConfigError(section_line, "missing 'values' for the sweep");
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(section_line, e.what());
    }
    return cfg;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(message_with_line(line, message)), line_(line) {}

void apply_setting(ExperimentConfig& config, std::string_view key_text, std::string_view value) {
    const std::string key = lower(trim(key_text));
    value = trim(value);
    if (key == "name") {
        config.name = std::string(value);
    } else if (key == "model") {
        config.model = parse_model(value);
    } else if (key == "filters") {
        config.filters.clear();
        for (std::string_view item : split_list(value)) config.filters.push_back(parse_filter_kind(item));
    } else if (key == "m") {
        config.m = parse_count(value, "m", 0);
    } else if (key == "sweep") {
        config.sweep = parse_axis(value);
    } else if (key == "values") {
        config.values = parse_values(config.sweep, value);
    } else if (key == "beta") {
        config.beta = parse_positive(value, "beta");
    } else if (key == "alpha") {
        config.alpha = parse_nonnegative(value, "alpha");
    } else if (key == "snr_m") {
        config.alpha = alpha_from_snr(parse_snr(value));
    } else if (key == "omega") {
        config.omega = parse_nonnegative(value, "omega");
    } else if (key == "snr_x") {
        config.omega = omega_from_snr(parse_snr(value));
    } else if (key == "trials") {
        config.trials = parse_count(value, "trials", 1);
    } else if (key == "eigen_m") {
        config.eigen_m = parse_count(value, "eigen_m", 1);
    } else if (key == "eigen_realizations") {
        config.eigen_realizations = parse_count(value, "eigen_realizations", 1);
    } else if (key == "seed") {
        config.seed = parse_seed(value);
    } else if (key == "layout") {
        config.layout = parse_layout(value);
    } else if (key == "output") {
        config.output = std::string(value);
    } else {
        throw std::invalid_argument("unknown key '" + key + "'");
    }
}

void ExperimentConfig::validate() const {
    if (filters.empty()) throw ConfigError(0, "no filters given");
    if (values.empty()) throw ConfigError(0, "sweep has no values");
    if (trials < 1) throw ConfigError(0, "trials must be >= 1");
    if (m < 0) throw ConfigError(0, "m must be >= 0");
    if (sweep != SweepAxis::Beta && !(beta > 0.0)) throw ConfigError(0, "beta is required unless it is swept");
    for (std::size_t i = 0; i < values.size(); ++i) {
        const ScenarioParams p = point(i);
        try {
            p.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(0, e.what());
        }
        const int r = sensors_for(m, p.beta);
        const bool interp = std::find(filters.begin(), filters.end(), FilterKind::Interp) != filters.end();
        if (interp && r < 2) throw ConfigError(0, "INTERP needs at least 2 sensors");
        const bool jitter = std::find(filters.begin(), filters.end(), FilterKind::LmmseJitter) != filters.end();
        if (jitter && p.alpha == 0.0 && (model == Model::A || p.omega == 0.0)) {
            throw ConfigError(0, "LMMSE_JITTER needs alpha > 0 or jitter");
        }
    }
}

ScenarioParams ExperimentConfig::point(std::size_t i) const {
    ScenarioParams p{beta, alpha, model == Model::B ? omega : 0.0};
    const double v = values.at(i);
    switch (sweep) {
        case SweepAxis::Beta: p.beta = v; break;
        case SweepAxis::SnrM: p.alpha = v; break;
        case SweepAxis::SnrX: p.omega = v; break;
    }
    return p;
}

std::vector<ExperimentConfig> parse_config(std::string_view text) {
    Section shared;
    std::vector<std::pair<Section, int>> runs;
    Section* current = &shared;

    int line_no = 0;
    while (!text.empty() || line_no == 0) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            if (text.empty()) break;
            continue;
        }
        if (line.front() == '[') {
            if (lower(line) != "[run]") throw ConfigError(line_no, "unknown section " + std::string(line));
            runs.emplace_back(Section{}, line_no);
            current = &runs.back().first;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected key = value");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "missing key");
        if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");
        if (current->count(key) != 0) throw ConfigError(line_no, "duplicate key '" + key + "'");
        (*current)[key] = Entry{std::string(value), line_no};
    }

    std::vector<ExperimentConfig> out;
    if (runs.empty()) {
        out.push_back(build(shared, 1));
        return out;
    }
    for (const auto& [section, header_line] : runs) {
        Section merged = shared;
        for (const auto& [key, entry] : section) merged[key] = entry;
        out.push_back(build(merged, header_line));
    }
    return out;
}

std::vector<ExperimentConfig> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

constexpr std::string_view kSnrM0To40 = "values = 0dB, 5dB, 10dB, 15dB, 20dB, 25dB, 30dB, 35dB, 40dB\n";

std::string preset_text(std::string_view name) {
    std::string common = "name = " + std::string(name) + "\ntrials = 100\nseed = 1\n";
    if (name == "fig1") {
        return common +
               "model = A\nfilters = MF, ZF, LMMSE\nm = 40\nalpha = 0.5\nsweep = beta\n"
               "values = 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9\n";
    }
    if (name == "fig2") {
        return common +
               "model = A\nfilters = MF, ZF, LMMSE, INTERP\nm = 10\nbeta = 0.2\nsweep = snr_m\n"
               "values = 0dB, 5dB, 10dB, 15dB, 20dB, 25dB, 30dB, 35dB, 40dB, 45dB, 50dB, 55dB, 60dB\n";
    }
    if (name == "fig3") {
        return common +
               "model = A\nfilters = LMMSE\nm = 10\nsweep = snr_m\n"
               "values = 0dB, 5dB, 10dB, 15dB, 20dB, 25dB, 30dB, 35dB, 40dB, 45dB, 50dB\n"
               "[run]\nbeta = 0.1\n[run]\nbeta = 0.2\n[run]\nbeta = 0.4\n[run]\nbeta = 0.6\n[run]\nbeta = 0.8\n";
    }
    const std::string jitter_runs = "[run]\nsnr_x = 10dB\n[run]\nsnr_x = 20dB\n[run]\nsnr_x = inf\n";
    const std::string model_b = common + "model = B\nm = 10\nsweep = snr_m\n" + std::string(kSnrM0To40);
    if (name == "fig4") return model_b + "filters = MF\nbeta = 0.2\n" + jitter_runs;
    if (name == "fig5") {
        std::string text = model_b + "filters = LMMSE\n";
        for (const char* beta : {"0.1", "0.2", "0.4"}) {
            for (const char* snr_x : {"10dB", "20dB"}) {
                text += std::string("[run]\nbeta = ") + beta + "\nsnr_x = " + snr_x + "\n";
            }
        }
        return text;
    }
    if (name == "fig6") return model_b + "filters = ZF\nbeta = 0.2\n" + jitter_runs;
    if (name == "fig7") return model_b + "filters = LMMSE\nbeta = 0.2\n" + jitter_runs;
    if (name == "fig8") return model_b + "filters = LMMSE_JITTER\nbeta = 0.2\n" + jitter_runs;
    if (name == "fig9") return model_b + "filters = LMMSE, LMMSE_JITTER\nbeta = 0.2\n" + jitter_runs;
    if (name == "fig10") {
        return common +
               "model = B\nm = 10\nsweep = snr_m\nfilters = LMMSE, LMMSE_JITTER\nsnr_x = 10dB\n"
               "values = 0dB, 10dB, 20dB, 30dB, 40dB, 50dB, 60dB\n"
               "[run]\nbeta = 0.1\n[run]\nbeta = 0.2\n[run]\nbeta = 0.4\n";
    }
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (int i = 1; i <= 10; ++i) names.push_back("fig" + std::to_string(i));
    return names;
}

std::vector<ExperimentConfig> preset(std::string_view name) { return parse_config(preset_text(lower(name))); }

namespace {

class PoolCache {
public:
    PoolCache(unsigned threads) : threads_(threads) {}

    const EigenSample& get(double beta, const ExperimentConfig& cfg) {
        for (const auto& e : pools_) {
            if (e.beta == beta && e.m == cfg.eigen_m && e.realizations == cfg.eigen_realizations && e.seed == cfg.seed) {
                return *e.pool;
            }
        }
        const std::uint64_t seed = derive_seed(cfg.seed, std::bit_cast<std::uint64_t>(beta), 0xe16e);
        pools_.push_back({beta, cfg.eigen_m, cfg.eigen_realizations, cfg.seed,
                          std::make_unique<EigenSample>(
                              sample_eigenvalues(beta, cfg.eigen_m, cfg.eigen_realizations, seed, threads_))});
        return *pools_.back().pool;
    }

private:
    struct Key {
        double beta;
        int m;
        int realizations;
        std::uint64_t seed;
        std::unique_ptr<EigenSample> pool;
    };
    unsigned threads_;
    std::vector<Key> pools_;
};

bool needs_pool(Model model, FilterKind kind) {
    switch (kind) {
        case FilterKind::ZeroForcing:
        case FilterKind::Lmmse: return true;
        case FilterKind::LmmseJitter: return model == Model::A;
        default: return false;
    }
}

}  // namespace

std::vector<ResultRow> run_experiment(const std::vector<ExperimentConfig>& configs, const RunOptions& options) {
    PoolCache pools(options.threads);
    std::vector<ResultRow> rows;
    for (std::size_t c = 0; c < configs.size(); ++c) {
        const ExperimentConfig& cfg = configs[c];
        cfg.validate();
        for (std::size_t i = 0; i < cfg.values.size(); ++i) {
            EmpiricalSetup setup;
            setup.model = cfg.model;
            setup.params = cfg.point(i);
            setup.m = cfg.m;
            setup.trials = cfg.trials;
            // Same trial streams at every point: curves along the sweep share their draws.
            setup.seed = cfg.seed;
            setup.layout = cfg.layout;
            setup.threads = options.threads;
            const std::vector<MseReport> reports = empirical_mse(setup, cfg.filters);

            for (const MseReport& rep : reports) {
                ResultRow row;
                row.model = rep.model;
                row.kind = rep.kind;
                row.params = rep.params;
                row.m = rep.m;
                row.r = rep.sensors;
                row.trials = rep.trials;
                row.failures = rep.failures;
                row.seed = cfg.seed;
                row.mse_emp = rep.mse_empirical;
                row.std_error = rep.std_error;
                row.mse_trace = rep.mse_trace;
                row.lower_bound = rep.lower_bound;
                const EigenSample* pool = needs_pool(cfg.model, rep.kind) ? &pools.get(rep.params.beta, cfg) : nullptr;
                row.mse_asym = asymptotic_mse(cfg.model, rep.kind, rep.params, pool);
                rows.push_back(row);
            }
            if (options.progress != nullptr) {
                const ScenarioParams& p = reports.front().params;
                *options.progress << (cfg.name.empty() ? "run" : cfg.name) << " [" << (c + 1) << '/' << configs.size()
                                  << "] point " << (i + 1) << '/' << cfg.values.size() << ": beta=" << p.beta
                                  << " snr_m=" << p.snr_m_db() << "dB snr_x=" << p.snr_x_db() << "dB\n";
            }
        }
    }
    return rows;
}

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "divergent";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string asym_field(const AsymptoticResult& a) {
    return a.status == AsymptoticStatus::Value ? num(a.value) : std::string(to_string(a.status));
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << kCsvHeader << '\n';
    for (const ResultRow& r : rows) {
        out << to_string(r.model) << ',' << to_string(r.kind) << ',' << num(r.params.beta) << ',' << num(r.params.alpha)
            << ',' << num(r.params.snr_m_db()) << ',' << num(r.params.omega) << ',' << num(r.params.snr_x_db()) << ','
            << r.m << ',' << r.r << ',' << r.trials << ',' << r.seed << ',' << num(r.mse_emp) << ','
            << num(r.std_error) << ',' << num(r.mse_trace) << ',' << asym_field(r.mse_asym) << ','
            << num(r.lower_bound) << '\n';
    }
}

void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_csv(out, rows);
    out.flush();
    if (!out) throw std::runtime_error("error while writing " + path);
}

void print_summary(std::ostream& out, const std::vector<ResultRow>& rows) {
    const auto saved = out.flags();
    out << std::left << std::setw(6) << "model" << std::setw(14) << "filter" << std::setw(9) << "beta" << std::setw(9)
        << "snr_m" << std::setw(9) << "snr_x" << std::setw(7) << "r" << std::setw(24) << "mse_emp (stderr)"
        << std::setw(13) << "mse_trace" << std::setw(13) << "mse_asym" << "lower_bound\n";
    for (const ResultRow& r : rows) {
        std::ostringstream emp;
        emp << std::setprecision(4) << r.mse_emp << " (" << std::setprecision(2) << r.std_error << ")";
        if (r.failures > 0) emp << " f" << r.failures;
        std::ostringstream asym;
        asym << std::setprecision(4);
        if (r.mse_asym.finite()) asym << r.mse_asym.value;
        else asym << to_string(r.mse_asym.status);
        out << std::left << std::setprecision(4) << std::setw(6) << to_string(r.model) << std::setw(14)
            << to_string(r.kind) << std::setw(9) << r.params.beta << std::setw(9) << r.params.snr_m_db() << std::setw(9)
            << r.params.snr_x_db() << std::setw(7) << r.r << std::setw(24) << emp.str() << std::setw(13)
            << r.mse_trace << std::setw(13) << asym.str() << r.lower_bound << '\n';
    }
    out.flags(saved);
}

}  // namespace fieldrec
