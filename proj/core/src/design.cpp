#include "fieldrec/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fieldrec {

std::string_view to_string(DesignUnknown unknown) {
    switch (unknown) {
        case DesignUnknown::Sensors: return "r";
        case DesignUnknown::Harmonics: return "M";
        case DesignUnknown::SnrM: return "SNR_m";
    }
    return "?";
}

DesignEvaluator::DesignEvaluator(Model model, FilterKind kind, int eigen_m, int eigen_realizations,
                                 std::uint64_t seed, unsigned threads)
    : model_(model),
      kind_(kind),
      eigen_m_(eigen_m),
      eigen_realizations_(eigen_realizations),
      seed_(seed),
      threads_(threads) {
    if (kind == FilterKind::Interp) throw std::invalid_argument("design: interpolation has no asymptotic MSE");
}

const EigenSample& DesignEvaluator::pool_for(double beta, double omega) {
    const int sensors = sensors_for(eigen_m_, beta);
    for (const EigenSample& e : cache_) {
        if (e.sensors == sensors && e.omega == omega) return e;
    }
    // Common random numbers: every pool size draws from the same streams, so neighbouring
    // sizes share most sensor positions and the bisection sees a smooth curve.
    const std::uint64_t seed = derive_seed(seed_, 0, 0xe16u);
    cache_.push_back(omega > 0.0
                         ? sample_jitter_eigenvalues(beta, omega, eigen_m_, eigen_realizations_, seed, threads_)
                         : sample_eigenvalues(beta, eigen_m_, eigen_realizations_, seed, threads_));
    return cache_.back();
}

double DesignEvaluator::operator()(const ScenarioParams& params) {
    if (model_ == Model::B && kind_ == FilterKind::LmmseJitter) {
        return pseudo_analytic_lmmse_jitter(params, pool_for(params.beta, params.omega));
    }
    const bool needs_pool = kind_ != FilterKind::Matched;
    const EigenSample* eigen = needs_pool ? &pool_for(params.beta, 0.0) : nullptr;
    const AsymptoticResult res = asymptotic_mse(model_, kind_, params, eigen);
    if (res.status == AsymptoticStatus::Divergent) return std::numeric_limits<double>::infinity();
    return res.value;
}

namespace {

constexpr double kBetaMin = 0.02;
constexpr double kBetaMax = 1.0;
constexpr double kSnrMinDb = -20.0;
constexpr double kSnrMaxDb = 80.0;

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Largest beta in [kBetaMin, kBetaMax] with mse(beta) <= target, mse increasing in beta.
template <class F>
double largest_feasible_beta(F&& mse, double target) {
    double hi = kBetaMax;
    if (mse(hi) <= target) return hi;
    // Halve down to a feasible point; small beta means huge r and the most expensive pools.
    double lo = 0.5 * hi;
    while (mse(lo) > target) {
        hi = lo;
        if (lo <= kBetaMin) {
            throw InfeasibleTarget("target MSE " + fmt(target) + " not reachable even at beta = " + fmt(kBetaMin));
        }
        lo = std::max(0.5 * lo, kBetaMin);
    }
    // Relative resolution of 0.2% in beta resolves r or M to within a couple of units.
    while (hi > lo * 1.002) {
        const double mid = std::sqrt(lo * hi);
        (mse(mid) <= target ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

DesignAnswer design_query(const DesignQuery& q) {
    if (q.target_mse && !(*q.target_mse > 0.0)) throw std::invalid_argument("design: target MSE must be > 0");
    if (q.kind == FilterKind::Interp) throw std::invalid_argument("design: interpolation has no asymptotic MSE");

    const bool beta_known = q.beta.has_value() || (q.m && q.r);
    DesignUnknown unknown;
    if (!q.alpha) {
        if (!beta_known) throw std::invalid_argument("design: SNR_m is open, so beta (or M and r) must be given");
        unknown = DesignUnknown::SnrM;
    } else if (q.m && !q.r && !q.beta) {
        unknown = DesignUnknown::Sensors;
    } else if (q.r && !q.m && !q.beta) {
        unknown = DesignUnknown::Harmonics;
    } else {
        throw std::invalid_argument("design: leave exactly one of r, M, SNR_m unspecified");
    }
    if (unknown != DesignUnknown::SnrM && !q.target_mse) {
        throw std::invalid_argument("design: a target MSE is required");
    }

    // omega: given directly, or sigma_delta * r once r is known.
    auto omega_for = [&](std::optional<int> r) -> double {
        if (q.omega) return *q.omega;
        if (q.sigma_delta2) {
            if (!r) throw std::invalid_argument("design: sigma_delta^2 needs a known sensor count; give SNR_x instead");
            return std::sqrt(*q.sigma_delta2) * static_cast<double>(*r);
        }
        return 0.0;
    };
    if (q.model == Model::A && (q.omega.value_or(0.0) != 0.0 || q.sigma_delta2.value_or(0.0) != 0.0)) {
        throw std::invalid_argument("design: Model A has no position jitter");
    }

    DesignEvaluator eval(q.model, q.kind, q.eigen_m, q.eigen_realizations, q.seed, q.threads);
    DesignAnswer ans;
    ans.unknown = unknown;

    if (unknown == DesignUnknown::SnrM) {
        ScenarioParams p;
        p.beta = q.beta ? *q.beta : effective_beta(*q.m, *q.r);
        p.omega = omega_for(q.r);
        auto mse_at = [&](double snr_db) {
            ScenarioParams s = p;
            s.alpha = ScenarioParams::alpha_from_snr_db(snr_db);
            return eval(s);
        };
        ScenarioParams at_floor = p;
        at_floor.alpha = 0.0;
        const double floor = eval(at_floor);
        ans.floor = floor;
        const double target = q.target_mse ? *q.target_mse : (1.0 + q.floor_tolerance) * floor;
        if (!(target > floor)) {
            throw InfeasibleTarget("target MSE " + fmt(target) + " is at or below the MSE floor " + fmt(floor));
        }
        double lo = kSnrMinDb;
        double hi = kSnrMaxDb;
        if (mse_at(hi) > target) throw InfeasibleTarget("target MSE " + fmt(target) + " needs SNR_m above 80 dB");
        if (mse_at(lo) <= target) {
            hi = lo;
        } else {
            while (hi - lo > 1e-3) {
                const double mid = 0.5 * (lo + hi);
                (mse_at(mid) <= target ? hi : lo) = mid;
            }
        }
        ans.snr_m_db = hi;
        ans.params = p;
        ans.params.alpha = ScenarioParams::alpha_from_snr_db(hi);
        ans.mse = mse_at(hi);
        ans.target = target;
        ans.m = q.m;
        ans.r = q.r;
        for (double d : {-10.0, -5.0, 0.0, 5.0, 10.0}) ans.curve.push_back({hi + d, mse_at(hi + d)});
        return ans;
    }

    const double target = *q.target_mse;
    ScenarioParams base;
    base.alpha = *q.alpha;

    if (unknown == DesignUnknown::Sensors) {
        const int m = *q.m;
        auto mse_beta = [&](double beta) {
            ScenarioParams s = base;
            s.beta = beta;
            s.omega = omega_for(std::nullopt);
            return eval(s);
        };
        const double beta = largest_feasible_beta(mse_beta, target);
        const int r = static_cast<int>(std::ceil(static_cast<double>(harmonic_count(m)) / beta - 1e-9));
        ans.m = m;
        ans.r = r;
        ans.params = base;
        ans.params.beta = beta;
        ans.params.omega = omega_for(std::nullopt);
        ans.mse = mse_beta(beta);
        ans.target = target;
        ans.snr_m_db = base.snr_m_db();
        for (double f : {0.8, 0.9, 1.0, 1.1, 1.25}) ans.curve.push_back({beta * f, mse_beta(beta * f)});
        return ans;
    }

    // Harmonics: r fixed, so omega = sigma_delta r is fixed too.
    const int r = *q.r;
    const double omega = omega_for(r);
    auto mse_beta = [&](double beta) {
        ScenarioParams s = base;
        s.beta = beta;
        s.omega = omega;
        return eval(s);
    };
    const double beta = largest_feasible_beta(mse_beta, target);
    const int m = static_cast<int>(std::floor((static_cast<double>(r) * beta - 1.0) / 2.0));
    if (m < 0) throw InfeasibleTarget("target MSE " + fmt(target) + " leaves no harmonics at r = " + std::to_string(r));
    ans.m = m;
    ans.r = r;
    ans.params = base;
    ans.params.beta = beta;
    ans.params.omega = omega;
    ans.mse = mse_beta(beta);
    ans.target = target;
    ans.snr_m_db = base.snr_m_db();
    for (double f : {0.8, 0.9, 1.0, 1.1, 1.25}) ans.curve.push_back({beta * f, mse_beta(beta * f)});
    return ans;
}

}  // namespace fieldrec
