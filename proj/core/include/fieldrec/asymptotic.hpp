#pragma once

#include <optional>
#include <string_view>

#include "fieldrec/eigen_sampler.hpp"
#include "fieldrec/mse.hpp"

namespace fieldrec {

/// E[1/lambda] diverges above this ratio.
inline constexpr double kZeroForcingCriticalBeta = 0.35;

/// nu(x) = sqrt(pi/4) erf(pi x) / (pi x), nu(0) = 1. Limit of Tr{C^p}/(2M+1)
/// at x = sqrt(p/2) beta omega.
double nu(double x);

enum class AsymptoticStatus {
    Value,        ///< closed form evaluated
    Divergent,    ///< formula involves E[1/lambda] past the critical ratio
    BoundOnly,    ///< no closed form; `value` holds the lower bound
    Unavailable,  ///< nothing applies
};

std::string_view to_string(AsymptoticStatus status);

struct AsymptoticResult {
    AsymptoticStatus status = AsymptoticStatus::Unavailable;
    double value = 0.0;

    bool finite() const { return status == AsymptoticStatus::Value; }
};

/// alpha beta / (1 + alpha beta): no linear filter does better under Model A.
double lower_bound_model_a(const ScenarioParams& params);

/// beta (1 + alpha - nu(beta omega)) / (beta (1 + alpha) + nu(beta omega) (1 - beta)).
double lower_bound_model_b(const ScenarioParams& params);

double lower_bound(Model model, const ScenarioParams& params);

/// True when the E[1/lambda] estimate from the first half of the pool is
/// within 20% of the estimate from the whole pool.
bool inverse_moment_stable(const EigenSample& eigen);

/// Asymptotic MSE closed forms. Expectations over lambda are sample means over
/// `eigen` (required for ZF and LMMSE). Formulas containing E[1/lambda] report
/// Divergent when beta >= 0.35 or the inverse moment is unstable.
/// LMMSE_JITTER under Model B reports BoundOnly with the lower bound.
AsymptoticResult asymptotic_mse(Model model, FilterKind kind, const ScenarioParams& params,
                                const EigenSample* eigen = nullptr);

/// Large-M surrogate for the jitter-aware LMMSE error: the average of
/// gamma Tr{(C R C + gamma I)^{-1}}/(2M+1) over the pooled spectra of beta C R C,
/// with gamma evaluated at the pool's own M and sigma_delta.
double pseudo_analytic_lmmse_jitter(const ScenarioParams& params, const EigenSample& jitter_pool);

}  // namespace fieldrec
