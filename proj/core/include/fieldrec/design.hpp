#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <deque>
#include <vector>

#include "fieldrec/asymptotic.hpp"

namespace fieldrec {

/// Sizing question: exactly one of {sensor count, harmonic count, SNR_m} is
/// left open and solved for by bisection on the (monotone) asymptotic MSE.
///
///   m + alpha known       -> fewest sensors r meeting the target
///   r + alpha known       -> most harmonics M meeting the target
///   beta (or m and r) known, alpha open -> lowest SNR_m meeting the target;
///       without a target, lowest SNR_m within `floor_tolerance` of the MSE floor
///
/// Jitter is given either as omega (SNR_x) or as sigma_delta^2, which needs r.
struct DesignQuery {
    std::optional<double> target_mse;
    Model model = Model::A;
    FilterKind kind = FilterKind::Lmmse;
    std::optional<int> m;
    std::optional<int> r;
    std::optional<double> beta;
    std::optional<double> alpha;
    std::optional<double> omega;
    std::optional<double> sigma_delta2;
    int eigen_m = 200;
    int eigen_realizations = 50;
    std::uint64_t seed = 1;
    double floor_tolerance = 0.05;
    unsigned threads = 0;
};

enum class DesignUnknown { Sensors, Harmonics, SnrM };

std::string_view to_string(DesignUnknown unknown);

struct CurvePoint {
    double x = 0.0;  ///< beta, or SNR_m in dB
    double mse = 0.0;
};

struct DesignAnswer {
    DesignUnknown unknown = DesignUnknown::Sensors;
    ScenarioParams params;       ///< scenario at the answer
    std::optional<int> m;
    std::optional<int> r;
    double snr_m_db = 0.0;
    double mse = 0.0;            ///< asymptotic MSE at the answer
    double target = 0.0;
    std::optional<double> floor; ///< MSE as SNR_m -> infinity (SnrM queries)
    std::vector<CurvePoint> curve;  ///< MSE around the answer, sorted by x
};

class InfeasibleTarget : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Asymptotic (or, for LMMSE_JITTER under Model B, pooled large-M) MSE used by
/// the design solver. ZF past the critical ratio evaluates to +inf.
class DesignEvaluator {
public:
    DesignEvaluator(Model model, FilterKind kind, int eigen_m, int eigen_realizations, std::uint64_t seed,
                    unsigned threads = 0);

    double operator()(const ScenarioParams& params);

private:
    const EigenSample& pool_for(double beta, double omega);

    Model model_;
    FilterKind kind_;
    int eigen_m_;
    int eigen_realizations_;
    std::uint64_t seed_;
    unsigned threads_;
    std::deque<EigenSample> cache_;
};

DesignAnswer design_query(const DesignQuery& query);

}  // namespace fieldrec
