#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fieldrec/filters.hpp"

namespace fieldrec {

/// Model A: known positions, noisy measurements.
/// Model B: Gaussian-jittered positions, only the means are known.
enum class Model { A, B };

std::string_view to_string(Model model);
Model parse_model(std::string_view name);

/// Normalized error covariance E[(a_hat - a)(a_hat - a)^H] / sigma_a^2.
struct PsiMatrix {
    CMatrix matrix;
    Model model = Model::A;
    FilterKind kind = FilterKind::Matched;

    /// Tr{Psi}/(2M+1).
    double normalized_mse() const {
        return matrix.trace().real() / static_cast<double>(matrix.rows());
    }
};

/// Closed-form Psi under Model A for MF, ZF and LMMSE (LMMSE_JITTER is LMMSE here):
///   MF    (beta R - I)^2 + alpha beta^2 R
///   ZF    alpha R^{-1}
///   LMMSE alpha (R + alpha I)^{-1}
/// beta is taken from g as (2M+1)/r.
PsiMatrix trace_mse_model_a(FilterKind kind, const FourierMatrix& g, double alpha,
                            const SolveOptions& opts = {});

/// Closed-form Psi under Model B, all matrices built on the mean positions:
///   MF           beta^2 R C^2 R + gamma beta^2 R - 2 beta Herm{C R} + I
///   ZF           gamma R^{-1} + (C - I)^2
///   LMMSE        A^{-1} R (C^2 R + gamma I) A^{-1} - 2 Herm{C R A^{-1}} + I,  A = R + alpha I
///   LMMSE_JITTER gamma (C R C + gamma I)^{-1}
PsiMatrix trace_mse_model_b(FilterKind kind, const FourierMatrix& g_hat, double alpha,
                            const CharMatrix& c, double gamma, const SolveOptions& opts = {});

/// Psi for an arbitrary filter under Model A,
/// (B^H G^H - I)(G B - I) + alpha B^H B.
PsiMatrix psi_model_a(const Filter& filter, const FourierMatrix& g, double alpha);

/// Psi for an arbitrary filter under Model B,
/// B^H (G^H C^2 G + gamma I) B - 2 Herm{C G B} + I, with G on the mean positions.
PsiMatrix psi_model_b(const Filter& filter, const FourierMatrix& g_hat, const CharMatrix& c,
                      double gamma);

enum class LayoutMode {
    Redraw,   ///< fresh uniform layout each trial (MSE_av)
    Fixed,    ///< one layout for every trial (MSE_x diagnostics)
    Regular,  ///< equally spaced layout
};

struct EmpiricalSetup {
    Model model = Model::A;
    ScenarioParams params;  ///< beta is nominal; r = round((2M+1)/beta)
    int m = 10;
    int trials = 100;
    std::uint64_t seed = 1;
    LayoutMode layout = LayoutMode::Redraw;
    double spectrum_variance = 1.0;
    SolveOptions solve;
    unsigned threads = 0;  ///< 0 = default_thread_count()
};

struct MseReport {
    Model model = Model::A;
    FilterKind kind = FilterKind::Matched;
    ScenarioParams params;  ///< beta is the effective (2M+1)/r actually simulated
    int m = 0;
    int sensors = 0;
    int trials = 0;        ///< trials requested
    int failures = 0;      ///< trials rejected as ill-conditioned
    std::uint64_t seed = 0;

    double mse_empirical = 0.0;  ///< mean of ||a_hat - a||^2 / ((2M+1) sigma_a^2)
    double std_error = 0.0;
    double mse_trace = 0.0;  ///< mean of Tr{Psi}/(2M+1) over the same layouts
    double trace_std_error = 0.0;
    double lower_bound = 0.0;

    /// Per-trial values, NaN for failed trials.
    std::vector<double> trial_errors;
    std::vector<double> trial_traces;

    int successes() const { return trials - failures; }
};

/// Monte Carlo MSE for several filters on shared draws: every filter sees the
/// same layout, spectrum, displacement and noise in a given trial.
std::vector<MseReport> empirical_mse(const EmpiricalSetup& setup, std::span<const FilterKind> kinds);

MseReport empirical_mse(const EmpiricalSetup& setup, FilterKind kind);

}  // namespace fieldrec
