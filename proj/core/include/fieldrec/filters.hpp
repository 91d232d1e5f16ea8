#pragma once

#include <string_view>

#include "fieldrec/linalg.hpp"
#include "fieldrec/model.hpp"

namespace fieldrec {

enum class FilterKind { Matched, ZeroForcing, Lmmse, LmmseJitter, Interp };

/// "MF", "ZF", "LMMSE", "LMMSE_JITTER", "INTERP".
std::string_view to_string(FilterKind kind);
/// Case-insensitive inverse of to_string; throws std::invalid_argument.
FilterKind parse_filter_kind(std::string_view name);

/// Diagonal of the displacement characteristic-function matrix,
/// C_kk = exp(-2 pi^2 k^2 sigma_delta^2), row k+M.
struct CharMatrix {
    RVector diagonal;
    double sigma_delta = 0.0;

    int m() const { return static_cast<int>((diagonal.size() - 1) / 2); }
    /// Tr{C^p}.
    double trace_power(int p) const;
    CMatrix as_matrix() const;
};

CharMatrix char_matrix(int m, double sigma_delta);

/// gamma = 1 + alpha - Tr{C^2}/(2M+1); reduces to alpha when C = I.
double gamma_param(int m, double alpha, const CharMatrix& c);

/// A linear reconstruction filter. The estimate is a_hat = B^H p, so the
/// filter stores B^H, a (2M+1) x r matrix.
struct Filter {
    CMatrix b_adjoint;
    FilterKind kind = FilterKind::Matched;
    ScenarioParams params;

    /// B itself, r x (2M+1).
    CMatrix matrix_b() const { return b_adjoint.adjoint(); }
    Index harmonics() const { return b_adjoint.rows(); }
    Index sensors() const { return b_adjoint.cols(); }
};

/// B^H = beta G. No inversion.
Filter build_mf(const FourierMatrix& g, const ScenarioParams& params);

/// B^H = R^{-1} G. Throws IllConditionedError when R is numerically singular.
Filter build_zf(const FourierMatrix& g, const SolveOptions& opts = {});

/// B^H = (R + alpha I)^{-1} G.
Filter build_lmmse(const FourierMatrix& g, double alpha, const SolveOptions& opts = {});

/// B^H = (C R C + gamma I)^{-1} C G, built on the mean positions only.
Filter build_lmmse_jitter(const FourierMatrix& g_hat, double alpha, const CharMatrix& c,
                          double gamma, const SolveOptions& opts = {});

/// r x r matrix L taking measurements at `positions` to the regular grid
/// (q-1)/r by periodic piecewise-linear interpolation. Coincident positions
/// are averaged into a single node.
RMatrix interpolation_matrix(const RVector& positions);

/// Interpolation baseline expressed as a linear filter, B^H = beta G_{x'} L.
Filter build_interp(const RVector& positions, int m);

/// Interpolates p (taken at the layout's known positions) onto the regular
/// grid and applies beta G_{x'}.
CVector interp_estimate(const MeasurementSet& p, const SensorLayout& layout, int m);

/// a_hat = B^H p.
CVector estimate(const Filter& filter, const MeasurementSet& p);

}  // namespace fieldrec
