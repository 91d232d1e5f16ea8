#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "fieldrec/filters.hpp"

namespace fieldrec {

/// Ingredients of the series G_x = sum_n (1/n!) W^n G_xhat Delta^n:
/// W = diag(-j 2 pi k), Delta = diag(delta).
struct SeriesExpansion {
    int order = 50;
    CVector w_diag;
    RVector delta_diag;
};

SeriesExpansion make_series(int m, const RVector& delta, int order);

/// Truncated series up to and including term `order`. Each term is formed
/// per entry in log space, |2 pi k delta_q|^n / n!, with the phase (-j sgn)^n
/// applied separately, so large orders neither overflow nor lose the 1/n!.
CMatrix jitter_series_truncated(const FourierMatrix& g_hat, const RVector& delta, int order);

/// E[G_x] = C G_xhat.
CMatrix expected_fourier(const FourierMatrix& g_hat, const CharMatrix& c);

/// E[G_x^H G_x] = G_xhat^H C^2 G_xhat + (1 - Tr{C^2}/(2M+1)) I.
CMatrix expected_gram(const FourierMatrix& g_hat, const CharMatrix& c);

/// Monte Carlo means of G_x and G_x^H G_x over Gaussian displacements about
/// fixed mean positions, with per-entry complex standard errors
/// sqrt((var Re + var Im) / draws).
struct FourierMoments {
    CMatrix mean_fourier;
    RMatrix se_fourier;
    CMatrix mean_gram;
    RMatrix se_gram;
    int draws = 0;
};

FourierMoments sample_fourier_moments(const RVector& mean_positions, int m, double sigma_delta, int draws,
                                      std::uint64_t seed);

/// A function applied both to a Hermitian matrix and to a scalar eigenvalue.
struct SpectralFunction {
    std::string name;
    std::function<CMatrix(const CMatrix&)> matrix;
    std::function<double(double)> scalar;
    bool uses_inverse = false;
};

SpectralFunction identity_function();
SpectralFunction square_function();
SpectralFunction cube_function();
SpectralFunction inverse_function();
/// x -> ab / (x + ab), the asymptotic LMMSE kernel with ab = alpha beta.
SpectralFunction lmmse_kernel(double alpha_beta);
/// c0 + c1 x + c2 x^2 + c3 x^3.
SpectralFunction cubic_polynomial(double c0, double c1, double c2, double c3);

struct PhiCheck {
    double matrix_side = 0.0;  ///< mean of Tr{g(X)}/(2M+1), g applied to X = beta R as a matrix
    double eigen_side = 0.0;   ///< mean of g over the eigenvalues of the same matrices
    bool divergent_regime = false;  ///< inverse requested at beta >= 0.35
};

PhiCheck phi_functional_check(const SpectralFunction& g, double beta, int m_large, int realizations,
                              std::uint64_t seed, unsigned threads = 0);

}  // namespace fieldrec
