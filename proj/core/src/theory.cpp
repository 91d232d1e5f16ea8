#include "fieldrec/theory.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fieldrec/asymptotic.hpp"
#include "fieldrec/linalg.hpp"
#include "fieldrec/parallel.hpp"

namespace fieldrec {

SeriesExpansion make_series(int m, const RVector& delta, int order) {
    if (order < 0) throw std::invalid_argument("series order must be >= 0");
    SeriesExpansion s;
    s.order = order;
    s.delta_diag = delta;
    s.w_diag.resize(harmonic_count(m));
    for (int k = -m; k <= m; ++k) s.w_diag[k + m] = Complex(0.0, -2.0 * std::numbers::pi * k);
    return s;
}

CMatrix jitter_series_truncated(const FourierMatrix& g_hat, const RVector& delta, int order) {
    if (delta.size() != g_hat.sensors()) throw std::invalid_argument("displacement vector does not match G");
    const SeriesExpansion s = make_series(g_hat.m(), delta, order);
    const CMatrix& g = g_hat.entries();
    CMatrix out(g.rows(), g.cols());

    for (Index q = 0; q < g.cols(); ++q) {
        for (Index row = 0; row < g.rows(); ++row) {
            // (W)_kk delta_q = -j t with t real.
            const double t = -s.w_diag[row].imag() * s.delta_diag[q];
            Complex sum{1.0, 0.0};
            if (t != 0.0) {
                const double log_t = std::log(std::abs(t));
                const double sign = t > 0.0 ? 1.0 : -1.0;
                // (-j sign)^n cycles through 1, -j sign, -1, j sign.
                const std::array<Complex, 4> phase = {Complex(1.0, 0.0), Complex(0.0, -sign), Complex(-1.0, 0.0),
                                                      Complex(0.0, sign)};
                for (int n = 1; n <= s.order; ++n) {
                    const double magnitude = std::exp(n * log_t - std::lgamma(n + 1.0));
                    sum += magnitude * phase[static_cast<std::size_t>(n % 4)];
                }
            }
            out(row, q) = sum * g(row, q);
        }
    }
    return out;
}

CMatrix expected_fourier(const FourierMatrix& g_hat, const CharMatrix& c) {
    if (c.diagonal.size() != g_hat.harmonics()) throw std::invalid_argument("C does not match G");
    CMatrix e = c.diagonal.cast<Complex>().asDiagonal() * g_hat.entries();
    return e;
}

CMatrix expected_gram(const FourierMatrix& g_hat, const CharMatrix& c) {
    const CMatrix cg = expected_fourier(g_hat, c);
    CMatrix e = cg.adjoint() * cg;
    e.diagonal().array() += 1.0 - c.trace_power(2) / static_cast<double>(g_hat.harmonics());
    return e;
}

FourierMoments sample_fourier_moments(const RVector& mean_positions, int m, double sigma_delta, int draws,
                                      std::uint64_t seed) {
    if (draws < 2) throw std::invalid_argument("need at least 2 draws");
    const Index n = harmonic_count(m);
    const Index r = mean_positions.size();
    SensorLayout layout;
    layout.mean_positions = mean_positions;
    layout.actual_positions = mean_positions;

    // Welford accumulators, real and imaginary parts separately.
    RMatrix g_mean_re = RMatrix::Zero(n, r), g_mean_im = RMatrix::Zero(n, r);
    RMatrix g_m2 = RMatrix::Zero(n, r);
    RMatrix s_mean_re = RMatrix::Zero(r, r), s_mean_im = RMatrix::Zero(r, r);
    RMatrix s_m2 = RMatrix::Zero(r, r);

    RandomStream rng(seed);
    for (int d = 1; d <= draws; ++d) {
        const SensorLayout jittered = apply_jitter(layout, sigma_delta, rng);
        const FourierMatrix g = fourier_matrix(jittered.actual_positions, m);
        const CMatrix s = g.entries().adjoint() * g.entries();
        const double w = 1.0 / d;

        const RMatrix gre = g.entries().real(), gim = g.entries().imag();
        const RMatrix dre = gre - g_mean_re, dim = gim - g_mean_im;
        g_mean_re += w * dre;
        g_mean_im += w * dim;
        g_m2.array() += dre.array() * (gre - g_mean_re).array() + dim.array() * (gim - g_mean_im).array();

        const RMatrix sre = s.real(), sim = s.imag();
        const RMatrix ere = sre - s_mean_re, eim = sim - s_mean_im;
        s_mean_re += w * ere;
        s_mean_im += w * eim;
        s_m2.array() += ere.array() * (sre - s_mean_re).array() + eim.array() * (sim - s_mean_im).array();
    }

    const double k = static_cast<double>(draws);
    FourierMoments out;
    out.draws = draws;
    out.mean_fourier = g_mean_re.cast<Complex>() + Complex(0.0, 1.0) * g_mean_im.cast<Complex>();
    out.mean_gram = s_mean_re.cast<Complex>() + Complex(0.0, 1.0) * s_mean_im.cast<Complex>();
    out.se_fourier = (g_m2 / ((k - 1.0) * k)).cwiseSqrt();
    out.se_gram = (s_m2 / ((k - 1.0) * k)).cwiseSqrt();
    return out;
}

SpectralFunction identity_function() {
    return {"x", [](const CMatrix& x) { return x; }, [](double v) { return v; }, false};
}

SpectralFunction square_function() {
    return {"x^2", [](const CMatrix& x) { CMatrix y = x * x; return y; }, [](double v) { return v * v; }, false};
}

SpectralFunction cube_function() {
    return {"x^3", [](const CMatrix& x) { CMatrix y = x * x * x; return y; },
            [](double v) { return v * v * v; }, false};
}

SpectralFunction inverse_function() {
    return {"1/x",
            [](const CMatrix& x) {
                SolveOptions opts;
                opts.max_condition = 1e15;
                return inverse_hpd(x, opts);
            },
            [](double v) { return 1.0 / v; }, true};
}

SpectralFunction lmmse_kernel(double alpha_beta) {
    if (!(alpha_beta > 0.0)) throw std::invalid_argument("lmmse_kernel needs alpha*beta > 0");
    return {"ab/(x+ab)",
            [alpha_beta](const CMatrix& x) {
                CMatrix a = x;
                a.diagonal().array() += alpha_beta;
                CMatrix y = alpha_beta * inverse_hpd(a);
                return y;
            },
            [alpha_beta](double v) { return alpha_beta / (v + alpha_beta); }, false};
}

SpectralFunction cubic_polynomial(double c0, double c1, double c2, double c3) {
    return {"cubic",
            [=](const CMatrix& x) {
                const Index n = x.rows();
                const CMatrix x2 = x * x;
                CMatrix y = c0 * CMatrix::Identity(n, n) + c1 * x + c2 * x2 + c3 * (x2 * x);
                return y;
            },
            [=](double v) { return c0 + v * (c1 + v * (c2 + v * c3)); }, false};
}

PhiCheck phi_functional_check(const SpectralFunction& g, double beta, int m_large, int realizations,
                              std::uint64_t seed, unsigned threads) {
    if (realizations < 1) throw std::invalid_argument("need at least one realization");
    PhiCheck out;
    out.divergent_regime = g.uses_inverse && beta >= kZeroForcingCriticalBeta;

    const int r = sensors_for(m_large, beta);
    const double b = effective_beta(m_large, r);
    const Index n = harmonic_count(m_large);
    std::vector<double> matrix_side(static_cast<std::size_t>(realizations));
    std::vector<double> eigen_side(static_cast<std::size_t>(realizations));

    parallel_for(static_cast<std::size_t>(realizations), threads, [&](std::size_t i) {
        RandomStream rng = derive_stream(seed, i);
        const SensorLayout layout = draw_layout(r, rng);
        const CMatrix x = b * gram_from_positions(layout.mean_positions, m_large);
        matrix_side[i] = g.matrix(x).trace().real() / static_cast<double>(n);
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(x, Eigen::EigenvaluesOnly);
        double sum = 0.0;
        for (Index j = 0; j < n; ++j) sum += g.scalar(std::max(0.0, solver.eigenvalues()[j]));
        eigen_side[i] = sum / static_cast<double>(n);
    });

    for (std::size_t i = 0; i < matrix_side.size(); ++i) {
        out.matrix_side += matrix_side[i];
        out.eigen_side += eigen_side[i];
    }
    out.matrix_side /= realizations;
    out.eigen_side /= realizations;
    return out;
}

}  // namespace fieldrec
