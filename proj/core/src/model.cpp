#include "fieldrec/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fieldrec {

namespace {

// exp(-j 2 pi t) with t reduced to [-1/2, 1/2] first so large k*x keeps full accuracy.
Complex unit_phasor(double t, double modulus) {
    const double reduced = t - std::round(t);
    return std::polar(modulus, -2.0 * std::numbers::pi * reduced);
}

void require_unit_interval(const RVector& positions) {
    for (Index q = 0; q < positions.size(); ++q) {
        const double x = positions[q];
        if (!(x >= 0.0 && x < 1.0)) {
            throw std::invalid_argument("sensor position " + std::to_string(q) + " = " +
                                        std::to_string(x) + " is outside [0,1)");
        }
    }
}

}  // namespace

FourierMatrix::FourierMatrix(CMatrix entries, int m) : entries_(std::move(entries)), m_(m) {
    if (m < 0) throw std::invalid_argument("harmonic half-count must be >= 0");
    if (entries_.rows() != harmonic_count(m)) {
        throw std::invalid_argument("Fourier matrix must have 2M+1 rows");
    }
}

CMatrix FourierMatrix::gram() const {
    CMatrix r = entries_ * entries_.adjoint();
    return r;
}

void ScenarioParams::validate() const {
    if (!std::isfinite(beta) || beta <= 0.0) throw std::invalid_argument("beta must be finite and > 0");
    if (!std::isfinite(alpha) || alpha < 0.0) throw std::invalid_argument("alpha must be finite and >= 0");
    if (!std::isfinite(omega) || omega < 0.0) throw std::invalid_argument("omega must be finite and >= 0");
}

double ScenarioParams::snr_m_db() const {
    if (alpha == 0.0) return std::numeric_limits<double>::infinity();
    return -10.0 * std::log10(alpha);
}

double ScenarioParams::snr_x_db() const {
    if (omega == 0.0) return std::numeric_limits<double>::infinity();
    return -20.0 * std::log10(omega);
}

double ScenarioParams::alpha_from_snr_db(double snr_m_db) {
    if (std::isinf(snr_m_db) && snr_m_db > 0) return 0.0;
    return std::pow(10.0, -snr_m_db / 10.0);
}

double ScenarioParams::omega_from_snr_db(double snr_x_db) {
    if (std::isinf(snr_x_db) && snr_x_db > 0) return 0.0;
    return std::pow(10.0, -snr_x_db / 20.0);
}

int sensors_for(int m, double beta) {
    if (m < 0) throw std::invalid_argument("harmonic half-count must be >= 0");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and > 0");
    const double r = std::round(static_cast<double>(harmonic_count(m)) / beta);
    return r < 1.0 ? 1 : static_cast<int>(r);
}

double effective_beta(int m, int r) {
    if (r < 1) throw std::invalid_argument("sensor count must be >= 1");
    return static_cast<double>(harmonic_count(m)) / static_cast<double>(r);
}

double wrap_unit(double x) {
    double w = x - std::floor(x);
    if (w >= 1.0) w = 0.0;
    return w;
}

FieldSpectrum draw_spectrum(int m, double variance, RandomStream& rng) {
    if (m < 0) throw std::invalid_argument("harmonic half-count must be >= 0");
    if (!(variance > 0.0)) throw std::invalid_argument("spectrum variance must be > 0");
    FieldSpectrum a;
    a.m = m;
    a.variance = variance;
    a.coefficients.resize(harmonic_count(m));
    for (Index k = 0; k < a.coefficients.size(); ++k) a.coefficients[k] = rng.complex_normal(variance);
    return a;
}

SensorLayout draw_layout(int r, RandomStream& rng) {
    if (r < 1) throw std::invalid_argument("sensor count must be >= 1");
    SensorLayout layout;
    layout.mean_positions.resize(r);
    for (int q = 0; q < r; ++q) layout.mean_positions[q] = rng.uniform();
    layout.actual_positions = layout.mean_positions;
    return layout;
}

SensorLayout regular_layout(int r) {
    if (r < 1) throw std::invalid_argument("sensor count must be >= 1");
    SensorLayout layout;
    layout.mean_positions.resize(r);
    for (int q = 0; q < r; ++q) layout.mean_positions[q] = static_cast<double>(q) / r;
    layout.actual_positions = layout.mean_positions;
    return layout;
}

SensorLayout apply_jitter(const SensorLayout& layout, double sigma_delta, RandomStream& rng) {
    if (!(sigma_delta >= 0.0) || !std::isfinite(sigma_delta)) {
        throw std::invalid_argument("displacement std must be finite and >= 0");
    }
    SensorLayout out = layout;
    out.displacement_std = sigma_delta;
    if (sigma_delta == 0.0) {
        out.actual_positions = layout.mean_positions;
        return out;
    }
    for (Index q = 0; q < out.size(); ++q) {
        out.actual_positions[q] = wrap_unit(layout.mean_positions[q] + rng.normal(sigma_delta));
    }
    return out;
}

FourierMatrix fourier_matrix(const RVector& positions, int m) {
    if (m < 0) throw std::invalid_argument("harmonic half-count must be >= 0");
    require_unit_interval(positions);
    const Index n = harmonic_count(m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CMatrix g(n, positions.size());
    for (Index q = 0; q < positions.size(); ++q) {
        for (Index row = 0; row < n; ++row) {
            const double k = static_cast<double>(row - m);
            g(row, q) = unit_phasor(k * positions[q], scale);
        }
    }
    return FourierMatrix(std::move(g), m);
}

CMatrix gram_from_positions(const RVector& positions, int m) {
    if (m < 0) throw std::invalid_argument("harmonic half-count must be >= 0");
    require_unit_interval(positions);
    const Index n = harmonic_count(m);
    // R(k,k') = c_{k-k'}, c_d = (1/n) sum_q exp(-j 2 pi d x_q), c_{-d} = conj(c_d).
    // Powers z_q^d by recurrence, re-seeded exactly every kReseed steps to bound round-off drift.
    constexpr Index kReseed = 64;
    const Index r = positions.size();
    CVector z(r), power(r);
    for (Index q = 0; q < r; ++q) z[q] = unit_phasor(positions[q], 1.0);
    CVector c = CVector::Zero(n);
    for (Index d = 0; d < n; ++d) {
        if (d % kReseed == 0) {
            for (Index q = 0; q < r; ++q) power[q] = unit_phasor(static_cast<double>(d) * positions[q], 1.0);
        } else {
            power = power.cwiseProduct(z);
        }
        c[d] = power.sum() / static_cast<double>(n);
    }
    CMatrix gram(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
            gram(k, j) = k >= j ? c[k - j] : std::conj(c[j - k]);
        }
    }
    return gram;
}

CVector sample_field(const FieldSpectrum& spectrum, const FourierMatrix& g) {
    if (spectrum.m != g.m() || spectrum.size() != g.harmonics()) {
        throw std::invalid_argument("spectrum and Fourier matrix disagree on M");
    }
    return g.entries().adjoint() * spectrum.coefficients;
}

MeasurementSet measure(const CVector& s, double noise_variance, RandomStream& rng) {
    if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
        throw std::invalid_argument("noise variance must be finite and >= 0");
    }
    MeasurementSet p;
    p.noise_variance = noise_variance;
    p.values = s;
    if (noise_variance > 0.0) {
        for (Index q = 0; q < p.values.size(); ++q) p.values[q] += rng.complex_normal(noise_variance);
    }
    return p;
}

}  // namespace fieldrec
