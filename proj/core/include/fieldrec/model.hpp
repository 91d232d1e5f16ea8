#pragma once

#include <cstdint>

#include "fieldrec/random.hpp"
#include "fieldrec/types.hpp"

namespace fieldrec {

/// Complex harmonic amplitudes a_k, k = -M..M, stored at row k+M.
struct FieldSpectrum {
    CVector coefficients;
    int m = 0;
    double variance = 1.0;

    Index size() const { return coefficients.size(); }
};

/// Sensor positions on the unit circle [0,1). The sink knows only
/// `mean_positions`; measurements are taken at `actual_positions`.
struct SensorLayout {
    RVector mean_positions;
    RVector actual_positions;
    double displacement_std = 0.0;

    Index size() const { return mean_positions.size(); }
};

/// The (2M+1) x r generalized Fourier matrix,
/// entry (k,q) = exp(-j 2 pi k x_q) / sqrt(2M+1).
class FourierMatrix {
public:
    FourierMatrix(CMatrix entries, int m);

    const CMatrix& entries() const { return entries_; }
    int m() const { return m_; }
    Index harmonics() const { return entries_.rows(); }
    Index sensors() const { return entries_.cols(); }
    /// (2M+1)/r for this matrix.
    double beta() const {
        return static_cast<double>(harmonics()) / static_cast<double>(sensors());
    }
    /// R = G G^H.
    CMatrix gram() const;

private:
    CMatrix entries_;
    int m_;
};

struct MeasurementSet {
    CVector values;
    double noise_variance = 0.0;

    Index size() const { return values.size(); }
};

/// Dimensionless scenario description shared by every filter and formula.
///   beta  = (2M+1)/r
///   alpha = sigma_n^2 / sigma_a^2 = 1/SNR_m
///   omega = sigma_delta * r, SNR_x = 1/omega^2
struct ScenarioParams {
    double beta = 1.0;
    double alpha = 0.0;
    double omega = 0.0;

    /// Throws std::invalid_argument unless beta > 0 and alpha, omega >= 0 (all finite).
    void validate() const;

    double snr_m_db() const;
    double snr_x_db() const;

    static double alpha_from_snr_db(double snr_m_db);
    static double omega_from_snr_db(double snr_x_db);
};

/// r = round((2M+1)/beta), at least 1.
int sensors_for(int m, double beta);
/// (2M+1)/r.
double effective_beta(int m, int r);

FieldSpectrum draw_spectrum(int m, double variance, RandomStream& rng);

SensorLayout draw_layout(int r, RandomStream& rng);

/// Positions (q-1)/r, q = 1..r.
SensorLayout regular_layout(int r);

/// Returns a copy of `layout` whose actual positions are
/// mod(mean + N(0, sigma_delta^2), 1). No draws are consumed when sigma_delta == 0.
SensorLayout apply_jitter(const SensorLayout& layout, double sigma_delta, RandomStream& rng);

FourierMatrix fourier_matrix(const RVector& positions, int m);

/// Gram matrix G G^H built from its Toeplitz generator
/// c_d = (1/(2M+1)) sum_q exp(-j 2 pi d x_q); equals fourier_matrix(x, m).gram().
CMatrix gram_from_positions(const RVector& positions, int m);

/// s = G^H a.
CVector sample_field(const FieldSpectrum& spectrum, const FourierMatrix& g);

/// p = s + n with n circularly symmetric complex Gaussian, E[n n^H] = sigma_n^2 I.
MeasurementSet measure(const CVector& s, double noise_variance, RandomStream& rng);

/// Wraps x into [0,1).
double wrap_unit(double x);

}  // namespace fieldrec
