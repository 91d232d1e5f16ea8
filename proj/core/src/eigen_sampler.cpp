#include "fieldrec/eigen_sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "fieldrec/filters.hpp"
#include "fieldrec/model.hpp"
#include "fieldrec/parallel.hpp"

namespace fieldrec {

namespace {

constexpr double kNegativeFloor = -1e-10;

EigenSample pool(double beta, double omega, int m_large, int realizations, std::uint64_t seed,
                 unsigned threads) {
    if (m_large < 1) throw std::invalid_argument("eigenvalue sampling needs M >= 1");
    if (realizations < 1) throw std::invalid_argument("eigenvalue sampling needs >= 1 realization");
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw std::invalid_argument("omega must be finite and >= 0");

    EigenSample sample;
    sample.beta = beta;
    sample.omega = omega;
    sample.m_used = m_large;
    sample.sensors = sensors_for(m_large, beta);
    sample.effective_beta = effective_beta(m_large, sample.sensors);
    sample.realizations = realizations;

    const std::size_t n = sample.per_realization();
    sample.values.assign(n * static_cast<std::size_t>(realizations), 0.0);
    sample.realization_means.assign(static_cast<std::size_t>(realizations), 0.0);

    const RVector c = char_matrix(m_large, omega / static_cast<double>(sample.sensors)).diagonal;
    const bool jittered = omega > 0.0;

    parallel_for(static_cast<std::size_t>(realizations), threads, [&](std::size_t i) {
        RandomStream rng = derive_stream(seed, i);
        const SensorLayout layout = draw_layout(sample.sensors, rng);
        CMatrix x = sample.effective_beta * gram_from_positions(layout.mean_positions, m_large);
        if (jittered) x = c.cast<Complex>().asDiagonal() * x * c.cast<Complex>().asDiagonal();
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(x, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver failed");
        const RVector& ev = solver.eigenvalues();
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double v = ev[static_cast<Index>(j)];
            if (v < kNegativeFloor) throw std::runtime_error("negative eigenvalue in Gram matrix");
            if (v < 0.0) v = 0.0;
            sample.values[i * n + j] = v;
            sum += v;
        }
        sample.realization_means[i] = sum / static_cast<double>(n);
    });
    return sample;
}

}  // namespace

EigenSample sample_eigenvalues(double beta, int m_large, int realizations, std::uint64_t seed, unsigned threads) {
    return pool(beta, 0.0, m_large, realizations, seed, threads);
}

EigenSample sample_jitter_eigenvalues(double beta, double omega, int m_large, int realizations,
                                      std::uint64_t seed, unsigned threads) {
    return pool(beta, omega, m_large, realizations, seed, threads);
}

}  // namespace fieldrec
