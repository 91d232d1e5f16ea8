#pragma once

#include <cstdint>
#include <vector>

#include "fieldrec/types.hpp"

namespace fieldrec {

/// Eigenvalues of beta R pooled over independent uniform layouts. Averages of
/// g(lambda) over `values` stand in for E[g(lambda)] under the limiting
/// eigenvalue law f_{lambda,beta}.
///
/// With omega > 0 the pooled matrix is beta C R C instead (C built from
/// sigma_delta = omega / r), which is what the jitter-aware LMMSE error needs.
struct EigenSample {
    double beta = 0.0;            ///< nominal ratio requested
    double effective_beta = 0.0;  ///< (2M+1)/r used for the scaling
    double omega = 0.0;
    int m_used = 0;
    int sensors = 0;
    int realizations = 0;
    std::vector<double> values;             ///< realization-major, 2M+1 per realization
    std::vector<double> realization_means;  ///< mean eigenvalue of each realization

    std::size_t per_realization() const { return static_cast<std::size_t>(2 * m_used + 1); }

    /// Sample mean of g over the pool, or over the first `realizations_used` realizations.
    template <class F>
    double expect(F&& g, int realizations_used = -1) const {
        const std::size_t n = realizations_used < 0
                                  ? values.size()
                                  : static_cast<std::size_t>(realizations_used) * per_realization();
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += g(values[i]);
        return n == 0 ? 0.0 : sum / static_cast<double>(n);
    }
};

/// Pools the eigenvalues of beta R over `realizations` layouts with
/// r = round((2M+1)/beta). Negative round-off below -1e-10 is an error;
/// values in [-1e-10, 0) are clamped to 0.
EigenSample sample_eigenvalues(double beta, int m_large, int realizations, std::uint64_t seed,
                               unsigned threads = 0);

/// Same pool for beta C R C with Gaussian displacement std omega / r.
EigenSample sample_jitter_eigenvalues(double beta, double omega, int m_large, int realizations,
                                      std::uint64_t seed, unsigned threads = 0);

}  // namespace fieldrec
