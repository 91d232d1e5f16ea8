#pragma once

#include <stdexcept>

#include "fieldrec/types.hpp"

namespace fieldrec {

struct SolveOptions {
    /// Systems whose estimated condition number exceeds this are rejected.
    double max_condition = 1e12;
};

/// Raised when a Gram-type system is too ill-conditioned to solve reliably.
/// Monte Carlo drivers catch it and count the trial as a reconstruction failure.
class IllConditionedError : public std::runtime_error {
public:
    explicit IllConditionedError(double condition);
    double condition() const { return condition_; }

private:
    double condition_;
};

/// Solves A X = B for Hermitian positive definite A via Cholesky, after
/// checking the 1-norm condition estimate against `opts.max_condition`.
CMatrix solve_hpd(const CMatrix& a, const CMatrix& rhs, const SolveOptions& opts = {});

CMatrix inverse_hpd(const CMatrix& a, const SolveOptions& opts = {});

/// (X + X^H) / 2, the "real part" of a square matrix in the error-covariance algebra.
CMatrix hermitian_part(const CMatrix& x);

}  // namespace fieldrec
