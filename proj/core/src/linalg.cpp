#include "fieldrec/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace fieldrec {

namespace {

std::string condition_message(double condition) {
    std::ostringstream os;
    os << "ill-conditioned system (condition estimate " << condition << ")";
    return os.str();
}

}  // namespace

IllConditionedError::IllConditionedError(double condition)
    : std::runtime_error(condition_message(condition)), condition_(condition) {}

CMatrix solve_hpd(const CMatrix& a, const CMatrix& rhs, const SolveOptions& opts) {
    if (a.rows() != a.cols()) throw std::invalid_argument("solve_hpd: matrix must be square");
    if (a.rows() != rhs.rows()) throw std::invalid_argument("solve_hpd: dimension mismatch");
    Eigen::LLT<CMatrix> llt(a);
    if (llt.info() != Eigen::Success) {
        throw IllConditionedError(std::numeric_limits<double>::infinity());
    }
    const double rcond = llt.rcond();
    if (!(rcond > 0.0) || 1.0 / rcond > opts.max_condition) {
        throw IllConditionedError(rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity());
    }
    return llt.solve(rhs);
}

CMatrix inverse_hpd(const CMatrix& a, const SolveOptions& opts) {
    return solve_hpd(a, CMatrix::Identity(a.rows(), a.cols()), opts);
}

CMatrix hermitian_part(const CMatrix& x) {
    CMatrix h = 0.5 * (x + x.adjoint());
    return h;
}

}  // namespace fieldrec
