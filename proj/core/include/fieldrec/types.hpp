#pragma once

#include <complex>

#include <Eigen/Dense>

namespace fieldrec {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Number of harmonics 2M+1 for half-count M.
constexpr Index harmonic_count(int m) { return 2 * static_cast<Index>(m) + 1; }

}  // namespace fieldrec
