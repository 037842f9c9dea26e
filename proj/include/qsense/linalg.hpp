#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qsense {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

// Solves A X + X A = B for Hermitian positive semidefinite A, restricted to
// the support of A. Works in the eigenbasis of A: X_ij = B_ij / (a_i + a_j),
// and components with a_i + a_j below support_tol * a_max are set to zero.
// The largest dropped component of B is reported in outside_support_norm.
struct LyapunovResult {
  CMatrix solution;
  double outside_support_norm = 0.0;
};
LyapunovResult solve_symmetric_sylvester(const CMatrix& a, const CMatrix& b,
                                         double support_tol = 1e-12);

// Spectral decomposition with eigenvalues closer than merge_gap merged into a
// single projector. Eigenvalues ascend.
struct SpectralDecomposition {
  std::vector<double> values;
  std::vector<CMatrix> projectors;
  CMatrix eigenvectors;  // columns, one per (unmerged) eigenvalue
  RVector raw_values;
};
SpectralDecomposition hermitian_spectral(const CMatrix& m, double merge_gap = 1e-9);

double hermiticity_defect(const CMatrix& m);

}  // namespace qsense
