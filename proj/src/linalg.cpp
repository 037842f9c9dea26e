#include "qsense/linalg.hpp"

#include "qsense/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qsense {

LyapunovResult solve_symmetric_sylvester(const CMatrix& a, const CMatrix& b, double support_tol) {
  if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols())
    throw InvalidArgument("sylvester solve: dimension mismatch");
  const Eigen::Index n = a.rows();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(a);
  if (eig.info() != Eigen::Success) throw NumericalFailure("sylvester solve: eigendecomposition failed");
  const RVector& gamma = eig.eigenvalues();
  const CMatrix& u = eig.eigenvectors();
  const double gmax = std::max(gamma.cwiseAbs().maxCoeff(), 0.0);
  const CMatrix bt = u.adjoint() * b * u;
  CMatrix xt = CMatrix::Zero(n, n);
  double outside = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double denom = gamma(i) + gamma(j);
      if (denom > support_tol * gmax && denom > 0.0) {
        xt(i, j) = bt(i, j) / denom;
      } else {
        outside = std::max(outside, std::abs(bt(i, j)));
      }
    }
  }
  CMatrix x = u * xt * u.adjoint();
  x = 0.5 * (x + x.adjoint()).eval();
  return {std::move(x), outside};
}

SpectralDecomposition hermitian_spectral(const CMatrix& m, double merge_gap) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(m);
  if (eig.info() != Eigen::Success) throw NumericalFailure("eigendecomposition failed");
  SpectralDecomposition out;
  out.raw_values = eig.eigenvalues();
  out.eigenvectors = eig.eigenvectors();
  const Eigen::Index n = m.rows();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && out.raw_values(end) - out.raw_values(end - 1) < merge_gap) ++end;
    CMatrix proj = CMatrix::Zero(n, n);
    double sum = 0.0;
    for (Eigen::Index k = start; k < end; ++k) {
      proj += out.eigenvectors.col(k) * out.eigenvectors.col(k).adjoint();
      sum += out.raw_values(k);
    }
    out.values.push_back(sum / static_cast<double>(end - start));
    out.projectors.push_back(std::move(proj));
    start = end;
  }
  return out;
}

double hermiticity_defect(const CMatrix& m) { return (m - m.adjoint()).norm(); }

}  // namespace qsense
