#include "ccrlab/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace ccrlab {

double max_abs(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  // largest singular value via the Hermitian square; adequate at desk scale
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  return std::sqrt(top > 0.0 ? top : 0.0);
}

bool all_finite(const Matrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

HermitianMatrix::HermitianMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("HermitianMatrix: not square");
  if (m_.rows() > kMaxMatrixDim)
    throw std::invalid_argument("HermitianMatrix: dimension exceeds cap 4096");
  if (!all_finite(m_)) throw std::invalid_argument("HermitianMatrix: non-finite entries");
  const double scale = max_abs(m_);
  const double asym = max_abs(m_ - m_.adjoint());
  if (asym > 1e-13 * (scale > 0.0 ? scale : 1.0))
    throw std::invalid_argument("HermitianMatrix: not Hermitian within tolerance");
}

UnitaryMatrix::UnitaryMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("UnitaryMatrix: not square");
  if (m_.rows() > kMaxMatrixDim)
    throw std::invalid_argument("UnitaryMatrix: dimension exceeds cap 4096");
  if (!all_finite(m_)) throw std::invalid_argument("UnitaryMatrix: non-finite entries");
  const Matrix gram = m_.adjoint() * m_;
  const Matrix eye = Matrix::Identity(m_.rows(), m_.cols());
  if (max_abs(gram - eye) > 1e-12)
    throw std::invalid_argument("UnitaryMatrix: not unitary within tolerance");
}

}  // namespace ccrlab
