#pragma once

#include <Eigen/Dense>
#include <complex>

namespace ccrlab {

using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

// Dense-matrix dimension cap; builders refuse larger problems.
inline constexpr Eigen::Index kMaxMatrixDim = 4096;

double max_abs(const Matrix& a);

// Spectral norm (largest singular value).
double operator_norm(const Matrix& a);

bool all_finite(const Matrix& a);

// Dense complex square matrix validated as Hermitian:
// max|A - A*| <= 1e-13 * max|A|, all entries finite.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Matrix m);
  const Matrix& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

// Dense complex square matrix validated as unitary: max|U*U - I| <= 1e-12.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Matrix m);
  const Matrix& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

}  // namespace ccrlab
