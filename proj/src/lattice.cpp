#include "ccrlab/lattice.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ccrlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Matrix matrix_power(const Matrix& a, long long k) {
  const Eigen::Index n = a.rows();
  Matrix result = Matrix::Identity(n, n);
  Matrix base = k >= 0 ? a : Matrix(a.adjoint());  // unitary inverse
  long long e = std::llabs(k);
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

ComplexVector vector_power(const ComplexVector& d, long long k) {
  ComplexVector base = k >= 0 ? d : ComplexVector(d.conjugate());  // unit entries
  ComplexVector result = ComplexVector::Ones(d.size());
  for (long long i = 0; i < std::llabs(k); ++i) result = result.cwiseProduct(base);
  return result;
}

Matrix hermitize(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

}  // namespace

LatticeParams LatticeParams::commensurate(long long p, long long q, Eigen::Index sites,
                                          double theta, double phi) {
  if (p < 1 || q < 1) throw std::invalid_argument("LatticeParams: need p >= 1, q >= 1");
  const long long g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (sites < 1) throw std::invalid_argument("LatticeParams: need at least one site");
  if (sites > kMaxMatrixDim)
    throw std::invalid_argument("LatticeParams: site count exceeds cap 4096");
  if (sites % q != 0)
    throw std::invalid_argument(
        "LatticeParams: commensurate mode needs the site count divisible by q");
  LatticeParams lp;
  lp.mode_ = LatticeMode::commensurate;
  lp.p_ = p;
  lp.q_ = q;
  lp.sites_ = sites;
  lp.tau_ = std::sqrt(kTwoPi * static_cast<double>(p) / static_cast<double>(q));
  lp.theta_ = theta;
  lp.phi_ = phi;
  return lp;
}

LatticeParams LatticeParams::truncated(double tau, Eigen::Index sites, double theta,
                                       double phi) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("LatticeParams: tau must be positive and finite");
  if (sites < 1) throw std::invalid_argument("LatticeParams: need at least one site");
  if (sites > kMaxMatrixDim)
    throw std::invalid_argument("LatticeParams: site count exceeds cap 4096");
  LatticeParams lp;
  lp.mode_ = LatticeMode::truncated;
  lp.tau_ = tau;
  lp.sites_ = sites;
  lp.theta_ = theta;
  lp.phi_ = phi;
  return lp;
}

Angle LatticeParams::angle() const {
  if (mode_ == LatticeMode::commensurate) return Angle::rational(p_, q_);
  return Angle::real(alpha());
}

double LatticeParams::site_phase(Eigen::Index j) const {
  const long long centered = static_cast<long long>(j) - static_cast<long long>(sites_ / 2);
  if (mode_ == LatticeMode::commensurate) {
    long long r = (p_ * centered) % q_;
    if (r < 0) r += q_;
    return kTwoPi * static_cast<double>(r) / static_cast<double>(q_) + phi_;
  }
  return static_cast<double>(centered) * alpha() + phi_;
}

double LatticeParams::site_value(Eigen::Index j) const {
  return std::sin(site_phase(j)) / tau_;
}

LatticeParams LatticeParams::with_phases(double theta, double phi) const {
  LatticeParams lp = *this;
  lp.theta_ = theta;
  lp.phi_ = phi;
  return lp;
}

UnitaryMatrix build_shift(const LatticeParams& params) {
  const Eigen::Index n = params.sites();
  Matrix s = Matrix::Zero(n, n);
  const Complex wrap = std::polar(1.0, params.theta());
  if (n == 1) {
    s(0, 0) = wrap;
  } else {
    for (Eigen::Index k = 1; k < n; ++k) s(k, k - 1) = 1.0;
    s(0, n - 1) = wrap;
  }
  return UnitaryMatrix(std::move(s));
}

HermitianMatrix build_position_diag(const LatticeParams& params) {
  const Eigen::Index n = params.sites();
  Matrix q = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) q(j, j) = params.site_value(j);
  return HermitianMatrix(std::move(q));
}

HermitianMatrix build_momentum(const LatticeParams& params) {
  const Matrix s = build_shift(params).mat();
  const Matrix raw = (s - s.adjoint()) / Complex(0.0, 2.0 * params.tau());
  return HermitianMatrix(hermitize(raw));
}

namespace {

// Clock diagonal e^{i psi_j}; commensurate entries go through the exact
// root-of-unity table so the rotation relation closes to machine precision.
ComplexVector clock_diag(const LatticeParams& params) {
  const Eigen::Index n = params.sites();
  ComplexVector d(n);
  const Complex offset = std::polar(1.0, params.phi());
  for (Eigen::Index j = 0; j < n; ++j) {
    if (params.mode() == LatticeMode::commensurate) {
      const long long centered =
          static_cast<long long>(j) - static_cast<long long>(n / 2);
      d(j) = root_of_unity(params.q(), 4 * params.p() * centered) * offset;
    } else {
      d(j) = std::polar(1.0, params.site_phase(j));
    }
  }
  return d;
}

}  // namespace

Matrix build_weyl_rep(const LatticeParams& params, GroupPoint x) {
  if (params.mode() != LatticeMode::commensurate)
    throw std::invalid_argument("build_weyl_rep: commensurate mode required");
  const Complex minus_i{0.0, -1.0};
  const Matrix a = minus_i * build_shift(params).mat();
  const ComplexVector b = minus_i * clock_diag(params);
  // W(m,n) = e^{i m n alpha / 2} W(m,0) W(0,n); the W(0,n) factor is diagonal
  const Complex phase = root_of_unity(params.q(), 2 * params.p() * x.m * x.n);
  Matrix result = matrix_power(a, x.m) * vector_power(b, x.n).asDiagonal();
  return phase * result;
}

Matrix represent(const WeylElement& a, const LatticeParams& params) {
  if (params.mode() != LatticeMode::commensurate)
    throw std::invalid_argument("represent: commensurate mode required");
  if (!(a.angle() == params.angle()))
    throw std::invalid_argument("represent: element angle does not match lattice angle");
  const Eigen::Index n = params.sites();
  Matrix acc = Matrix::Zero(n, n);
  for (const auto& [x, c] : a.terms()) acc += c * build_weyl_rep(params, x);
  return acc;
}

HermitianMatrix build_hamiltonian(const LatticeParams& params, const PotentialExpr& v,
                                  const Bindings& bindings) {
  const Eigen::Index n = params.sites();
  const Matrix p = build_momentum(params).mat();
  Matrix h = 0.5 * (p * p);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double vj = v.eval(params.site_value(j), bindings);
    if (!std::isfinite(vj))
      throw std::domain_error("build_hamiltonian: potential evaluated non-finite at site " +
                              std::to_string(j));
    h(j, j) += vj;
  }
  return HermitianMatrix(hermitize(h));
}

UnitaryMatrix fourier_matrix(const LatticeParams& params) {
  const Eigen::Index n = params.sites();
  Matrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    const long long centered = static_cast<long long>(j) - static_cast<long long>(n / 2);
    for (Eigen::Index k = 0; k < n; ++k) {
      long long r = (centered * static_cast<long long>(k)) % static_cast<long long>(n);
      if (r < 0) r += n;
      f(j, k) = root_of_unity(n, 4 * r) * scale;
    }
  }
  return UnitaryMatrix(std::move(f));
}

double fourier_conjugacy_check(const LatticeParams& params) {
  if (params.mode() != LatticeMode::commensurate || params.p() != 1 ||
      params.sites() != params.q())
    throw std::invalid_argument(
        "fourier_conjugacy_check: commensurate mode with p = 1 and N = q required");
  const Matrix f = fourier_matrix(params).mat();
  const Matrix p = build_momentum(params).mat();
  const Matrix q = build_position_diag(params).mat();
  return operator_norm(f * p * f.adjoint() - q);
}

bool RepReport::pass(double relation_tol, double norm_tol) const {
  return relation_residual_max <= relation_tol && momentum_identity <= relation_tol &&
         position_identity <= relation_tol && commutation_residual <= relation_tol &&
         norm_excess_max <= norm_tol;
}

std::string RepReport::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "ccr relation residual (|m|,|n| <= 3): " << relation_residual_max << "\n"
     << "momentum generator identity:          " << momentum_identity << "\n"
     << "position generator identity:          " << position_identity << "\n"
     << "commutation relation residual:        " << commutation_residual << "\n"
     << "norm bound excess over 2:             " << norm_excess_max << "\n";
  return os.str();
}

RepReport verify_rep(const LatticeParams& params) {
  if (params.mode() != LatticeMode::commensurate)
    throw std::invalid_argument("commensurate mode required");
  const Angle angle = params.angle();
  constexpr long long kRange = 3;

  std::map<GroupPoint, Matrix> d_images;
  for (long long m = -2 * kRange; m <= 2 * kRange; ++m)
    for (long long n = -2 * kRange; n <= 2 * kRange; ++n) {
      const GroupPoint x{m, n};
      const Matrix w = build_weyl_rep(params, x);
      d_images.emplace(x, w + w.adjoint());
    }

  RepReport report;
  for (long long mx = -kRange; mx <= kRange; ++mx)
    for (long long nx = -kRange; nx <= kRange; ++nx)
      for (long long my = -kRange; my <= kRange; ++my)
        for (long long ny = -kRange; ny <= kRange; ++ny) {
          const GroupPoint x{mx, nx}, y{my, ny};
          const Matrix lhs = d_images.at(x) * d_images.at(y);
          const Matrix rhs = cocycle(x, y, angle).value() * d_images.at(x + y) +
                             cocycle(y, x, angle).value() * d_images.at(x - y);
          report.relation_residual_max =
              std::max(report.relation_residual_max, operator_norm(lhs - rhs));
        }

  const Matrix p2 = 2.0 * params.tau() * build_momentum(params).mat();
  const Matrix q2 = 2.0 * params.tau() * build_position_diag(params).mat();
  report.momentum_identity = operator_norm(d_images.at({1, 0}) - p2);
  report.position_identity = operator_norm(d_images.at({0, 1}) - q2);

  const Matrix u = build_weyl_rep(params, {0, 1});
  const Matrix v = build_weyl_rep(params, {1, 0});
  const Complex ei_alpha = root_of_unity(params.q(), 4 * params.p());
  report.commutation_residual = operator_norm(u * v - ei_alpha * (v * u));

  for (long long m = -kRange; m <= kRange; ++m)
    for (long long n = -kRange; n <= kRange; ++n)
      report.norm_excess_max = std::max(
          report.norm_excess_max, operator_norm(d_images.at({m, n})) - 2.0);

  return report;
}

}  // namespace ccrlab
