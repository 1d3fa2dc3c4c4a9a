#include "ccrlab/angle.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace ccrlab {

Angle Angle::rational(long long p, long long q) {
  if (q == 0) throw std::invalid_argument("Angle::rational: q must be nonzero");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const long long g = std::gcd(p < 0 ? -p : p, q);
  Angle a;
  a.rational_ = true;
  a.p_ = (g != 0) ? p / g : 0;
  a.q_ = (g != 0) ? q / g : 1;
  a.alpha_ = 2.0 * std::numbers::pi * static_cast<double>(a.p_) /
             static_cast<double>(a.q_);
  return a;
}

Angle Angle::real(double alpha) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("Angle::real: alpha must be finite");
  Angle a;
  a.rational_ = false;
  a.alpha_ = alpha;
  return a;
}

double Angle::value() const { return alpha_; }

bool operator==(const Angle& a, const Angle& b) {
  if (a.rational_ != b.rational_) return false;
  if (a.rational_) return a.p_ == b.p_ && a.q_ == b.q_;
  return a.alpha_ == b.alpha_;
}

std::complex<double> root_of_unity(long long q, long long e) {
  if (q < 1) throw std::invalid_argument("root_of_unity: q must be >= 1");
  const long long period = 4 * q;
  long long m = e % period;
  if (m < 0) m += period;
  if (m > 2 * q) {
    // lower half circle: conjugate of the mirrored upper-half value
    return std::conj(root_of_unity(q, period - m));
  }
  if (m == 0) return {1.0, 0.0};
  if (m == 2 * q) return {-1.0, 0.0};
  const double x = std::numbers::pi * static_cast<double>(m) /
                   (2.0 * static_cast<double>(q));
  return {std::cos(x), std::sin(x)};
}

}  // namespace ccrlab
