#pragma once

#include <complex>
#include <cstdint>

namespace ccrlab {

// Rotation angle alpha of the Weyl algebra. Rational mode means
// alpha = 2*pi*p/q with p/q a reduced fraction, so every phase attached to
// this angle is a 4q-th root of e^{i*pi} and can be tracked as an integer
// exponent. Real mode keeps alpha as a plain double; phases become unit
// complex numbers with 1e-12 tolerances downstream.
class Angle {
 public:
  static Angle rational(long long p, long long q);
  static Angle real(double alpha);

  bool is_rational() const { return rational_; }
  long long p() const { return p_; }
  long long q() const { return q_; }
  double value() const;  // alpha in radians

  friend bool operator==(const Angle& a, const Angle& b);
  friend bool operator!=(const Angle& a, const Angle& b) { return !(a == b); }

 private:
  Angle() = default;
  bool rational_ = true;
  long long p_ = 0;
  long long q_ = 1;
  double alpha_ = 0.0;
};

// e^{i*pi*e/(2q)}. The exponent is reduced mod 4q before evaluation and the
// lower half circle is built as the conjugate of the upper half, so exponents
// e and -e always yield bitwise-conjugate values. Rational-mode exactness
// guarantees rely on this.
std::complex<double> root_of_unity(long long q, long long e);

}  // namespace ccrlab
