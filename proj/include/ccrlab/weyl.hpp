#pragma once

#include <compare>
#include <complex>
#include <map>
#include <string>

#include "ccrlab/angle.hpp"

namespace ccrlab {

using Complex = std::complex<double>;

// A point of the group Z x Z indexing Weyl symbols.
struct GroupPoint {
  long long m = 0;
  long long n = 0;
  friend auto operator<=>(const GroupPoint&, const GroupPoint&) = default;
};

inline GroupPoint operator+(GroupPoint a, GroupPoint b) { return {a.m + b.m, a.n + b.n}; }
inline GroupPoint operator-(GroupPoint a, GroupPoint b) { return {a.m - b.m, a.n - b.n}; }
inline GroupPoint operator-(GroupPoint a) { return {-a.m, -a.n}; }

// Unit phase attached to an angle. In rational mode the phase is the integer
// exponent of e^{i*pi/(2q)} modulo 4q and products add exponents, so phase
// algebra never rounds. In real mode it is a unit complex number.
class Phase {
 public:
  static Phase one(const Angle& angle);
  static Phase from_exponent(const Angle& angle, long long e);  // rational angles only
  static Phase from_unit(const Angle& angle, Complex u);        // real angles only

  Complex value() const;
  Phase conj() const;
  Phase operator*(const Phase& other) const;
  const Angle& angle() const { return angle_; }
  long long exponent() const { return exponent_; }

  // exact in rational mode, bitwise unit comparison in real mode
  friend bool operator==(const Phase& a, const Phase& b);

 private:
  explicit Phase(const Angle& angle) : angle_(angle) {}
  Angle angle_;
  long long exponent_ = 0;  // rational mode, reduced mod 4q
  Complex unit_{1.0, 0.0};  // real mode
};

// omega(x, y) = e^{i (x.n * y.m - x.m * y.n) * alpha / 2}
Phase cocycle(GroupPoint x, GroupPoint y, const Angle& angle);

// Finite linear combination of Weyl symbols W(m,n) at a fixed angle, with
// W(x) W(y) = omega(x,y) W(x+y) and W(x)* = W(-x). Zero coefficients are
// pruned, so the stored support is exact.
class WeylElement {
 public:
  explicit WeylElement(const Angle& angle) : angle_(angle) {}
  static WeylElement monomial(const Angle& angle, GroupPoint x, Complex c = {1.0, 0.0});
  static WeylElement identity(const Angle& angle);

  const Angle& angle() const { return angle_; }
  const std::map<GroupPoint, Complex>& terms() const { return terms_; }
  Complex coefficient(GroupPoint x) const;
  bool is_zero() const { return terms_.empty(); }
  std::string to_string() const;

  WeylElement& operator+=(const WeylElement& other);
  WeylElement& operator-=(const WeylElement& other);
  WeylElement& operator*=(Complex scalar);

  friend WeylElement operator+(WeylElement a, const WeylElement& b) { return a += b; }
  friend WeylElement operator-(WeylElement a, const WeylElement& b) { return a -= b; }
  friend WeylElement operator*(WeylElement a, Complex s) { return a *= s; }
  friend WeylElement operator*(Complex s, WeylElement a) { return a *= s; }
  friend WeylElement operator*(const Phase& p, WeylElement a) { return a *= p.value(); }

  friend bool operator==(const WeylElement& a, const WeylElement& b);

 private:
  friend WeylElement weyl_mul(const WeylElement& a, const WeylElement& b);
  friend WeylElement adjoint(const WeylElement& a);
  friend WeylElement flip(const WeylElement& a);
  void set_term(GroupPoint x, Complex c);
  void prune();
  Angle angle_;
  std::map<GroupPoint, Complex> terms_;
};

// Bilinear extension of W(x) W(y) = omega(x,y) W(x+y). Throws on angle mismatch.
WeylElement weyl_mul(const WeylElement& a, const WeylElement& b);

// (sum c_x W(x))* = sum conj(c_x) W(-x)
WeylElement adjoint(const WeylElement& a);

// Flip automorphism sigma: W(x) -> W(-x), extended linearly.
WeylElement flip(const WeylElement& a);

// D_x = W(x) + W(-x); self-adjoint and flip-fixed. D_0 = 2 W(0,0).
WeylElement d_element(GroupPoint x, const Angle& angle);

// l1 coefficient norm of D_x D_y - omega(x,y) D_{x+y} - omega(y,x) D_{x-y}.
// Identically zero in exact arithmetic; rational mode reproduces that exactly.
double ccr_relation_residual(GroupPoint x, GroupPoint y, const Angle& angle);

// Canonical trace: the coefficient of W(0,0).
Complex trace(const WeylElement& a);

// True iff c_x == c_{-x} on the whole support (tolerance 1e-12 in real mode).
bool is_flip_fixed(const WeylElement& a);

// sum |c_x|; an upper bound for the operator norm in any representation.
double one_norm(const WeylElement& a);

}  // namespace ccrlab
