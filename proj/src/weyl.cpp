#include "ccrlab/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ccrlab {

namespace {

// Deterministic, order-independent reduction: identical multisets of addends
// sum to bitwise-identical results no matter which algebraic route produced
// them. Rational-mode exactness of the identity checks depends on this.
Complex sum_canonical(std::vector<Complex>& addends) {
  std::sort(addends.begin(), addends.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  Complex s{0.0, 0.0};
  for (const Complex& v : addends) s += v;
  return s;
}

long long cocycle_exponent(GroupPoint x, GroupPoint y, const Angle& angle) {
  // (x.n*y.m - x.m*y.n) * alpha/2 in units of pi/(2q), alpha = 2*pi*p/q
  const long long period = 4 * angle.q();
  __int128 e = 2 * static_cast<__int128>(angle.p()) *
               (static_cast<__int128>(x.n) * y.m - static_cast<__int128>(x.m) * y.n);
  long long r = static_cast<long long>(e % period);
  if (r < 0) r += period;
  return r;
}

}  // namespace

Phase Phase::one(const Angle& angle) { return Phase(angle); }

Phase Phase::from_exponent(const Angle& angle, long long e) {
  if (!angle.is_rational())
    throw std::invalid_argument("Phase::from_exponent: angle must be rational");
  Phase p(angle);
  const long long period = 4 * angle.q();
  p.exponent_ = ((e % period) + period) % period;
  return p;
}

Phase Phase::from_unit(const Angle& angle, Complex u) {
  if (angle.is_rational())
    throw std::invalid_argument("Phase::from_unit: angle must be real mode");
  if (std::abs(std::abs(u) - 1.0) > 1e-12)
    throw std::invalid_argument("Phase::from_unit: |u| must be 1");
  Phase p(angle);
  p.unit_ = u;
  return p;
}

Complex Phase::value() const {
  if (angle_.is_rational()) return root_of_unity(angle_.q(), exponent_);
  return unit_;
}

Phase Phase::conj() const {
  Phase p(angle_);
  if (angle_.is_rational()) {
    const long long period = 4 * angle_.q();
    p.exponent_ = (period - exponent_) % period;
  } else {
    p.unit_ = std::conj(unit_);
  }
  return p;
}

Phase Phase::operator*(const Phase& other) const {
  if (angle_ != other.angle_) throw std::invalid_argument("Phase product: angle mismatch");
  Phase p(angle_);
  if (angle_.is_rational()) {
    p.exponent_ = (exponent_ + other.exponent_) % (4 * angle_.q());
  } else {
    p.unit_ = unit_ * other.unit_;
  }
  return p;
}

bool operator==(const Phase& a, const Phase& b) {
  if (a.angle_ != b.angle_) return false;
  if (a.angle_.is_rational()) return a.exponent_ == b.exponent_;
  return a.unit_ == b.unit_;
}

Phase cocycle(GroupPoint x, GroupPoint y, const Angle& angle) {
  if (angle.is_rational())
    return Phase::from_exponent(angle, cocycle_exponent(x, y, angle));
  const double arg = 0.5 * angle.value() *
                     (static_cast<double>(x.n) * static_cast<double>(y.m) -
                      static_cast<double>(x.m) * static_cast<double>(y.n));
  return Phase::from_unit(angle, std::polar(1.0, arg));
}

WeylElement WeylElement::monomial(const Angle& angle, GroupPoint x, Complex c) {
  WeylElement e(angle);
  e.set_term(x, c);
  return e;
}

WeylElement WeylElement::identity(const Angle& angle) {
  return monomial(angle, GroupPoint{0, 0});
}

Complex WeylElement::coefficient(GroupPoint x) const {
  auto it = terms_.find(x);
  return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
}

void WeylElement::set_term(GroupPoint x, Complex c) {
  if (c == Complex{0.0, 0.0}) return;
  terms_[x] = c;
}

void WeylElement::prune() {
  if (angle_.is_rational()) {
    std::erase_if(terms_, [](const auto& kv) { return kv.second == Complex{0.0, 0.0}; });
    return;
  }
  double norm = 0.0;
  for (const auto& [x, c] : terms_) norm += std::abs(c);
  const double cutoff = 1e-15 * norm;
  std::erase_if(terms_, [cutoff](const auto& kv) { return std::abs(kv.second) <= cutoff; });
}

WeylElement& WeylElement::operator+=(const WeylElement& other) {
  if (angle_ != other.angle_) throw std::invalid_argument("WeylElement sum: angle mismatch");
  for (const auto& [x, c] : other.terms_) terms_[x] += c;
  prune();
  return *this;
}

WeylElement& WeylElement::operator-=(const WeylElement& other) {
  if (angle_ != other.angle_) throw std::invalid_argument("WeylElement sum: angle mismatch");
  for (const auto& [x, c] : other.terms_) terms_[x] -= c;
  prune();
  return *this;
}

WeylElement& WeylElement::operator*=(Complex scalar) {
  for (auto& [x, c] : terms_) c *= scalar;
  prune();
  return *this;
}

bool operator==(const WeylElement& a, const WeylElement& b) {
  return a.angle_ == b.angle_ && a.terms_ == b.terms_;
}

std::string WeylElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [x, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)W(" << x.m
       << "," << x.n << ")";
  }
  return os.str();
}

WeylElement weyl_mul(const WeylElement& a, const WeylElement& b) {
  if (a.angle() != b.angle()) throw std::invalid_argument("weyl_mul: angle mismatch");
  std::map<GroupPoint, std::vector<Complex>> contributions;
  for (const auto& [x, ca] : a.terms()) {
    for (const auto& [y, cb] : b.terms()) {
      const Complex w = cocycle(x, y, a.angle()).value();
      contributions[x + y].push_back((ca * cb) * w);
    }
  }
  WeylElement result(a.angle());
  for (auto& [z, addends] : contributions) result.set_term(z, sum_canonical(addends));
  result.prune();
  return result;
}

WeylElement adjoint(const WeylElement& a) {
  WeylElement result(a.angle());
  for (const auto& [x, c] : a.terms()) result.set_term(-x, std::conj(c));
  return result;
}

WeylElement flip(const WeylElement& a) {
  WeylElement result(a.angle());
  for (const auto& [x, c] : a.terms()) result.set_term(-x, c);
  return result;
}

WeylElement d_element(GroupPoint x, const Angle& angle) {
  if (x == GroupPoint{0, 0})
    return WeylElement::monomial(angle, x, Complex{2.0, 0.0});
  WeylElement e = WeylElement::monomial(angle, x);
  e += WeylElement::monomial(angle, -x);
  return e;
}

double ccr_relation_residual(GroupPoint x, GroupPoint y, const Angle& angle) {
  WeylElement residual = weyl_mul(d_element(x, angle), d_element(y, angle));
  residual -= cocycle(x, y, angle) * d_element(x + y, angle);
  residual -= cocycle(y, x, angle) * d_element(x - y, angle);
  return one_norm(residual);
}

Complex trace(const WeylElement& a) { return a.coefficient(GroupPoint{0, 0}); }

bool is_flip_fixed(const WeylElement& a) {
  const bool exact = a.angle().is_rational();
  for (const auto& [x, c] : a.terms()) {
    const Complex mirrored = a.coefficient(-x);
    if (exact) {
      if (c != mirrored) return false;
    } else if (std::abs(c - mirrored) > 1e-12) {
      return false;
    }
  }
  return true;
}

double one_norm(const WeylElement& a) {
  double s = 0.0;
  for (const auto& [x, c] : a.terms()) s += std::abs(c);
  return s;
}

}  // namespace ccrlab
