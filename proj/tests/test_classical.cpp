#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ccrlab/classical.hpp"

using namespace ccrlab;

namespace {

// Oscillation period by quadrature: with turning point a and energy
// E = a^2/2 + g a^4/4, the substitution x = a sin(u) removes the endpoint
// singularity and leaves T = 4 int_0^{pi/2} du / sqrt(1 + g a^2 (1+sin^2 u)/2).
double period_by_quadrature(double g, double a) {
  const int n = 20000;  // Simpson rule, even count
  const double h = std::numbers::pi / 2.0 / n;
  auto f = [&](double u) {
    const double s = std::sin(u);
    return 1.0 / std::sqrt(1.0 + 0.5 * g * a * a * (1.0 + s * s));
  };
  double acc = f(0.0) + f(std::numbers::pi / 2.0);
  for (int i = 1; i < n; ++i) acc += f(i * h) * ((i % 2) ? 4.0 : 2.0);
  return 4.0 * acc * h / 3.0;
}

}  // namespace

TEST_CASE("linear spring reproduces cos t") {
  const double dt = 1e-3;
  const long long steps = 6283;
  const auto traj = integrate(0.0, 1.0, 0.0, dt, steps, 100);
  for (const OscState& s : traj) {
    CHECK(std::abs(s.x - std::cos(s.t)) <= 1e-9);
    CHECK(std::abs(s.v + std::sin(s.t)) <= 1e-9);
  }
  // one full turn of the linear oscillator
  CHECK(std::abs(traj.back().x - 1.0) <= 1e-6);
}

TEST_CASE("equilibrium stays put") {
  const auto traj = integrate(1.0, 0.0, 0.0, 1e-2, 1000, 50);
  for (const OscState& s : traj) {
    CHECK(s.x == 0.0);
    CHECK(s.v == 0.0);
  }
}

TEST_CASE("hardening spring shortens the period") {
  const double g = 1.0;
  const double dt = 1e-4;
  const auto traj = integrate(g, 1.0, 0.0, dt, 80000);
  // the first velocity downcrossing after t = 0 is the return to maximum x,
  // i.e. one full period
  double period = 0.0;
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    if (traj[i].v > 0.0 && traj[i + 1].v <= 0.0 && traj[i].t > 1.0) {
      const double frac = traj[i].v / (traj[i].v - traj[i + 1].v);
      period = traj[i].t + frac * dt;
      break;
    }
  }
  REQUIRE(period > 0.0);
  CHECK(period < 2.0 * std::numbers::pi);
  CHECK(period == doctest::Approx(period_by_quadrature(g, 1.0)).epsilon(1e-6));
  // sanity of the oracle itself at g = 0
  CHECK(period_by_quadrature(0.0, 1.0) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("energy expression and conservation") {
  CHECK(energy({1.0, 0.0, 0.0}, 1.0) == 0.75);
  CHECK(energy({0.0, 2.0, 0.0}, 0.0) == 2.0);
  CHECK(energy({0.0, 2.0, 0.0}, 17.5) == 2.0);

  const double g = 1.0;
  const auto traj = integrate(g, 1.0, 0.0, 1e-3, 1000000, 10000);
  const double e0 = energy(traj.front(), g);
  for (const OscState& s : traj)
    CHECK(std::abs(energy(s, g) - e0) / e0 <= 1e-8);
}

TEST_CASE("forward-backward integration returns to the start") {
  const double g = 1.0;
  OscState s{0.7, -0.3, 0.0};
  for (int i = 0; i < 2000; ++i) s = rk4_step(s, g, 1e-3);
  for (int i = 0; i < 2000; ++i) s = rk4_step(s, g, -1e-3);
  CHECK(std::abs(s.x - 0.7) <= 1e-9);
  CHECK(std::abs(s.v + 0.3) <= 1e-9);
}

TEST_CASE("fourth-order convergence under step halving") {
  const double g = 1.0;
  // reference at dt = 1e-6
  OscState ref{1.0, 0.0, 0.0};
  for (int i = 0; i < 1000000; ++i) ref = rk4_step(ref, g, 1e-6);

  auto error_at = [&](double dt) {
    OscState s{1.0, 0.0, 0.0};
    const long long n = std::llround(1.0 / dt);
    for (long long i = 0; i < n; ++i) s = rk4_step(s, g, dt);
    return std::abs(s.x - ref.x);
  };
  const double coarse = error_at(2e-3);
  const double fine = error_at(1e-3);
  const double factor = coarse / fine;
  CHECK(factor >= 14.0);
  CHECK(factor <= 18.0);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(integrate(-1.0, 1.0, 0.0, 1e-3, 10), std::invalid_argument);
  CHECK_THROWS_AS(integrate(0.0, 1.0, 0.0, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(integrate(0.0, 1.0, 0.0, 1e-3, 10, 0), std::invalid_argument);
}
