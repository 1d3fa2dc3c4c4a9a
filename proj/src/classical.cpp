#include "ccrlab/classical.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ccrlab {

namespace {

inline double accel(double x, double g) { return -x - g * x * x * x; }

}  // namespace

OscState rk4_step(const OscState& s, double g, double dt) {
  const double k1x = s.v;
  const double k1v = accel(s.x, g);
  const double k2x = s.v + 0.5 * dt * k1v;
  const double k2v = accel(s.x + 0.5 * dt * k1x, g);
  const double k3x = s.v + 0.5 * dt * k2v;
  const double k3v = accel(s.x + 0.5 * dt * k2x, g);
  const double k4x = s.v + dt * k3v;
  const double k4v = accel(s.x + dt * k3x, g);
  OscState out;
  out.x = s.x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  out.v = s.v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  out.t = s.t + dt;
  return out;
}

std::vector<OscState> integrate(double g, double x0, double v0, double dt, long long steps,
                                long long sample_every) {
  if (!(g >= 0.0)) throw std::invalid_argument("integrate: g must be >= 0");
  if (!(dt != 0.0) || !std::isfinite(dt)) throw std::invalid_argument("integrate: bad dt");
  if (steps < 0) throw std::invalid_argument("integrate: steps must be >= 0");
  if (sample_every < 1) throw std::invalid_argument("integrate: sample_every must be >= 1");

  std::vector<OscState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(steps / sample_every) + 2);
  OscState s{x0, v0, 0.0};
  trajectory.push_back(s);
  for (long long i = 1; i <= steps; ++i) {
    s = rk4_step(s, g, dt);
    if (!std::isfinite(s.x) || !std::isfinite(s.v))
      throw std::runtime_error("integrate: state became non-finite at step " +
                               std::to_string(i));
    if (i % sample_every == 0 || i == steps) trajectory.push_back(s);
  }
  return trajectory;
}

double energy(const OscState& s, double g) {
  return 0.5 * s.v * s.v + 0.5 * s.x * s.x + 0.25 * g * s.x * s.x * s.x * s.x;
}

}  // namespace ccrlab
