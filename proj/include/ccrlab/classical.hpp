#pragma once

#include <vector>

namespace ccrlab {

struct OscState {
  double x = 0.0;
  double v = 0.0;
  double t = 0.0;
};

// One classical Runge-Kutta step of x'' + x + g x^3 = 0.
OscState rk4_step(const OscState& s, double g, double dt);

// Integrate for `steps` steps of size dt, keeping every sample_every-th state
// (the initial state is always included). Throws if the state leaves the
// finite range.
std::vector<OscState> integrate(double g, double x0, double v0, double dt, long long steps,
                                long long sample_every = 1);

// v^2/2 + x^2/2 + g x^4/4
double energy(const OscState& s, double g);

}  // namespace ccrlab
