#pragma once

#include <string>

#include "ccrlab/expr.hpp"
#include "ccrlab/matrix.hpp"
#include "ccrlab/weyl.hpp"

namespace ccrlab {

enum class LatticeMode { commensurate, truncated };

// Finite cyclic lattice carrying the discretized operators. Commensurate mode
// fixes alpha = tau^2 = 2*pi*p/q with the site count a multiple of q, so the
// clock/shift pair satisfies the rotation relation exactly and the Weyl
// representation is available. Truncated mode takes an arbitrary step tau;
// the algebraic identities then hold only approximately and are not asserted.
class LatticeParams {
 public:
  static LatticeParams commensurate(long long p, long long q, Eigen::Index sites,
                                    double theta = 0.0, double phi = 0.0);
  static LatticeParams truncated(double tau, Eigen::Index sites, double theta = 0.0,
                                 double phi = 0.0);

  LatticeMode mode() const { return mode_; }
  double tau() const { return tau_; }
  double alpha() const { return tau_ * tau_; }
  Eigen::Index sites() const { return sites_; }
  double theta() const { return theta_; }
  double phi() const { return phi_; }
  long long p() const { return p_; }  // commensurate only
  long long q() const { return q_; }  // commensurate only

  // Angle of the represented Weyl algebra (rational in commensurate mode).
  Angle angle() const;

  // Position value q_j = sin(j*alpha + phi - c)/tau with c = floor(N/2)*alpha;
  // the window is centered at x = 0.
  double site_value(Eigen::Index j) const;

  // Phase angle psi_j = j*alpha + phi - c of the clock diagonal.
  double site_phase(Eigen::Index j) const;

  LatticeParams with_phases(double theta, double phi) const;

 private:
  LatticeParams() = default;
  LatticeMode mode_ = LatticeMode::truncated;
  double tau_ = 1.0;
  Eigen::Index sites_ = 2;
  double theta_ = 0.0;
  double phi_ = 0.0;
  long long p_ = 0, q_ = 0;
};

// Cyclic shift S: S[k, k-1] = 1 for k >= 1, S[0, N-1] = e^{i theta}.
UnitaryMatrix build_shift(const LatticeParams& params);

// diag(sin(j*alpha + phi - c)/tau); spectrum of the position operator.
HermitianMatrix build_position_diag(const LatticeParams& params);

// (S - S*)/(2 i tau); Hermitian by construction, norm <= 1/tau.
HermitianMatrix build_momentum(const LatticeParams& params);

// Image of the Weyl symbol W(m,n): e^{i m n alpha/2} (-iS)^m (-iC)^n.
// Commensurate mode only.
Matrix build_weyl_rep(const LatticeParams& params, GroupPoint x);

// Linear extension of build_weyl_rep; throws on angle mismatch.
Matrix represent(const WeylElement& a, const LatticeParams& params);

// H = 1/2 P^2 + diag(v(q_j)). Throws if the potential evaluates non-finite.
HermitianMatrix build_hamiltonian(const LatticeParams& params, const PotentialExpr& v,
                                  const Bindings& bindings = {});

// ||F P F* - Q|| with F the lattice Fourier matrix; small only for the
// aligned convention (p = 1, theta = phi = 0), reported as a diagnostic
// otherwise. Throws unless commensurate with p = 1.
double fourier_conjugacy_check(const LatticeParams& params);

// F[j,k] = e^{2 pi i (j - floor(N/2)) k / N} / sqrt(N)
UnitaryMatrix fourier_matrix(const LatticeParams& params);

struct RepReport {
  double relation_residual_max = 0.0;   // worst CCR-relation residual, |m|,|n| <= 3
  double momentum_identity = 0.0;       // ||pi(D(1,0)) - 2 tau P||
  double position_identity = 0.0;       // ||pi(D(0,1)) - 2 tau Q||
  double commutation_residual = 0.0;    // ||V U - e^{i alpha} U V||
  double norm_excess_max = 0.0;         // max ||pi(D_x)|| - 2 over the scan
  bool pass(double relation_tol = 1e-12, double norm_tol = 1e-10) const;
  std::string to_string() const;
};

// Finite checks of the represented algebra; commensurate mode only.
RepReport verify_rep(const LatticeParams& params);

}  // namespace ccrlab
