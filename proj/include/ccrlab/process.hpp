#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ccrlab/spectral.hpp"

namespace ccrlab {

// Partition 0 = t_0 < t_1 < ... < t_n = beta of the KMS circle.
class TimeGrid {
 public:
  static TimeGrid uniform(double beta, int steps);
  static TimeGrid from_times(std::vector<double> times);

  double beta() const { return times_.back(); }
  int steps() const { return static_cast<int>(times_.size()) - 1; }
  const std::vector<double>& times() const { return times_; }
  std::vector<double> increments() const;

 private:
  explicit TimeGrid(std::vector<double> times) : times_(std::move(times)) {}
  std::vector<double> times_;
};

// Spectral data of H together with the site-value map q_j; shared by the
// exact-moment, positivity, and sampling routines.
class ProcessModel {
 public:
  ProcessModel(const HermitianMatrix& h, RealVector site_values);

  const EigDecomp& eig() const { return eig_; }
  const RealVector& values() const { return values_; }
  Eigen::Index sites() const { return values_.size(); }
  double ground() const { return ground_; }

  // e^{-delta (H - lambda_min)}; the shift keeps large beta stable and cancels
  // in every ratio because increments sum to beta.
  Matrix shifted_kernel(double delta) const;

  // Z in shifted units: sum_j e^{-beta (lambda_j - lambda_min)}
  double shifted_partition(double beta) const;

  // E( prod_i X_{s_i}^{p_i} ) per the cyclic trace formula, times folded into
  // [0, beta) and coincident times merged. Exact up to roundoff.
  double monomial_moment(double beta, std::vector<std::pair<double, int>> times) const;

  // E( prod_i g_i(X_{s_i}) ) for per-site weight vectors g_i evaluated on the
  // value map, times in [0, beta).
  double weighted_moment(double beta,
                         std::vector<std::pair<double, RealVector>> factors) const;

 private:
  EigDecomp eig_;
  RealVector values_;
  double ground_ = 0.0;
};

ProcessModel make_process_model(const LatticeParams& params, const PotentialExpr& v,
                                const Bindings& bindings = {});

// Normalized trace (1/N) tr(f_0(Q) e^{-d_1 H} f_1(Q) ... e^{-d_n H} f_n(Q))
// with the grid increments as the d_i. Throws if an f_i is negative somewhere
// on the spectrum of Q. Nonnegative up to roundoff.
double positivity_check(const ProcessModel& model, const std::vector<PotentialExpr>& fs,
                        const Bindings& bindings, const TimeGrid& grid);

// Degenerate chain with no heat factors: (1/N) sum_j f0(q_j).
double positivity_check(const ProcessModel& model, const PotentialExpr& f0,
                        const Bindings& bindings = {});

struct JointDist {
  TimeGrid grid;
  RealVector site_values;
  Eigen::Index sites = 0;
  std::vector<double> tensor;  // P(j_1..j_n), row-major, j_n fastest
  double normalization = 0.0;  // shifted partition function

  double mass() const;
  double min_entry() const;
  // marginal of the site index at t_k, k = 1..n
  std::vector<double> site_marginal(int k) const;
  // E( prod f_k(X_{t_k}) ) summed over the tensor
  double tensor_moment(const std::vector<RealVector>& factors) const;
};

// Exact joint distribution of the site process on the grid:
// P(j_1..j_n) = K_1[j_n, j_1] K_2[j_1, j_2] ... K_n[j_{n-1}, j_n] / Z.
JointDist joint_distribution(const ProcessModel& model, const TimeGrid& grid,
                             std::size_t budget = std::size_t{1} << 20);

struct PathBatch {
  std::uint64_t seed = 0;
  TimeGrid grid;
  RealVector site_values;
  std::vector<std::vector<int>> sites;  // per path, n+1 entries; first == last

  std::size_t count() const { return sites.size(); }
  double value(std::size_t path, int k) const { return site_values(sites[path][k]); }
};

// Exact cyclic sampling: anchor from the diagonal of the ordered kernel
// product, then a conditional bridge with cached suffix products. Driven by a
// counter-based generator keyed on (seed, path, step), so output is
// bit-identical for a fixed seed regardless of thread count.
PathBatch sample_paths(const ProcessModel& model, const TimeGrid& grid, std::size_t count,
                       std::uint64_t seed, int threads = 1);

struct StationarityReport {
  double max_discrepancy = 0.0;
  int pairs_checked = 0;
};

// Compares exact two-point moments E(X_s X_t) against the grid shifted by h
// (mod beta). Trace cyclicity makes the discrepancy pure roundoff.
StationarityReport stationarity_check(const ProcessModel& model, const TimeGrid& grid,
                                      double shift);

// A cylinder monomial prod X_{t_i} with times in [0, beta/2].
using OsMonomial = std::vector<double>;

// Default family {1, X_{beta/4}, X_{beta/4}^2, X_0 X_{beta/4}} truncated to size.
std::vector<OsMonomial> default_os_family(double beta, int size = 4);

// Minimum eigenvalue of the Osterwalder-Schrader Gram matrix
// G[i][j] = E( (Theta F_i) F_j ), Theta the time reflection t -> beta - t,
// built from exact moments. Grid must be symmetric about beta/2.
double reflection_positivity_check(const ProcessModel& model, const TimeGrid& grid,
                                   const std::vector<OsMonomial>& family);

}  // namespace ccrlab
