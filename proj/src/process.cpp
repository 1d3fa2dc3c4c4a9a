#include "ccrlab/process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ccrlab/parallel.hpp"
#include "ccrlab/rng.hpp"

namespace ccrlab {

TimeGrid TimeGrid::uniform(double beta, int steps) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("TimeGrid: beta must be positive and finite");
  if (steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
  std::vector<double> times(steps + 1);
  for (int k = 0; k <= steps; ++k) times[k] = beta * static_cast<double>(k) / steps;
  times.back() = beta;
  return TimeGrid(std::move(times));
}

TimeGrid TimeGrid::from_times(std::vector<double> times) {
  if (times.size() < 2) throw std::invalid_argument("TimeGrid: need t_0 = 0 and t_n = beta");
  if (times.front() != 0.0) throw std::invalid_argument("TimeGrid: first time must be 0");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw std::invalid_argument("TimeGrid: times must be strictly increasing");
  if (!(times.back() > 0.0) || !std::isfinite(times.back()))
    throw std::invalid_argument("TimeGrid: beta must be positive and finite");
  return TimeGrid(std::move(times));
}

std::vector<double> TimeGrid::increments() const {
  std::vector<double> d(times_.size() - 1);
  for (std::size_t i = 0; i + 1 < times_.size(); ++i) d[i] = times_[i + 1] - times_[i];
  return d;
}

ProcessModel::ProcessModel(const HermitianMatrix& h, RealVector site_values)
    : eig_(eig_hermitian(h)), values_(std::move(site_values)) {
  if (values_.size() != h.dim())
    throw std::invalid_argument("ProcessModel: value map size does not match H");
  ground_ = eig_.eigenvalues.minCoeff();
}

Matrix ProcessModel::shifted_kernel(double delta) const {
  if (delta < 0.0) throw std::invalid_argument("shifted_kernel: delta must be >= 0");
  const Eigen::Index n = eig_.eigenvalues.size();
  RealVector w(n);
  for (Eigen::Index j = 0; j < n; ++j)
    w(j) = std::exp(-delta * (eig_.eigenvalues(j) - ground_));
  const Matrix k = eig_.vectors * w.asDiagonal() * eig_.vectors.adjoint();
  return (k + k.adjoint()) / 2.0;
}

double ProcessModel::shifted_partition(double beta) const {
  double z = 0.0;
  for (Eigen::Index j = 0; j < eig_.eigenvalues.size(); ++j)
    z += std::exp(-beta * (eig_.eigenvalues(j) - ground_));
  return z;
}

ProcessModel make_process_model(const LatticeParams& params, const PotentialExpr& v,
                                const Bindings& bindings) {
  const HermitianMatrix h = build_hamiltonian(params, v, bindings);
  RealVector values(params.sites());
  for (Eigen::Index j = 0; j < params.sites(); ++j) values(j) = params.site_value(j);
  return ProcessModel(h, std::move(values));
}

double ProcessModel::weighted_moment(
    double beta, std::vector<std::pair<double, RealVector>> factors) const {
  if (!(beta > 0.0)) throw std::invalid_argument("weighted_moment: beta must be > 0");
  const Eigen::Index n = sites();
  for (auto& [t, w] : factors) {
    if (w.size() != n) throw std::invalid_argument("weighted_moment: weight size mismatch");
    if (t < 0.0 || t >= beta)
      throw std::invalid_argument("weighted_moment: times must lie in [0, beta)");
  }
  std::sort(factors.begin(), factors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // merge coincident times into a single diagonal factor
  std::vector<std::pair<double, RealVector>> merged;
  for (auto& f : factors) {
    if (!merged.empty() && merged.back().first == f.first)
      merged.back().second = merged.back().second.cwiseProduct(f.second);
    else
      merged.push_back(std::move(f));
  }

  Matrix m;
  double prev = 0.0;
  if (!merged.empty() && merged.front().first == 0.0) {
    m = merged.front().second.asDiagonal();
    merged.erase(merged.begin());
  } else {
    m = Matrix::Identity(n, n);
  }
  for (const auto& [t, w] : merged) {
    m = m * shifted_kernel(t - prev);
    m = m * w.asDiagonal();
    prev = t;
  }
  m = m * shifted_kernel(beta - prev);
  return m.trace().real() / shifted_partition(beta);
}

double ProcessModel::monomial_moment(double beta,
                                     std::vector<std::pair<double, int>> times) const {
  const Eigen::Index n = sites();
  std::vector<std::pair<double, RealVector>> factors;
  for (auto [t, power] : times) {
    if (power < 0) throw std::invalid_argument("monomial_moment: powers must be >= 0");
    // fold onto the circle; X_beta and X_0 are the same variable
    double folded = std::fmod(t, beta);
    if (folded < 0.0) folded += beta;
    RealVector w = RealVector::Ones(n);
    for (int i = 0; i < power; ++i) w = w.cwiseProduct(values_);
    factors.emplace_back(folded, std::move(w));
  }
  return weighted_moment(beta, std::move(factors));
}

double positivity_check(const ProcessModel& model, const std::vector<PotentialExpr>& fs,
                        const Bindings& bindings, const TimeGrid& grid) {
  const int n = grid.steps();
  if (fs.size() != static_cast<std::size_t>(n) + 1)
    throw std::invalid_argument("positivity_check: need one more function than increments");
  const Eigen::Index sites = model.sites();

  std::vector<RealVector> weights;
  weights.reserve(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    RealVector w(sites);
    for (Eigen::Index j = 0; j < sites; ++j) {
      w(j) = fs[i].eval(model.values()(j), bindings);
      if (!std::isfinite(w(j)) || w(j) < 0.0)
        throw std::domain_error("positivity_check: f_" + std::to_string(i) +
                                " is negative or non-finite on the position spectrum");
    }
    weights.push_back(std::move(w));
  }

  Matrix m = weights[0].asDiagonal();
  const auto increments = grid.increments();
  for (int i = 1; i <= n; ++i) {
    m = m * heat_kernel(model.eig(), increments[i - 1]);
    m = m * weights[i].asDiagonal();
  }
  return m.trace().real() / static_cast<double>(sites);
}

double positivity_check(const ProcessModel& model, const PotentialExpr& f0,
                        const Bindings& bindings) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < model.sites(); ++j) {
    const double v = f0.eval(model.values()(j), bindings);
    if (!std::isfinite(v) || v < 0.0)
      throw std::domain_error("positivity_check: f_0 is negative or non-finite on the position spectrum");
    acc += v;
  }
  return acc / static_cast<double>(model.sites());
}

double JointDist::mass() const {
  double s = 0.0;
  for (double v : tensor) s += v;
  return s;
}

double JointDist::min_entry() const {
  double m = tensor.empty() ? 0.0 : tensor.front();
  for (double v : tensor) m = std::min(m, v);
  return m;
}

std::vector<double> JointDist::site_marginal(int k) const {
  const int n = grid.steps();
  if (k < 1 || k > n) throw std::invalid_argument("site_marginal: k out of range");
  const auto count = static_cast<std::size_t>(sites);
  std::vector<double> marg(count, 0.0);
  // index decodes as (j_1 .. j_n), j_n fastest
  std::size_t stride = 1;
  for (int i = n; i > k; --i) stride *= count;
  for (std::size_t idx = 0; idx < tensor.size(); ++idx)
    marg[(idx / stride) % count] += tensor[idx];
  return marg;
}

double JointDist::tensor_moment(const std::vector<RealVector>& factors) const {
  const int n = grid.steps();
  if (factors.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("tensor_moment: need one factor per grid step");
  const auto count = static_cast<std::size_t>(sites);
  double acc = 0.0;
  for (std::size_t idx = 0; idx < tensor.size(); ++idx) {
    double w = tensor[idx];
    std::size_t rest = idx;
    for (int i = n; i >= 1; --i) {
      w *= factors[i - 1](static_cast<Eigen::Index>(rest % count));
      rest /= count;
    }
    acc += w;
  }
  return acc;
}

JointDist joint_distribution(const ProcessModel& model, const TimeGrid& grid,
                             std::size_t budget) {
  const int n = grid.steps();
  const Eigen::Index sites = model.sites();
  double entries = 1.0;
  for (int i = 0; i < n; ++i) entries *= static_cast<double>(sites);
  if (entries > static_cast<double>(budget))
    throw std::invalid_argument("joint_distribution: N^n exceeds the memory budget");

  const auto increments = grid.increments();
  std::vector<Matrix> kernels;
  kernels.reserve(n);
  for (double d : increments) kernels.push_back(model.shifted_kernel(d));
  const double z = model.shifted_partition(grid.beta());

  JointDist dist{grid, model.values(), sites, {}, z};
  dist.tensor.assign(static_cast<std::size_t>(entries), 0.0);

  // chain(j_1..j_{i}) accumulates K_2[j_1,j_2] ... ; the K_1[j_n, j_1] factor
  // closes the cycle at the leaf
  std::vector<Eigen::Index> tuple(static_cast<std::size_t>(std::max(n, 1)), 0);
  const auto fill = [&](auto&& self, int depth, std::size_t base, double chain) -> void {
    if (depth == n) {
      const Eigen::Index j1 = tuple[0];
      const Eigen::Index jn = tuple[n - 1];
      dist.tensor[base] = chain * kernels[0](jn, j1).real() / z;
      return;
    }
    for (Eigen::Index j = 0; j < sites; ++j) {
      tuple[depth] = j;
      double next = chain;
      if (depth > 0) next *= kernels[depth](tuple[depth - 1], j).real();
      self(self, depth + 1, base * static_cast<std::size_t>(sites) + static_cast<std::size_t>(j),
           next);
    }
  };
  fill(fill, 0, 0, 1.0);
  return dist;
}

namespace {

Eigen::Index sample_from_weights(const std::vector<double>& w, double u) {
  double total = 0.0;
  for (double v : w) total += v;
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::runtime_error("sample_paths: degenerate conditional weights");
  const double target = u * total;
  double cum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    cum += w[j];
    if (target < cum) return static_cast<Eigen::Index>(j);
  }
  return static_cast<Eigen::Index>(w.size() - 1);
}

}  // namespace

PathBatch sample_paths(const ProcessModel& model, const TimeGrid& grid, std::size_t count,
                       std::uint64_t seed, int threads) {
  if (count < 1) throw std::invalid_argument("sample_paths: need at least one path");
  const int n = grid.steps();
  const Eigen::Index sites = model.sites();
  const auto increments = grid.increments();

  std::vector<Matrix> kernels;
  kernels.reserve(n);
  for (double d : increments) kernels.push_back(model.shifted_kernel(d));

  // suffix[i] = K_{i+1} ... K_n (suffix[n] = I)
  std::vector<Matrix> suffix(static_cast<std::size_t>(n) + 1);
  suffix[n] = Matrix::Identity(sites, sites);
  for (int i = n - 1; i >= 1; --i) suffix[i] = kernels[i] * suffix[i + 1];
  const Matrix full = kernels[0] * suffix[1];

  std::vector<double> anchor(static_cast<std::size_t>(sites));
  for (Eigen::Index j = 0; j < sites; ++j)
    anchor[static_cast<std::size_t>(j)] = std::max(full(j, j).real(), 0.0);

  PathBatch batch{seed, grid, model.values(), {}};
  batch.sites.assign(count, {});

  parallel_for(count, threads, [&](std::size_t path) {
    std::vector<int>& out = batch.sites[path];
    out.reserve(static_cast<std::size_t>(n) + 1);
    const Eigen::Index a =
        sample_from_weights(anchor, keyed_uniform(seed, path, 0));
    out.push_back(static_cast<int>(a));
    Eigen::Index prev = a;
    std::vector<double> w(static_cast<std::size_t>(sites));
    for (int i = 1; i < n; ++i) {
      for (Eigen::Index j = 0; j < sites; ++j)
        w[static_cast<std::size_t>(j)] =
            std::max(kernels[i - 1](prev, j).real() * suffix[i](j, a).real(), 0.0);
      const Eigen::Index ji =
          sample_from_weights(w, keyed_uniform(seed, path, static_cast<std::uint64_t>(i)));
      out.push_back(static_cast<int>(ji));
      prev = ji;
    }
    out.push_back(static_cast<int>(a));  // t_n closes the period
  });
  return batch;
}

StationarityReport stationarity_check(const ProcessModel& model, const TimeGrid& grid,
                                      double shift) {
  const double beta = grid.beta();
  StationarityReport report;
  const auto& times = grid.times();
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    for (std::size_t j = i; j + 1 < times.size(); ++j) {
      const double base =
          model.monomial_moment(beta, {{times[i], 1}, {times[j], 1}});
      const double shifted =
          model.monomial_moment(beta, {{times[i] + shift, 1}, {times[j] + shift, 1}});
      report.max_discrepancy = std::max(report.max_discrepancy, std::abs(base - shifted));
      ++report.pairs_checked;
    }
  }
  return report;
}

std::vector<OsMonomial> default_os_family(double beta, int size) {
  if (size < 1 || size > 4)
    throw std::invalid_argument("default_os_family: size must be in 1..4");
  const std::vector<OsMonomial> all = {
      {}, {beta / 4.0}, {beta / 4.0, beta / 4.0}, {0.0, beta / 4.0}};
  return {all.begin(), all.begin() + size};
}

double reflection_positivity_check(const ProcessModel& model, const TimeGrid& grid,
                                   const std::vector<OsMonomial>& family) {
  const double beta = grid.beta();
  for (double t : grid.times()) {
    const double mirror = beta - t;
    const bool found = std::any_of(grid.times().begin(), grid.times().end(),
                                   [&](double s) { return std::abs(s - mirror) <= 1e-12; });
    if (!found)
      throw std::invalid_argument("reflection_positivity_check: grid not symmetric about beta/2");
  }
  if (family.empty())
    throw std::invalid_argument("reflection_positivity_check: empty function family");
  for (const OsMonomial& mono : family)
    for (double t : mono)
      if (t < 0.0 || t > beta / 2.0 + 1e-12)
        throw std::invalid_argument(
            "reflection_positivity_check: monomial times must lie in [0, beta/2]");

  const int size = static_cast<int>(family.size());
  Eigen::MatrixXd gram(size, size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      std::vector<std::pair<double, int>> times;
      for (double t : family[i]) times.emplace_back(beta - t, 1);  // time reflection
      for (double t : family[j]) times.emplace_back(t, 1);
      gram(i, j) = model.monomial_moment(beta, std::move(times));
    }
  }
  const Eigen::MatrixXd sym = (gram + gram.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace ccrlab
