#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "ccrlab/parallel.hpp"
#include "ccrlab/process.hpp"

using namespace ccrlab;

namespace {

ProcessModel harmonic_model(int sites, double theta = 0.0, double phi = 0.0) {
  const auto params = LatticeParams::commensurate(1, sites, sites, theta, phi);
  return make_process_model(params, PotentialExpr::parse("x^2/2"));
}

}  // namespace

TEST_CASE("time grid validation") {
  const TimeGrid g = TimeGrid::uniform(2.0, 4);
  CHECK(g.beta() == 2.0);
  CHECK(g.steps() == 4);
  CHECK(g.times().front() == 0.0);
  CHECK(g.times().back() == 2.0);
  const auto inc = g.increments();
  CHECK(inc.size() == 4);
  CHECK(std::accumulate(inc.begin(), inc.end(), 0.0) == doctest::Approx(2.0));

  CHECK_THROWS_AS(TimeGrid::uniform(0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::from_times({0.0}), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::from_times({0.1, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::from_times({0.0, 0.5, 0.5}), std::invalid_argument);
  CHECK(TimeGrid::from_times({0.0, 0.25, 1.0}).steps() == 2);
}

TEST_CASE("single-time joint distribution is the thermal diagonal") {
  const ProcessModel model = harmonic_model(12);
  const TimeGrid grid = TimeGrid::uniform(1.0, 1);
  const JointDist dist = joint_distribution(model, grid);

  REQUIRE(dist.tensor.size() == 12);
  CHECK(dist.mass() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dist.min_entry() >= -1e-12);

  const Matrix k = model.shifted_kernel(1.0);
  const double z = model.shifted_partition(1.0);
  for (int j = 0; j < 12; ++j)
    CHECK(dist.tensor[j] == doctest::Approx(k(j, j).real() / z).epsilon(1e-12));
}

TEST_CASE("joint tensors are nonnegative probability laws") {
  for (double beta : {0.5, 1.0, 2.0}) {
    for (int n : {2, 3}) {
      const ProcessModel model = harmonic_model(8);
      const JointDist dist = joint_distribution(model, TimeGrid::uniform(beta, n));
      CHECK(dist.min_entry() >= -1e-12);
      CHECK(dist.mass() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  const ProcessModel model = harmonic_model(8);
  CHECK_THROWS_AS(
      joint_distribution(model, TimeGrid::uniform(1.0, 10), std::size_t{1} << 20),
      std::invalid_argument);
}

TEST_CASE("tensor moments match the trace formula") {
  const ProcessModel model = harmonic_model(10);
  const TimeGrid grid = TimeGrid::uniform(1.5, 3);
  const JointDist dist = joint_distribution(model, grid);

  RealVector linear = model.values();
  RealVector square = model.values().cwiseProduct(model.values());
  for (const RealVector& f : {linear, square}) {
    std::vector<RealVector> factors{f, f, f};
    const double from_tensor = dist.tensor_moment(factors);
    const double from_trace = model.weighted_moment(
        1.5, {{grid.times()[1], f}, {grid.times()[2], f}, {0.0, f}});
    CHECK(from_tensor == doctest::Approx(from_trace).epsilon(1e-10));
  }

  // first moments at a single time
  for (int k = 1; k <= 3; ++k) {
    std::vector<RealVector> factors{RealVector::Ones(10), RealVector::Ones(10),
                                    RealVector::Ones(10)};
    factors[k - 1] = linear;
    const double t = grid.times()[k] < grid.beta() ? grid.times()[k] : 0.0;
    CHECK(dist.tensor_moment(factors) ==
          doctest::Approx(model.monomial_moment(1.5, {{t, 1}})).epsilon(1e-10));
  }
}

TEST_CASE("marginal law equals the KMS position distribution") {
  const ProcessModel model = harmonic_model(12);
  const TimeGrid grid = TimeGrid::uniform(1.0, 1);
  const JointDist dist = joint_distribution(model, grid);
  for (Eigen::Index j = 0; j < 12; ++j) {
    Matrix proj = Matrix::Zero(12, 12);
    proj(j, j) = 1.0;
    const Complex byState = kms_expectation(model.eig(), 1.0, proj);
    CHECK(std::abs(dist.tensor[static_cast<std::size_t>(j)] - byState.real()) <= 1e-10);
  }
}

TEST_CASE("sampler reproduces the exact law") {
  const ProcessModel model = harmonic_model(12);
  const TimeGrid grid = TimeGrid::uniform(1.0, 3);
  const std::size_t count = 10000;
  const PathBatch batch = sample_paths(model, grid, count, 7, 1);
  REQUIRE(batch.count() == count);

  // periodicity is structural: identical first and last site
  for (std::size_t p = 0; p < count; ++p) {
    REQUIRE(batch.sites[p].size() == 4);
    CHECK(batch.sites[p].front() == batch.sites[p].back());
    for (int site : batch.sites[p]) {
      CHECK(site >= 0);
      CHECK(site < 12);
    }
  }

  // determinism: same seed, any thread count, bit-identical output
  const PathBatch again = sample_paths(model, grid, count, 7, 4);
  CHECK(batch.sites == again.sites);
  const PathBatch other = sample_paths(model, grid, count, 8, 1);
  CHECK(batch.sites != other.sites);

  // empirical marginal at t_1 vs exact site marginal, total variation
  const JointDist dist = joint_distribution(model, grid);
  const auto exact = dist.site_marginal(1);
  std::vector<double> freq(12, 0.0);
  for (std::size_t p = 0; p < count; ++p) freq[static_cast<std::size_t>(batch.sites[p][1])] += 1.0;
  double tv = 0.0;
  for (int j = 0; j < 12; ++j) tv += std::abs(freq[j] / count - exact[j]);
  CHECK(tv / 2.0 <= 0.05);

  // tuple frequencies within four standard errors of the exact tensor
  std::map<std::vector<int>, double> tuple_freq;
  for (std::size_t p = 0; p < count; ++p) {
    std::vector<int> key(batch.sites[p].begin() + 1, batch.sites[p].end());
    tuple_freq[key] += 1.0;
  }
  std::size_t checked = 0;
  for (std::size_t idx = 0; idx < dist.tensor.size(); ++idx) {
    const double prob = dist.tensor[idx];
    if (prob < 0.01) continue;
    std::vector<int> key(3);
    std::size_t rest = idx;
    for (int i = 2; i >= 0; --i) {
      key[static_cast<std::size_t>(i)] = static_cast<int>(rest % 12);
      rest /= 12;
    }
    const double se = std::sqrt(prob * (1.0 - prob) / static_cast<double>(count));
    const double observed = tuple_freq[key] / static_cast<double>(count);
    CHECK(std::abs(observed - prob) <= 4.0 * se);
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("even potential gives centered paths") {
  const ProcessModel model = harmonic_model(12);
  const TimeGrid grid = TimeGrid::uniform(1.0, 4);
  const std::size_t count = 20000;
  const PathBatch batch = sample_paths(model, grid, count, 21, 2);
  for (int k = 0; k <= 4; ++k) {
    double mean = 0.0, var = 0.0;
    for (std::size_t p = 0; p < count; ++p) mean += batch.value(p, k);
    mean /= static_cast<double>(count);
    for (std::size_t p = 0; p < count; ++p) {
      const double d = batch.value(p, k) - mean;
      var += d * d;
    }
    var /= static_cast<double>(count);
    const double sigma = std::sqrt(var / static_cast<double>(count));
    CHECK(std::abs(mean) <= 3.0 * sigma);
  }
}

TEST_CASE("positivity of the multi-time trace functional") {
  const ProcessModel model = harmonic_model(16);

  // constant 1 collapses to the normalized partition trace
  {
    const TimeGrid grid = TimeGrid::uniform(1.2, 3);
    std::vector<PotentialExpr> fs;
    for (int i = 0; i < 4; ++i) fs.push_back(PotentialExpr::parse("1"));
    const double value = positivity_check(model, fs, {}, grid);
    CHECK(value > 0.0);
    double direct = 0.0;
    for (Eigen::Index j = 0; j < 16; ++j)
      direct += std::exp(-1.2 * model.eig().eigenvalues(j));
    CHECK(value == doctest::Approx(direct / 16.0).epsilon(1e-10));
  }

  // indicator-like bumps stay nonnegative
  {
    const TimeGrid grid = TimeGrid::uniform(0.9, 3);
    std::vector<PotentialExpr> fs;
    fs.push_back(PotentialExpr::parse("exp(-(x-1)^2*4)"));
    fs.push_back(PotentialExpr::parse("exp(-x^2*8)"));
    fs.push_back(PotentialExpr::parse("exp(-(x+1)^2*4)"));
    fs.push_back(PotentialExpr::parse("x^2"));
    const double value = positivity_check(model, fs, {}, grid);
    CHECK(value >= -1e-12);
  }

  // no heat factors: plain average of f_0 over the position spectrum
  {
    const double avg = positivity_check(model, PotentialExpr::parse("x^2"));
    double direct = 0.0;
    for (Eigen::Index j = 0; j < 16; ++j)
      direct += model.values()(j) * model.values()(j);
    CHECK(avg == doctest::Approx(direct / 16.0).epsilon(1e-14));
    CHECK(avg >= 0.0);
  }

  // negative functions are rejected
  {
    const TimeGrid grid = TimeGrid::uniform(1.0, 1);
    std::vector<PotentialExpr> fs{PotentialExpr::parse("x"), PotentialExpr::parse("1")};
    CHECK_THROWS_AS(positivity_check(model, fs, {}, grid), std::domain_error);
  }
}

TEST_CASE("two-point functions are shift invariant on the circle") {
  const ProcessModel model = harmonic_model(16);
  const TimeGrid grid = TimeGrid::uniform(1.0, 4);

  const auto full_turn = stationarity_check(model, grid, 1.0);
  CHECK(full_turn.max_discrepancy <= 1e-12);
  CHECK(full_turn.pairs_checked == 10);

  const auto half_turn = stationarity_check(model, grid, 0.5);
  CHECK(half_turn.max_discrepancy <= 1e-9);

  const auto odd_shift = stationarity_check(model, grid, 0.37);
  CHECK(odd_shift.max_discrepancy <= 1e-9);

  // dependence only on |s - t| mod beta, up to reflection
  const double a = model.monomial_moment(1.0, {{0.1, 1}, {0.4, 1}});
  const double b = model.monomial_moment(1.0, {{0.6, 1}, {0.9, 1}});
  CHECK(std::abs(a - b) <= 1e-9);
  const double c = model.monomial_moment(1.0, {{0.0, 1}, {0.3, 1}});
  const double d = model.monomial_moment(1.0, {{0.0, 1}, {0.7, 1}});  // reflected lag
  CHECK(std::abs(c - d) <= 1e-9);
}

TEST_CASE("reflection positivity of the OS Gram matrix") {
  const ProcessModel model = harmonic_model(12);
  const TimeGrid grid = TimeGrid::uniform(1.0, 4);

  const double solo = reflection_positivity_check(model, grid, {OsMonomial{}});
  CHECK(solo == doctest::Approx(1.0).epsilon(1e-12));

  const double pair =
      reflection_positivity_check(model, grid, {OsMonomial{}, OsMonomial{0.25}});
  CHECK(pair >= -1e-10);

  const double full =
      reflection_positivity_check(model, grid, default_os_family(1.0, 4));
  CHECK(full >= -1e-9);

  CHECK_THROWS_AS(
      reflection_positivity_check(model, TimeGrid::from_times({0.0, 0.3, 1.0}),
                                  default_os_family(1.0, 2)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      reflection_positivity_check(model, grid, {OsMonomial{0.9}}),
      std::invalid_argument);
}

TEST_CASE("worker exceptions surface on the calling thread") {
  std::vector<int> hits(64, 0);
  CHECK_THROWS_AS(parallel_for(64, 4,
                               [&](std::size_t i) {
                                 if (i == 33) throw std::runtime_error("boom");
                                 hits[i] = 1;
                               }),
                  std::runtime_error);
  // the failing index never recorded a result
  CHECK(hits[33] == 0);
}

TEST_CASE("non-uniform grids sample correctly") {
  const auto params = LatticeParams::commensurate(1, 10, 10, 0.0, 0.0);
  const ProcessModel model = make_process_model(params, PotentialExpr::parse("x^2/2"));
  const TimeGrid grid = TimeGrid::from_times({0.0, 0.15, 0.6, 1.0});
  const JointDist dist = joint_distribution(model, grid);
  CHECK(dist.mass() == doctest::Approx(1.0).epsilon(1e-10));

  const std::size_t count = 20000;
  const PathBatch batch = sample_paths(model, grid, count, 5, 3);
  for (int k = 1; k <= 3; ++k) {
    const auto exact = dist.site_marginal(k);
    std::vector<double> freq(10, 0.0);
    for (std::size_t p = 0; p < count; ++p)
      freq[static_cast<std::size_t>(batch.sites[p][k])] += 1.0;
    double tv = 0.0;
    for (int j = 0; j < 10; ++j)
      tv += std::abs(freq[static_cast<std::size_t>(j)] / count -
                     exact[static_cast<std::size_t>(j)]);
    CHECK(tv / 2.0 <= 0.03);
  }
}

TEST_CASE("truncated-mode lattices sample the same way") {
  const auto params = LatticeParams::truncated(0.6, 10, 0.0, 0.0);
  const ProcessModel model = make_process_model(params, PotentialExpr::parse("x^2/2"));
  const TimeGrid grid = TimeGrid::uniform(1.0, 2);
  const JointDist dist = joint_distribution(model, grid);
  CHECK(dist.mass() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dist.min_entry() >= -1e-12);
  const PathBatch batch = sample_paths(model, grid, 500, 3, 2);
  for (std::size_t p = 0; p < batch.count(); ++p)
    CHECK(batch.sites[p].front() == batch.sites[p].back());
}

TEST_CASE("degenerate position values carry coherent laws") {
  // sin pairs distinct sites to equal values; indicator moments computed from
  // the trace formula must match value-grouped tensor marginals
  const ProcessModel model = harmonic_model(12);
  const TimeGrid grid = TimeGrid::uniform(1.0, 2);
  const JointDist dist = joint_distribution(model, grid);
  const auto marginal = dist.site_marginal(1);

  std::map<long long, std::vector<Eigen::Index>> classes;
  for (Eigen::Index j = 0; j < 12; ++j)
    classes[std::llround(model.values()(j) * 1e10)].push_back(j);

  bool found_degenerate = false;
  for (const auto& [value, members] : classes) {
    if (members.size() < 2) continue;
    found_degenerate = true;
    RealVector indicator = RealVector::Zero(12);
    for (Eigen::Index j : members) indicator(j) = 1.0;
    const double via_trace =
        model.weighted_moment(1.0, {{grid.times()[1], indicator}});
    double via_tensor = 0.0;
    for (Eigen::Index j : members) via_tensor += marginal[static_cast<std::size_t>(j)];
    CHECK(via_tensor == doctest::Approx(via_trace).epsilon(1e-10));
  }
  CHECK(found_degenerate);
}
