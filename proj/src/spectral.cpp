#include "ccrlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "ccrlab/parallel.hpp"

namespace ccrlab {

EigDecomp eig_hermitian(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.mat());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver did not converge");
  EigDecomp d;
  d.eigenvalues = solver.eigenvalues();
  d.vectors = solver.eigenvectors();
  d.residual =
      max_abs(a.mat() * d.vectors - d.vectors * d.eigenvalues.asDiagonal().toDenseMatrix());
  return d;
}

RealVector spectrum(const LatticeParams& params, const PotentialExpr& v,
                    const Bindings& bindings) {
  return eig_hermitian(build_hamiltonian(params, v, bindings)).eigenvalues;
}

ButterflyDataset butterfly_sweep(int qmax, const PotentialExpr& v, const Bindings& bindings,
                                 int phase_grid, int threads) {
  if (qmax < 1 || qmax > 64) throw std::invalid_argument("butterfly_sweep: need 1 <= qmax <= 64");
  if (phase_grid < 1) throw std::invalid_argument("butterfly_sweep: phase grid must be >= 1");

  struct Cell {
    long long p, q;
    int ti, pi;
  };
  std::vector<Cell> cells;
  for (long long q = 1; q <= qmax; ++q)
    for (long long p = 1; p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      for (int ti = 0; ti < phase_grid; ++ti)
        for (int pi = 0; pi < phase_grid; ++pi) cells.push_back({p, q, ti, pi});
    }

  const double step = 2.0 * std::numbers::pi / phase_grid;
  std::vector<std::vector<ButterflyRow>> slots(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t i) {
    const Cell& c = cells[i];
    const double theta = step * c.ti;
    const double phi = step * c.pi;
    const auto params = LatticeParams::commensurate(c.p, c.q, c.q, theta, phi);
    const RealVector ev = spectrum(params, v, bindings);
    std::vector<ButterflyRow>& out = slots[i];
    out.reserve(ev.size());
    for (int k = 0; k < ev.size(); ++k)
      out.push_back({c.p, c.q, theta, phi, k, ev(k)});
  });

  ButterflyDataset data;
  data.qmax = qmax;
  data.phase_grid = phase_grid;
  for (const auto& slot : slots) data.rows.insert(data.rows.end(), slot.begin(), slot.end());
  return data;
}

std::vector<GapReport> gap_report(const ButterflyDataset& data, double merge_tol) {
  // band k of a cell = range swept by eigenvalue index k over the phase grid
  std::map<std::pair<long long, long long>, std::map<int, Band>> sweep;
  for (const ButterflyRow& r : data.rows) {
    auto& band = sweep[{r.q, r.p}];
    auto it = band.find(r.index);
    if (it == band.end()) {
      band.emplace(r.index, Band{r.eigenvalue, r.eigenvalue});
    } else {
      it->second.lo = std::min(it->second.lo, r.eigenvalue);
      it->second.hi = std::max(it->second.hi, r.eigenvalue);
    }
  }

  std::vector<GapReport> reports;
  for (const auto& [key, indexed] : sweep) {
    GapReport rep;
    rep.q = key.first;
    rep.p = key.second;
    std::vector<Band> bands;
    for (const auto& [idx, b] : indexed) bands.push_back(b);
    std::sort(bands.begin(), bands.end(),
              [](const Band& a, const Band& b) { return a.lo < b.lo; });
    for (const Band& b : bands) {
      if (!rep.bands.empty() && b.lo <= rep.bands.back().hi + merge_tol) {
        rep.bands.back().hi = std::max(rep.bands.back().hi, b.hi);
      } else {
        rep.bands.push_back(b);
      }
    }
    for (std::size_t i = 1; i < rep.bands.size(); ++i)
      rep.gaps.push_back(rep.bands[i].lo - rep.bands[i - 1].hi);
    reports.push_back(std::move(rep));
  }
  return reports;
}

Complex matrix_trace_state(const WeylElement& a, const LatticeParams& base, int phase_grid) {
  if (base.mode() != LatticeMode::commensurate)
    throw std::invalid_argument("matrix_trace_state: commensurate mode required");
  if (phase_grid < 1) throw std::invalid_argument("matrix_trace_state: phase grid must be >= 1");
  for (const auto& [x, c] : a.terms())
    if (std::llabs(x.m) >= base.q() || std::llabs(x.n) >= base.q())
      throw std::invalid_argument(
          "matrix_trace_state: support exceeds the representation (powers >= q alias)");

  const double step = 2.0 * std::numbers::pi / phase_grid;
  Complex acc{0.0, 0.0};
  for (int ti = 0; ti < phase_grid; ++ti)
    for (int pi = 0; pi < phase_grid; ++pi) {
      const auto params = base.with_phases(step * ti, step * pi);
      acc += represent(a, params).trace() / static_cast<double>(params.sites());
    }
  return acc / static_cast<double>(phase_grid * phase_grid);
}

Matrix heat_kernel(const EigDecomp& eig, double delta) {
  if (delta < 0.0) throw std::invalid_argument("heat_kernel: delta must be >= 0");
  const Eigen::Index n = eig.eigenvalues.size();
  RealVector w(n);
  for (Eigen::Index j = 0; j < n; ++j) w(j) = std::exp(-delta * eig.eigenvalues(j));
  const Matrix k = eig.vectors * w.asDiagonal() * eig.vectors.adjoint();
  return (k + k.adjoint()) / 2.0;
}

Matrix heat_kernel(const HermitianMatrix& h, double delta) {
  return heat_kernel(eig_hermitian(h), delta);
}

Complex kms_expectation(const EigDecomp& eig, double beta, const Matrix& a) {
  if (!(beta > 0.0)) throw std::invalid_argument("kms_expectation: beta must be > 0");
  const Eigen::Index n = eig.eigenvalues.size();
  if (a.rows() != n || a.cols() != n)
    throw std::invalid_argument("kms_expectation: dimension mismatch");
  // ground-state shift cancels in the ratio and prevents underflow at large
  // beta; numerator and denominator share the same kernel, so a = 1 gives
  // exactly 1
  const double ground = eig.eigenvalues.minCoeff();
  RealVector w(n);
  for (Eigen::Index j = 0; j < n; ++j)
    w(j) = std::exp(-beta * (eig.eigenvalues(j) - ground));
  const Matrix raw = eig.vectors * w.asDiagonal() * eig.vectors.adjoint();
  const Matrix kernel = (raw + raw.adjoint()) / 2.0;
  const Complex num = (kernel * a).trace();
  const double den = kernel.trace().real();
  return num / den;
}

Complex kms_expectation(const HermitianMatrix& h, double beta, const Matrix& a) {
  return kms_expectation(eig_hermitian(h), beta, a);
}

Matrix heisenberg_evolve(const EigDecomp& eig, const Matrix& a, double t) {
  const Eigen::Index n = eig.eigenvalues.size();
  if (a.rows() != n || a.cols() != n)
    throw std::invalid_argument("heisenberg_evolve: dimension mismatch");
  ComplexVector phases(n);
  for (Eigen::Index j = 0; j < n; ++j) phases(j) = std::polar(1.0, t * eig.eigenvalues(j));
  const Matrix u = eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
  return u * a * u.adjoint();
}

Matrix heisenberg_evolve(const HermitianMatrix& h, const Matrix& a, double t) {
  return heisenberg_evolve(eig_hermitian(h), a, t);
}

}  // namespace ccrlab
