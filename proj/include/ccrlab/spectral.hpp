#pragma once

#include <vector>

#include "ccrlab/lattice.hpp"
#include "ccrlab/matrix.hpp"

namespace ccrlab {

struct EigDecomp {
  RealVector eigenvalues;  // ascending
  Matrix vectors;          // orthonormal columns
  double residual = 0.0;   // max|A V - V diag(lambda)|
};

// Full Hermitian eigendecomposition; deterministic for fixed input.
EigDecomp eig_hermitian(const HermitianMatrix& a);

// Eigenvalues of H = 1/2 P^2 + v(Q), ascending.
RealVector spectrum(const LatticeParams& params, const PotentialExpr& v,
                    const Bindings& bindings = {});

struct ButterflyRow {
  long long p, q;
  double theta, phi;
  int index;
  double eigenvalue;
};

struct ButterflyDataset {
  int qmax = 0;
  int phase_grid = 0;
  std::vector<ButterflyRow> rows;  // canonical order: (q, p, theta, phi, index)
};

// Eigenvalues of H at every reduced fraction p/q with q <= qmax (N = q sites)
// over a uniform phase grid. Deterministic; parallelizes over cells.
ButterflyDataset butterfly_sweep(int qmax, const PotentialExpr& v, const Bindings& bindings,
                                 int phase_grid = 8, int threads = 1);

struct Band {
  double lo = 0.0, hi = 0.0;
};

struct GapReport {
  long long p = 0, q = 0;
  std::vector<Band> bands;   // merged, ascending; at most q of them
  std::vector<double> gaps;  // widths between consecutive bands
};

// Band k of a (p,q) cell spans the phase sweep of eigenvalue index k; bands
// closer than merge_tol are merged.
std::vector<GapReport> gap_report(const ButterflyDataset& data, double merge_tol = 1e-6);

// Average over the (theta, phi) grid of normalized matrix traces of
// represent(a). Agrees with the symbolic trace when the support satisfies
// |m|, |n| < q; larger supports alias (U^q is a phase) and are rejected.
Complex matrix_trace_state(const WeylElement& a, const LatticeParams& base, int phase_grid = 8);

// e^{-delta H} computed through the eigendecomposition; Hermitian PSD.
Matrix heat_kernel(const HermitianMatrix& h, double delta);
Matrix heat_kernel(const EigDecomp& eig, double delta);

// KMS expectation tr(e^{-beta H} a) / tr(e^{-beta H}); the spectrum is
// shifted by lambda_min internally so large beta cannot underflow.
Complex kms_expectation(const HermitianMatrix& h, double beta, const Matrix& a);
Complex kms_expectation(const EigDecomp& eig, double beta, const Matrix& a);

// gamma_t(a) = e^{itH} a e^{-itH}
Matrix heisenberg_evolve(const HermitianMatrix& h, const Matrix& a, double t);
Matrix heisenberg_evolve(const EigDecomp& eig, const Matrix& a, double t);

}  // namespace ccrlab
