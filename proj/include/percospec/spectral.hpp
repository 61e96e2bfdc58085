#pragma once

#include <span>
#include <vector>

#include "percospec/hamiltonian.hpp"

namespace percospec {

// Above this dimension only counting queries are offered; full n^3
// diagonalization stops paying for itself.
inline constexpr long long kDenseThreshold = 4096;

struct SpectrumResult {
  long long n = 0;
  std::vector<double> eigenvalues;     // ascending
  std::vector<double> vectors;         // row-major n*n, column k = eigenvector k
  std::vector<double> residual_norms;  // per pair, only when vectors requested

  double vec(long long row, long long k) const { return vectors[row * n + k]; }
};

// All eigenvalues (and optionally orthonormal eigenvectors) of a symmetric
// matrix via Householder tridiagonalization and implicit-shift QL. Kept
// dependency-free so results are reproducible bit-for-bit across platforms at
// the documented tolerances.
SpectrumResult eigen_sym(const SparseHamiltonian& H, bool want_vectors);

// Number of eigenvalues in (-inf, E], by Sylvester inertia of a banded
// LDL^T factorization of H - (E + eps)I with eps = 1e-10 * max row sum (the
// closed-interval tie-break). Factorization breakdown falls back to eigen_sym
// below the dense threshold.
long long count_leq(const SparseHamiltonian& H, double E);

// Number of eigenvalues in (-inf, E), via the symmetric down-nudge.
long long count_lt(const SparseHamiltonian& H, double E);

// Number of eigenvalues in the closed interval [lo, hi].
long long count_in(const SparseHamiltonian& H, double lo, double hi);

enum class Normalization { volume, per_site };

double normalization_denominator(const Box& box, Normalization norm);

// N^L over a sorted grid: count_leq(H, E) / L^d (or per site).
std::vector<double> counting_function(const SparseHamiltonian& H, const Box& box,
                                      std::span<const double> grid,
                                      Normalization norm = Normalization::volume);

// Exact characteristic polynomial det(xI - H) of an integer matrix, n <= 12.
// Returned coefficients are ascending in degree; the leading one is 1.
std::vector<long long> char_poly_exact(const SparseHamiltonian& H);

struct LocalizationRow {
  double eigenvalue = 0.0;
  double ipr = 0.0;                  // sum of |v_x|^4
  std::vector<double> amp_by_dist;   // max |v_x| binned by l1 distance from argmax
};

// Per-eigenvector inverse participation ratio and radial decay, for all
// eigenvalues in [elo, ehi].
std::vector<LocalizationRow> localization_profile(const SparseHamiltonian& H,
                                                  const Box& box, double elo,
                                                  double ehi);

}  // namespace percospec
