#include "percospec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "percospec/errors.hpp"

#include <cstdio>

namespace percospec {

namespace {

// ---------------------------------------------------------------------------
// Householder reduction of a dense symmetric matrix (row-major) to tridiagonal
// form. With `vectors`, a is overwritten by the accumulated orthogonal Q with
// Q^T A Q = T; otherwise a is scratch. d gets the diagonal, e the subdiagonal
// (e[0] = 0).
// ---------------------------------------------------------------------------
void householder_tridiag(std::vector<double>& a, long long n,
                         std::vector<double>& d, std::vector<double>& e,
                         bool vectors) {
  for (long long i = n - 1; i >= 1; --i) {
    const long long l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (long long k = 0; k <= l; ++k) scale += std::abs(a[i * n + k]);
      if (scale == 0.0) {
        e[i] = a[i * n + l];
      } else {
        for (long long k = 0; k <= l; ++k) {
          a[i * n + k] /= scale;
          h += a[i * n + k] * a[i * n + k];
        }
        double f = a[i * n + l];
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a[i * n + l] = f - g;
        f = 0.0;
        for (long long j = 0; j <= l; ++j) {
          if (vectors) a[j * n + i] = a[i * n + j] / h;
          g = 0.0;
          for (long long k = 0; k <= j; ++k) g += a[j * n + k] * a[i * n + k];
          for (long long k = j + 1; k <= l; ++k) g += a[k * n + j] * a[i * n + k];
          e[j] = g / h;
          f += e[j] * a[i * n + j];
        }
        const double hh = f / (h + h);
        for (long long j = 0; j <= l; ++j) {
          f = a[i * n + j];
          g = e[j] - hh * f;
          e[j] = g;
          for (long long k = 0; k <= j; ++k)
            a[j * n + k] -= f * e[k] + g * a[i * n + k];
        }
      }
    } else {
      e[i] = a[i * n + l];
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (long long i = 0; i < n; ++i) {
    if (vectors) {
      const long long l = i - 1;
      if (d[i] != 0.0) {
        for (long long j = 0; j <= l; ++j) {
          double g = 0.0;
          for (long long k = 0; k <= l; ++k) g += a[i * n + k] * a[k * n + j];
          for (long long k = 0; k <= l; ++k) a[k * n + j] -= g * a[k * n + i];
        }
      }
      d[i] = a[i * n + i];
      a[i * n + i] = 1.0;
      for (long long j = 0; j <= l; ++j) a[j * n + i] = a[i * n + j] = 0.0;
    } else {
      d[i] = a[i * n + i];
    }
  }
}

// ---------------------------------------------------------------------------
// Implicit-shift QL on a tridiagonal matrix. d/e as produced above; z, when
// non-null, is the row-major n x n matrix whose columns get rotated along
// (pass Q to obtain eigenvectors of the original matrix).
// ---------------------------------------------------------------------------
void ql_implicit(std::vector<double>& d, std::vector<double>& e, long long n,
                 double* z) {
  if (n == 0) return;
  for (long long i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  // Absolute deflation floor. Operators with a large exact kernel leave whole
  // tridiagonal segments at roundoff scale (d ~ 1e-32, e ~ 1e-27 for an
  // O(1)-norm matrix); the relative test alone never fires there. Deflating
  // |e| below this floor perturbs eigenvalues by at most 1e-13 * scale, four
  // orders under the documented 1e-9 * scale accuracy.
  double anorm = 0.0;
  for (long long i = 0; i < n; ++i)
    anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
  const double floor_e = 1e-13 * std::max(1.0, anorm);
  for (long long l = 0; l < n; ++l) {
    int iter = 0;
    long long m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd + floor_e) break;
      }
      if (m != l) {
        if (iter++ == 100) {
#ifdef PERCOSPEC_QL_DEBUG
          std::fprintf(stderr,
                       "QL stall: l=%lld m=%lld n=%lld e[l]=%.17g d[l]=%.17g "
                       "d[l+1]=%.17g anorm=%.17g\n",
                       l, m, n, e[l], d[l], d[l + 1], anorm);
#endif
          throw NumericError("eigen: QL iteration failed to converge");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (long long i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z) {
            for (long long k = 0; k < n; ++k) {
              f = z[k * n + i + 1];
              z[k * n + i + 1] = s * z[k * n + i] + c * f;
              z[k * n + i] = c * z[k * n + i] - s * f;
            }
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// Band lower storage: band[i * (b + 1) + k] holds entry (i, i - k), k = 0..b.
// Returns the number of negative pivots of the LDL^T factorization of
// H - shift*I.
//
// Exact zero pivots occur structurally: once |shift - E0| drops below one ulp
// of the intermediates, the factorization of a kernel block is computed at
// the eigenvalue E0 itself, so jittering the shift cannot help. A zero pivot
// means one direction is pinned to the threshold; it is replaced by
// zero_substitute (magnitude eps * scale, sign = the caller's interval
// convention), the same resolution as counting at a further-nudged shift.
// The recurrence self-heals: the following pivot becomes huge of the opposite
// sign and later rows are unaffected to first order. Throws NumericError only
// when pivots stop being finite.
long long band_negative_pivots(const SparseHamiltonian& H, double shift,
                               double zero_substitute, long long* substitutions) {
  const long long n = H.n();
  const long long b = std::max(1, H.bandwidth());
  std::vector<double> band(static_cast<std::size_t>(n) * (b + 1), 0.0);
  for (long long i = 0; i < n; ++i) {
    band[i * (b + 1)] = H.diag(i) - shift;
    for (int j : H.upper_row(i)) band[static_cast<long long>(j) * (b + 1) + (j - i)] = 1.0;
  }
  long long negatives = 0;
  for (long long j = 0; j < n; ++j) {
    // pivot d_j
    double dj = band[j * (b + 1)];
    const long long k0 = std::max<long long>(0, j - b);
    for (long long s = k0; s < j; ++s) {
      const double ljs = band[j * (b + 1) + (j - s)];
      dj -= ljs * ljs * band[s * (b + 1)];
    }
    if (dj == 0.0) {
      dj = zero_substitute;
      ++*substitutions;
    }
    if (!std::isfinite(dj)) throw NumericError("inertia: pivot overflow");
    band[j * (b + 1)] = dj;
    if (dj < 0.0) ++negatives;
    const long long imax = std::min(n - 1, j + b);
    for (long long i = j + 1; i <= imax; ++i) {
      double lij = band[i * (b + 1) + (i - j)];
      const long long s0 = std::max<long long>(0, i - b);
      for (long long s = std::max(s0, k0); s < j; ++s)
        lij -= band[i * (b + 1) + (i - s)] * band[j * (b + 1) + (j - s)] *
               band[s * (b + 1)];
      band[i * (b + 1) + (i - j)] = lij / dj;
    }
  }
  return negatives;
}

// Shared nudge logic for the closed/open interval conventions. zero_sign
// states which side of the threshold a pinned direction resolves to: +1 for
// the upper count (closed intervals), -1 for the strict count.
//
// Substituted pivots are exact for tridiagonal matrices (the classic Sturm
// zero-substitution) but only near-exact for wider bands, where the injected
// noise can missign later pinned directions of the same block. When that
// happens below the dense threshold the count is redone from the full
// spectrum; above it the substituted count stands, with error bounded by the
// pinned multiplicity.
long long count_below(const SparseHamiltonian& H, double nudged, int zero_sign) {
  if (H.n() == 0) return 0;
  const double sub = -zero_sign * std::numeric_limits<double>::epsilon() *
                     std::max(1.0, H.inf_norm());
  try {
    long long substitutions = 0;
    const long long count = band_negative_pivots(H, nudged, sub, &substitutions);
    if (substitutions == 0 || H.bandwidth() <= 1 || H.n() > kDenseThreshold)
      return count;
  } catch (const NumericError&) {
    if (H.n() > kDenseThreshold)
      throw NumericError(
          "inertia: factorization breakdown above the dense threshold");
  }
  SpectrumResult s = eigen_sym(H, false);
  return std::lower_bound(s.eigenvalues.begin(), s.eigenvalues.end(), nudged) -
         s.eigenvalues.begin();
}

}  // namespace

SpectrumResult eigen_sym(const SparseHamiltonian& H, bool want_vectors) {
  const long long n = H.n();
  if (n > kDenseThreshold)
    throw ResourceError(
        "eigen: dimension " + std::to_string(n) + " exceeds the dense threshold " +
        std::to_string(kDenseThreshold) + "; use count_leq / counting_function");
  SpectrumResult out;
  out.n = n;
  if (n == 0) return out;

  std::vector<double> a = H.dense();
  std::vector<double> d(n), e(n);
  householder_tridiag(a, n, d, e, want_vectors);
  ql_implicit(d, e, n, want_vectors ? a.data() : nullptr);

  std::vector<long long> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](long long x, long long y) { return d[x] < d[y]; });

  out.eigenvalues.resize(n);
  for (long long k = 0; k < n; ++k) out.eigenvalues[k] = d[order[k]];
  if (want_vectors) {
    out.vectors.resize(static_cast<std::size_t>(n) * n);
    for (long long k = 0; k < n; ++k)
      for (long long r = 0; r < n; ++r)
        out.vectors[r * n + k] = a[r * n + order[k]];
    out.residual_norms.resize(n);
    // residual r = Hv - lambda v, applying both triangles
    std::vector<double> hv(n);
    for (long long k = 0; k < n; ++k) {
      std::fill(hv.begin(), hv.end(), 0.0);
      for (long long r = 0; r < n; ++r) {
        hv[r] += H.diag(r) * out.vec(r, k);
        for (int j : H.upper_row(r)) {
          hv[r] += out.vec(j, k);
          hv[j] += out.vec(r, k);
        }
      }
      double acc = 0.0;
      for (long long r = 0; r < n; ++r) {
        const double rr = hv[r] - out.eigenvalues[k] * out.vec(r, k);
        acc += rr * rr;
      }
      out.residual_norms[k] = std::sqrt(acc);
    }
  }
  return out;
}

long long count_leq(const SparseHamiltonian& H, double E) {
  if (H.n() == 0) return 0;
  // scale floored at 1 so the nudge stays positive for the all-zero matrix
  const double eps = 1e-10 * std::max(1.0, H.inf_norm());
  return count_below(H, E + eps, +1);
}

long long count_lt(const SparseHamiltonian& H, double E) {
  if (H.n() == 0) return 0;
  const double eps = 1e-10 * std::max(1.0, H.inf_norm());
  return count_below(H, E - eps, -1);
}

long long count_in(const SparseHamiltonian& H, double lo, double hi) {
  if (!(lo <= hi)) throw ValidationError("count_in: requires lo <= hi");
  const long long c = count_leq(H, hi) - count_lt(H, lo);
  return std::max<long long>(0, c);
}

double normalization_denominator(const Box& box, Normalization norm) {
  if (norm == Normalization::per_site)
    return static_cast<double>(box.n_sites());
  return std::pow(static_cast<double>(box.L()), box.d());
}

std::vector<double> counting_function(const SparseHamiltonian& H, const Box& box,
                                      std::span<const double> grid,
                                      Normalization norm) {
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw ValidationError("counting_function: grid must be sorted");
  const double denom = normalization_denominator(box, norm);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = static_cast<double>(count_leq(H, grid[i])) / denom;
  return out;
}

namespace {

long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r))
    throw NumericError("char_poly: integer overflow");
  return r;
}

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r))
    throw NumericError("char_poly: integer overflow");
  return r;
}

}  // namespace

std::vector<long long> char_poly_exact(const SparseHamiltonian& H) {
  const long long n = H.n();
  if (n > 12) throw ValidationError("char_poly: dimension must be <= 12");
  std::vector<long long> A(n * n, 0);
  for (long long i = 0; i < n; ++i) {
    const double d = H.diag(i);
    if (std::rint(d) != d || std::abs(d) > 1e15)
      throw ValidationError("char_poly: matrix entries must be integers");
    A[i * n + i] = static_cast<long long>(d);
    for (int j : H.upper_row(i)) A[i * n + j] = A[j * n + i] = 1;
  }

  // Faddeev-LeVerrier: M_1 = I, c_{n-k} = -tr(A M_k)/k, M_{k+1} = A M_k + c I.
  std::vector<long long> coeff(n + 1, 0);
  coeff[n] = 1;
  std::vector<long long> M(n * n, 0), AM(n * n, 0);
  for (long long i = 0; i < n; ++i) M[i * n + i] = 1;
  for (long long k = 1; k <= n; ++k) {
    for (long long i = 0; i < n; ++i)
      for (long long j = 0; j < n; ++j) {
        long long acc = 0;
        for (long long s = 0; s < n; ++s)
          acc = checked_add(acc, checked_mul(A[i * n + s], M[s * n + j]));
        AM[i * n + j] = acc;
      }
    long long tr = 0;
    for (long long i = 0; i < n; ++i) tr = checked_add(tr, AM[i * n + i]);
    const long long ck = -tr / k;  // divisibility exact by Newton's identities
    coeff[n - k] = ck;
    M = AM;
    for (long long i = 0; i < n; ++i) M[i * n + i] = checked_add(M[i * n + i], ck);
  }
  return coeff;
}

std::vector<LocalizationRow> localization_profile(const SparseHamiltonian& H,
                                                  const Box& box, double elo,
                                                  double ehi) {
  SpectrumResult s = eigen_sym(H, true);
  std::vector<LocalizationRow> rows;
  const int d = box.d();
  std::vector<int> ca(d), cb(d);
  for (long long k = 0; k < s.n; ++k) {
    const double lam = s.eigenvalues[k];
    if (lam < elo || lam > ehi) continue;
    LocalizationRow row;
    row.eigenvalue = lam;
    long long arg = 0;
    double best = -1.0, ipr = 0.0;
    for (long long r = 0; r < s.n; ++r) {
      const double v = std::abs(s.vec(r, k));
      ipr += v * v * v * v;
      if (v > best) {
        best = v;
        arg = r;
      }
    }
    row.ipr = ipr;
    box.coord_of(H.site_of(arg), ca);
    for (long long r = 0; r < s.n; ++r) {
      box.coord_of(H.site_of(r), cb);
      int dist = 0;
      for (int i = 0; i < d; ++i) {
        int diff = std::abs(cb[i] - ca[i]);
        if (box.boundary() == Boundary::periodic)
          diff = std::min(diff, box.side() - diff);
        dist += diff;
      }
      if (static_cast<std::size_t>(dist) >= row.amp_by_dist.size())
        row.amp_by_dist.resize(dist + 1, 0.0);
      row.amp_by_dist[dist] =
          std::max(row.amp_by_dist[dist], std::abs(s.vec(r, k)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace percospec
