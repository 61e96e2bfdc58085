#include "percospec/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "percospec/errors.hpp"
#include "percospec/parallel.hpp"

namespace percospec {

std::string to_string(ClusterScope s) {
  switch (s) {
    case ClusterScope::all: return "all";
    case ClusterScope::largest: return "largest";
    case ClusterScope::spanning: return "spanning";
  }
  return "?";
}

ClusterScope scope_from_string(const std::string& s) {
  if (s == "all") return ClusterScope::all;
  if (s == "largest") return ClusterScope::largest;
  if (s == "spanning") return ClusterScope::spanning;
  throw ValidationError("cluster-scope: must be all, largest or spanning");
}

std::string to_string(Normalization n) {
  return n == Normalization::volume ? "volume" : "per_site";
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "volume") return Normalization::volume;
  if (s == "per_site") return Normalization::per_site;
  throw ValidationError("normalization: must be volume or per_site");
}

std::string to_string(Boundary b) {
  return b == Boundary::free ? "free" : "periodic";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "free") return Boundary::free;
  if (s == "periodic") return Boundary::periodic;
  throw ValidationError("boundary: must be free or periodic");
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ValidationError("grid: step must be > 0");
  if (!(hi >= lo)) throw ValidationError("grid: requires lo <= hi");
  std::vector<double> g;
  const long long count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  for (long long i = 0; i <= count; ++i) g.push_back(lo + i * step);
  return g;
}

SparseHamiltonian assemble_scoped(const PercolationConfig& cfg, Variant variant,
                                  ClusterScope scope) {
  if (scope == ClusterScope::all) return assemble(cfg, variant);
  const ClusterLabeling labeling = label_clusters(cfg);
  std::vector<int> keep;
  if (scope == ClusterScope::largest) {
    if (labeling.largest >= 0) keep.push_back(labeling.largest);
  } else {
    for (int c = 0; c < labeling.n_clusters; ++c)
      if (labeling.spans(c)) keep.push_back(c);
  }
  if (keep.empty()) {
    PercolationConfig empty = cfg;
    std::fill(empty.q.begin(), empty.q.end(), kDeleted);
    return assemble(empty, variant);
  }
  return assemble(cfg, variant, &labeling, keep);
}

namespace {

void check_common(int d, int n_realizations, const std::vector<long>& L_list) {
  if (d < 1) throw ValidationError("d: dimension must be >= 1");
  if (n_realizations < 1)
    throw ValidationError("n-realizations: must be >= 1");
  if (L_list.empty()) throw ValidationError("L: at least one box size required");
  for (long L : L_list)
    if (L < 1) throw ValidationError("L: box sizes must be >= 1");
}

double sample_sd(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / (static_cast<double>(xs.size()) - 1.0));
}

// Eigenvalues per realization under the given scope; slots keep outputs
// independent of the thread count.
std::vector<std::vector<double>> pooled_eigenvalues(
    const MeasureSpec& m, const Box& box, Variant variant, ClusterScope scope,
    int n_realizations, std::uint64_t seed, int threads) {
  std::vector<std::vector<double>> slots(n_realizations);
  parallel_for(n_realizations, threads, [&](long long r) {
    const PercolationConfig cfg = generate_config(box, m, seed, r);
    const SparseHamiltonian H = assemble_scoped(cfg, variant, scope);
    slots[r] = eigen_sym(H, false).eigenvalues;
  });
  return slots;
}

// Clusters of a sorted list: runs with consecutive gaps <= tol.
template <typename F>
void for_each_cluster(const std::vector<double>& sorted, double tol, F&& f) {
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] - sorted[j - 1] <= tol) ++j;
    f(i, j);
    i = j;
  }
}

// Single finite atom + optional deletion mass: the setting where the
// finite-cluster expansion applies (value = catalogue shift, weight = p).
bool bernoulli_like(const MeasureSpec& m, double* p_out, double* value_out) {
  if (!m.densities().empty()) {
    for (const DensityPiece& piece : m.densities())
      if (piece.height > 0.0) return false;
  }
  double p = 0.0, value = 0.0;
  bool seen = false;
  for (const Atom& a : m.atoms()) {
    if (a.weight <= 0.0 || is_deleted(a.value)) continue;
    if (seen && a.value != value) return false;
    value = a.value;
    p += a.weight;
    seen = true;
  }
  if (!seen) return false;
  *p_out = p;
  *value_out = value;
  return true;
}

}  // namespace

std::vector<EmpiricalIDS> estimate_ids(const IdsParams& p) {
  check_common(p.d, p.n_realizations, p.L_list);
  if (!std::is_sorted(p.grid.begin(), p.grid.end()))
    throw ValidationError("grid: energies must be sorted");
  if (p.grid.empty()) throw ValidationError("grid: must be non-empty");

  std::vector<EmpiricalIDS> out;
  for (long L : p.L_list) {
    const Box box(p.d, L, p.boundary);
    std::vector<std::vector<double>> slots(p.n_realizations);
    parallel_for(p.n_realizations, p.threads, [&](long long r) {
      const PercolationConfig cfg = generate_config(box, p.measure, p.seed, r);
      const SparseHamiltonian H = assemble_scoped(cfg, p.variant, p.scope);
      slots[r] = counting_function(H, box, p.grid, p.norm);
    });

    EmpiricalIDS ids;
    ids.L = L;
    ids.d = p.d;
    ids.grid = p.grid;
    ids.n_realizations = p.n_realizations;
    ids.seed = p.seed;
    ids.variant = p.variant;
    ids.scope = p.scope;
    ids.norm = p.norm;
    ids.mean.resize(p.grid.size());
    ids.sd.resize(p.grid.size());
    std::vector<double> column(p.n_realizations);
    for (std::size_t k = 0; k < p.grid.size(); ++k) {
      for (int r = 0; r < p.n_realizations; ++r) column[r] = slots[r][k];
      const double mean =
          std::accumulate(column.begin(), column.end(), 0.0) / p.n_realizations;
      ids.mean[k] = mean;
      ids.sd[k] = sample_sd(column, mean);
    }
    out.push_back(std::move(ids));
  }
  return out;
}

namespace {

JumpRow make_jump_row(double location, double mass, const AnimalCatalog& cat,
                      const MeasureSpec& measure, double match_tol) {
  JumpRow row;
  row.location = location;
  row.mass = mass;
  const CatalogEntry* entry = cat.find(location, match_tol);
  if (entry) {
    row.matched = true;
    row.matched_value = entry->value;
  }
  double p = 0.0, value = 0.0;
  if (bernoulli_like(measure, &p, &value) && value == cat.shift()) {
    const JumpPrediction pred =
        predicted_jump(row.matched ? row.matched_value : location, p, cat);
    row.predicted = pred.mass;
    row.prediction_valid = true;
  }
  return row;
}

}  // namespace

JumpReport detect_jumps(const JumpParams& p, const AnimalCatalog& cat) {
  check_common(p.d, p.n_realizations, {p.L});
  if (!(p.threshold > 0.0))
    throw ValidationError("threshold: must be > 0 (above the noise floor)");
  const Box box(p.d, p.L, p.boundary);
  const std::vector<std::vector<double>> slots = pooled_eigenvalues(
      p.measure, box, p.variant, p.scope, p.n_realizations, p.seed, p.threads);

  std::vector<double> pool;
  for (const auto& s : slots) pool.insert(pool.end(), s.begin(), s.end());
  std::sort(pool.begin(), pool.end());

  const double denom =
      normalization_denominator(box, p.norm) * p.n_realizations;
  JumpReport report;
  report.threshold = p.threshold;
  report.catalogue_n_max = cat.n_max();
  report.total_eigenvalues = static_cast<long long>(pool.size());
  for_each_cluster(pool, p.dedup_tol, [&](std::size_t i, std::size_t j) {
    const double mass = static_cast<double>(j - i) / denom;
    if (mass < p.threshold) return;
    const double location = pool[i + (j - i) / 2];
    report.rows.push_back(
        make_jump_row(location, mass, cat, p.measure, p.match_tol));
    if (!report.rows.back().matched) ++report.uncatalogued;
  });
  return report;
}

JumpReport detect_jumps_from_ids(const EmpiricalIDS& ids, const AnimalCatalog& cat,
                                 const MeasureSpec& measure, double threshold,
                                 double match_tol) {
  if (!(threshold > 0.0)) throw ValidationError("threshold: must be > 0");
  JumpReport report;
  report.threshold = threshold;
  report.catalogue_n_max = cat.n_max();
  for (std::size_t k = 1; k < ids.grid.size(); ++k) {
    const double inc = ids.mean[k] - ids.mean[k - 1];
    if (inc >= threshold)
      report.rows.push_back(
          make_jump_row(ids.grid[k], inc, cat, measure, match_tol));
  }
  for (const JumpRow& r : report.rows)
    if (!r.matched) ++report.uncatalogued;
  return report;
}

WegnerResult wegner_experiment(const WegnerParams& p) {
  check_common(p.d, p.n_realizations, {p.L});
  WegnerResult result;
  result.constant = wegner_constant(p.measure, p.a, p.b, p.delta, p.d);
  if (p.intervals.empty())
    throw ValidationError("intervals: at least one interval required");
  for (const Interval& I : p.intervals) {
    if (!(I.lo <= I.hi))
      throw ValidationError("intervals: interval endpoints must satisfy lo <= hi");
    // admissibility: the interval must sit at depth >= delta inside (a, b),
    // measured at its midpoint
    const double mid = 0.5 * (I.lo + I.hi);
    const double dist = std::min(mid - p.a, p.b - mid);
    if (dist < p.delta - 1e-12) {
      std::ostringstream os;
      os << "intervals: [" << I.lo << ", " << I.hi
         << "] violates dist(I, (a,b)^c) >= delta = " << p.delta;
      throw ValidationError(os.str());
    }
  }

  const Box box(p.d, p.L, p.boundary);
  const std::size_t k = p.intervals.size();
  std::vector<std::vector<double>> slots(p.n_realizations,
                                         std::vector<double>(k, 0.0));
  parallel_for(p.n_realizations, p.threads, [&](long long r) {
    const PercolationConfig cfg = generate_config(box, p.measure, p.seed, r);
    const SparseHamiltonian H = assemble(cfg, Variant::anderson);
    for (std::size_t i = 0; i < k; ++i)
      slots[r][i] =
          static_cast<double>(count_in(H, p.intervals[i].lo, p.intervals[i].hi));
  });

  const double volume = std::pow(static_cast<double>(p.L), p.d);
  std::vector<double> column(p.n_realizations);
  for (std::size_t i = 0; i < k; ++i) {
    for (int r = 0; r < p.n_realizations; ++r) column[r] = slots[r][i];
    WegnerRow row;
    row.interval = p.intervals[i];
    row.lhs =
        std::accumulate(column.begin(), column.end(), 0.0) / p.n_realizations;
    row.lhs_se = sample_sd(column, row.lhs) / std::sqrt(p.n_realizations);
    row.rhs = result.constant * row.interval.length() * volume;
    row.slack = row.rhs > 0.0 ? row.lhs / row.rhs : (row.lhs > 0.0 ? 1e300 : 0.0);
    row.violation = row.lhs - row.rhs > 3.0 * row.lhs_se;
    result.rows.push_back(row);
  }
  return result;
}

std::vector<Interval> predicted_spectrum(const MeasureSpec& m, int d) {
  std::vector<Interval> out;
  for (const Interval& s : m.support_real())
    out.push_back({s.lo - 2.0 * d, s.hi + 2.0 * d});
  return merge_intervals(std::move(out));
}

SupportResult support_check(const SupportParams& p) {
  check_common(p.d, p.n_realizations, p.L_list);
  if (!(p.epsilon >= 0.0)) throw ValidationError("epsilon: must be >= 0");
  SupportResult result;
  result.sigma = predicted_spectrum(p.measure, p.d);
  const std::vector<Interval> fat = fatten(result.sigma, p.epsilon);

  for (long L : p.L_list) {
    const Box box(p.d, L, p.boundary);
    const std::vector<std::vector<double>> slots =
        pooled_eigenvalues(p.measure, box, Variant::anderson, ClusterScope::all,
                           p.n_realizations, p.seed, p.threads);
    SupportRow row;
    row.L = L;
    row.min_eig = std::numeric_limits<double>::infinity();
    row.max_eig = -std::numeric_limits<double>::infinity();
    for (const auto& eigs : slots) {
      for (double e : eigs) {
        ++row.n_eigenvalues;
        if (!intervals_contain(fat, e)) ++row.n_outside;
        row.min_eig = std::min(row.min_eig, e);
        row.max_eig = std::max(row.max_eig, e);
      }
    }
    row.frac_outside =
        row.n_eigenvalues > 0
            ? static_cast<double>(row.n_outside) / row.n_eigenvalues
            : 0.0;
    if (!result.sigma.empty() && row.n_eigenvalues > 0) {
      row.dist_min = std::abs(row.min_eig - intervals_min(result.sigma));
      row.dist_max = std::abs(row.max_eig - intervals_max(result.sigma));
    }
    result.rows.push_back(row);
  }
  return result;
}

std::vector<ContinuityRow> continuity_check(const ContinuityParams& p) {
  check_common(p.d, p.n_realizations, p.L_list);
  if (p.measure.has_finite_atoms())
    throw ValidationError(
        "continuity: measure must have no atoms at finite values");
  std::vector<ContinuityRow> out;
  for (long L : p.L_list) {
    const Box box(p.d, L, p.boundary);
    const std::vector<std::vector<double>> slots =
        pooled_eigenvalues(p.measure, box, Variant::anderson, ClusterScope::all,
                           p.n_realizations, p.seed, p.threads);
    long long max_mult = 0;
    for (const auto& eigs : slots) {
      // slots are sorted; the largest cluster within one realization is the
      // largest jump of that realization's counting function
      for_each_cluster(eigs, p.dedup_tol, [&](std::size_t i, std::size_t j) {
        max_mult = std::max<long long>(max_mult, static_cast<long long>(j - i));
      });
    }
    ContinuityRow row;
    row.L = L;
    row.max_multiplicity = max_mult;
    row.max_jump =
        static_cast<double>(max_mult) / std::pow(static_cast<double>(L), p.d);
    out.push_back(row);
  }
  return out;
}

LifshitzResult lifshitz_probe(const LifshitzParams& p) {
  check_common(p.d, p.n_realizations, {p.L});
  if (p.offsets.empty()) throw ValidationError("offsets: must be non-empty");
  for (double s : p.offsets)
    if (!(s > 0.0)) throw ValidationError("offsets: must be > 0");
  const std::vector<Interval> supp = p.measure.support_real();
  if (supp.empty() || std::abs(intervals_min(supp)) > 1e-12)
    throw ValidationError(
        "lifshitz: min of the real support must be 0 so that the spectral "
        "bottom sits at -2d");

  const Box box(p.d, p.L, p.boundary);
  const double bottom = -2.0 * p.d;
  std::vector<std::vector<long long>> slots(
      p.n_realizations, std::vector<long long>(p.offsets.size(), 0));
  parallel_for(p.n_realizations, p.threads, [&](long long r) {
    const PercolationConfig cfg = generate_config(box, p.measure, p.seed, r);
    const SparseHamiltonian H = assemble(cfg, Variant::anderson);
    for (std::size_t i = 0; i < p.offsets.size(); ++i)
      slots[r][i] = count_leq(H, bottom + p.offsets[i]);
  });

  const double denom =
      normalization_denominator(box, p.norm) * p.n_realizations;
  LifshitzResult result;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < p.offsets.size(); ++i) {
    long long total = 0;
    for (int r = 0; r < p.n_realizations; ++r) total += slots[r][i];
    LifshitzPoint pt;
    pt.s = p.offsets[i];
    pt.N = static_cast<double>(total) / denom;
    pt.used = total > 0 && pt.N <= p.bulk_cap;
    if (pt.used) {
      xs.push_back(std::log(pt.s));
      ys.push_back(std::log(-std::log(pt.N)));
    }
    result.points.push_back(pt);
  }
  result.n_used = static_cast<int>(xs.size());
  if (result.n_used < 2)
    throw InsufficientStatistics(
        "lifshitz: fewer than two usable offsets (all zero-count or bulk)");

  // least squares y = c - kappa * x
  const double n = static_cast<double>(xs.size());
  const double sx = std::accumulate(xs.begin(), xs.end(), 0.0);
  const double sy = std::accumulate(ys.begin(), ys.end(), 0.0);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  result.kappa = -slope;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + slope * xs[i]);
    rss += e * e;
  }
  result.fit_residual = std::sqrt(rss / n);
  result.lifshitz_like = result.kappa >= 0.25;
  return result;
}

namespace {

// Count of interior clusters per catalogue animal id.
std::vector<long long> interior_cluster_counts(const PercolationConfig& cfg,
                                               const ClusterLabeling& labeling,
                                               const AnimalCatalog& cat) {
  const Box& box = cfg.box;
  std::vector<std::vector<std::array<int, 3>>> cluster_sites(labeling.n_clusters);
  std::vector<int> coord(box.d());
  for (long long i = 0; i < box.n_sites(); ++i) {
    const int c = labeling.label[i];
    if (c < 0) continue;
    if (labeling.touches_boundary[c]) continue;
    if (labeling.size[c] > cat.n_max()) continue;
    box.coord_of(i, coord);
    std::array<int, 3> cell{0, 0, 0};
    for (int k = 0; k < box.d(); ++k) cell[k] = coord[k];
    cluster_sites[c].push_back(cell);
  }
  std::vector<long long> counts(cat.animals().size(), 0);
  for (int c = 0; c < labeling.n_clusters; ++c) {
    if (cluster_sites[c].empty()) continue;
    const int id = cat.find_animal(cluster_sites[c]);
    if (id >= 0) ++counts[id];
  }
  return counts;
}

void require_constant_potential(const PercolationConfig& cfg, double shift) {
  for (long long i = 0; i < cfg.box.n_sites(); ++i)
    if (cfg.active(i) && cfg.q[i] != shift)
      throw ValidationError(
          "multiplicity: active potential must equal the catalogue shift "
          "(Bernoulli-type measure)");
}

}  // namespace

std::vector<MultiplicityRow> multiplicity_check_all(
    const PercolationConfig& cfg, const ClusterLabeling& labeling,
    const AnimalCatalog& cat) {
  require_constant_potential(cfg, cat.shift());
  const SparseHamiltonian H = assemble(cfg, Variant::anderson);
  const SpectrumResult s = eigen_sym(H, false);
  const std::vector<long long> counts =
      interior_cluster_counts(cfg, labeling, cat);

  std::vector<MultiplicityRow> rows;
  for (const CatalogEntry& e : cat.entries()) {
    MultiplicityRow row;
    row.E = e.value;
    row.observed =
        std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(),
                         e.value + 1e-7) -
        std::lower_bound(s.eigenvalues.begin(), s.eigenvalues.end(),
                         e.value - 1e-7);
    long long bound = 0;
    for (const EigenOccurrence& o : e.occ) bound += counts[o.animal] * o.multiplicity;
    row.bound = bound;
    rows.push_back(row);
  }
  return rows;
}

MultiplicityRow multiplicity_check(const PercolationConfig& cfg,
                                   const ClusterLabeling& labeling,
                                   const AnimalCatalog& cat, double E) {
  const CatalogEntry* entry = cat.find(E);
  if (!entry)
    throw ValidationError("multiplicity: energy is not in the catalogue");
  for (const MultiplicityRow& row : multiplicity_check_all(cfg, labeling, cat))
    if (row.E == entry->value) return row;
  throw NumericError("multiplicity: entry lookup failed");  // unreachable
}

}  // namespace percospec
