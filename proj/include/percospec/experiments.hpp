#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "percospec/animals.hpp"
#include "percospec/hamiltonian.hpp"
#include "percospec/interval.hpp"
#include "percospec/lattice.hpp"
#include "percospec/measure.hpp"
#include "percospec/spectral.hpp"

namespace percospec {

// Fixed documented default seed; never time-based.
inline constexpr std::uint64_t kDefaultSeed = 1729;

enum class ClusterScope { all, largest, spanning };
std::string to_string(ClusterScope s);
ClusterScope scope_from_string(const std::string& s);
std::string to_string(Normalization n);
Normalization normalization_from_string(const std::string& s);
std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

// Inclusive grid lo, lo+step, ..., hi.
std::vector<double> make_grid(double lo, double hi, double step);

// Operator over the configured scope: everything, the largest cluster, or the
// union of spanning clusters.
SparseHamiltonian assemble_scoped(const PercolationConfig& cfg, Variant variant,
                                  ClusterScope scope);

// ---------------------------------------------------------------------------
// IDS estimation
// ---------------------------------------------------------------------------

struct IdsParams {
  MeasureSpec measure;
  int d = 1;
  std::vector<long> L_list{};
  std::vector<double> grid{};
  int n_realizations = 1;
  std::uint64_t seed = kDefaultSeed;
  Variant variant = Variant::anderson;
  ClusterScope scope = ClusterScope::all;
  Normalization norm = Normalization::volume;
  Boundary boundary = Boundary::free;
  int threads = 1;
};

struct EmpiricalIDS {
  long L = 0;
  int d = 0;
  std::vector<double> grid{};
  std::vector<double> mean;  // monotone nondecreasing in E
  std::vector<double> sd;    // sample standard deviation across realizations
  int n_realizations = 0;
  std::uint64_t seed = 0;
  Variant variant = Variant::anderson;
  ClusterScope scope = ClusterScope::all;
  Normalization norm = Normalization::volume;
};

// Mean of the normalized counting function over independent realizations,
// one result per L. Counting is inertia-based, so L is not limited by the
// dense eigensolver threshold.
std::vector<EmpiricalIDS> estimate_ids(const IdsParams& p);

// ---------------------------------------------------------------------------
// IDS jump detection
// ---------------------------------------------------------------------------

struct JumpParams {
  MeasureSpec measure;
  int d = 2;
  long L = 60;
  int n_realizations = 50;
  std::uint64_t seed = kDefaultSeed;
  Variant variant = Variant::adjacency;
  ClusterScope scope = ClusterScope::all;
  // per-site masses compare directly against predicted_jump
  Normalization norm = Normalization::per_site;
  // minimal reported mass; keep it at least 5x the IDS standard error near
  // the jumps of interest, well above single-collision mass
  // 1 / (n_realizations * volume)
  double threshold = 1e-3;
  double dedup_tol = 1e-7;  // eigenvalue clustering width
  double match_tol = 1e-6;  // catalogue matching tolerance
  Boundary boundary = Boundary::free;
  int threads = 1;
};

struct JumpRow {
  double location = 0.0;       // median of the eigenvalue cluster
  double mass = 0.0;
  bool matched = false;
  double matched_value = 0.0;  // catalogue value when matched
  double predicted = 0.0;      // finite-cluster expansion, when applicable
  bool prediction_valid = false;
};

struct JumpReport {
  std::vector<JumpRow> rows;  // ascending by location, mass >= threshold only
  double threshold = 0.0;
  int catalogue_n_max = 0;
  long long total_eigenvalues = 0;
  int uncatalogued = 0;  // rows above threshold without a catalogue match
};

// Preferred mode: pools exact eigenvalues over realizations and clusters them,
// so jumps land on catalogue values instead of grid cells.
JumpReport detect_jumps(const JumpParams& p, const AnimalCatalog& cat);

// Grid-differencing mode on an already-estimated IDS.
JumpReport detect_jumps_from_ids(const EmpiricalIDS& ids, const AnimalCatalog& cat,
                                 const MeasureSpec& measure, double threshold,
                                 double match_tol = 1e-6);

// ---------------------------------------------------------------------------
// Wegner bound
// ---------------------------------------------------------------------------

struct WegnerParams {
  MeasureSpec measure;
  int d = 1;
  long L = 100;
  double a = 0.0, b = 1.0, delta = 0.5;
  std::vector<Interval> intervals{};
  int n_realizations = 200;
  std::uint64_t seed = kDefaultSeed;
  Boundary boundary = Boundary::free;
  int threads = 1;
};

struct WegnerRow {
  Interval interval;
  double lhs = 0.0;       // mean eigenvalue count in the interval
  double lhs_se = 0.0;    // standard error of the mean
  double rhs = 0.0;       // C |I| L^d
  double slack = 0.0;     // lhs / rhs
  bool violation = false; // lhs exceeds rhs by more than 3 standard errors
};

struct WegnerResult {
  double constant = 0.0;  // the explicit C
  std::vector<WegnerRow> rows;
};

WegnerResult wegner_experiment(const WegnerParams& p);

// ---------------------------------------------------------------------------
// Spectrum support
// ---------------------------------------------------------------------------

struct SupportParams {
  MeasureSpec measure;
  int d = 1;
  std::vector<long> L_list{};
  int n_realizations = 20;
  std::uint64_t seed = kDefaultSeed;
  double epsilon = 0.1;
  Boundary boundary = Boundary::free;
  int threads = 1;
};

struct SupportRow {
  long L = 0;
  long long n_eigenvalues = 0;
  long long n_outside = 0;    // outside the epsilon-fattened predicted support
  double frac_outside = 0.0;
  double min_eig = 0.0, max_eig = 0.0;
  double dist_min = 0.0;      // |min_eig - min predicted|
  double dist_max = 0.0;
};

struct SupportResult {
  std::vector<Interval> sigma;  // [-2d, 2d] + supp mu|_R, merged
  std::vector<SupportRow> rows;
};

SupportResult support_check(const SupportParams& p);

// Predicted spectrum alone (Minkowski sum, merged).
std::vector<Interval> predicted_spectrum(const MeasureSpec& m, int d);

// ---------------------------------------------------------------------------
// IDS continuity
// ---------------------------------------------------------------------------

struct ContinuityParams {
  MeasureSpec measure;  // must have no atoms at finite values
  int d = 1;
  std::vector<long> L_list{};
  int n_realizations = 50;
  std::uint64_t seed = kDefaultSeed;
  double dedup_tol = 1e-7;
  Boundary boundary = Boundary::free;
  int threads = 1;
};

struct ContinuityRow {
  long L = 0;
  long long max_multiplicity = 0;  // largest eigenvalue cluster, any realization
  double max_jump = 0.0;           // max_multiplicity / L^d
};

std::vector<ContinuityRow> continuity_check(const ContinuityParams& p);

// ---------------------------------------------------------------------------
// Lifshitz-tail probe
// ---------------------------------------------------------------------------

struct LifshitzParams {
  MeasureSpec measure;  // min of the real support must be 0
  int d = 1;
  long L = 2000;
  std::vector<double> offsets{};  // s values; N is estimated at -2d + s
  int n_realizations = 500;
  std::uint64_t seed = kDefaultSeed;
  double bulk_cap = 0.05;  // window guard: exclude offsets with N above this
  Normalization norm = Normalization::volume;
  Boundary boundary = Boundary::free;
  int threads = 1;
};

struct LifshitzPoint {
  double s = 0.0;
  double N = 0.0;
  bool used = false;  // false: zero estimate or bulk regime
};

struct LifshitzResult {
  double kappa = 0.0;         // slope of log|log N| against -log s
  double fit_residual = 0.0;  // rms residual of the fit
  bool lifshitz_like = false; // kappa >= 0.25 (van Hove edges fit well below)
  std::vector<LifshitzPoint> points;
  int n_used = 0;
};

LifshitzResult lifshitz_probe(const LifshitzParams& p);

// ---------------------------------------------------------------------------
// Finitely-supported-eigenfunction multiplicity bound
// ---------------------------------------------------------------------------

struct MultiplicityRow {
  double E = 0.0;
  long long observed = 0;  // eigenvalue count of H^L in [E - 1e-7, E + 1e-7]
  long long bound = 0;     // interior clusters matching catalogue animals
};

// Bound at one catalogued energy. Requires a constant potential equal to the
// catalogue shift on all active sites (pure percolation when shift = 0).
MultiplicityRow multiplicity_check(const PercolationConfig& cfg,
                                   const ClusterLabeling& labeling,
                                   const AnimalCatalog& cat, double E);

// All catalogued energies at once, sharing one eigensolve.
std::vector<MultiplicityRow> multiplicity_check_all(
    const PercolationConfig& cfg, const ClusterLabeling& labeling,
    const AnimalCatalog& cat);

}  // namespace percospec
