#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "percospec/interval.hpp"
#include "percospec/rng.hpp"

namespace percospec {

// Sentinel for a deleted vertex; serialized as the string "inf".
inline constexpr double kDeleted = std::numeric_limits<double>::infinity();

inline bool is_deleted(double q) { return q == kDeleted; }

struct Atom {
  double value = 0.0;  // finite real or kDeleted
  double weight = 0.0;
};

struct DensityPiece {
  double lo = 0.0;
  double hi = 0.0;
  double height = 0.0;
};

// Single-site distribution: finitely many atoms plus a piecewise-constant
// density. Rich enough for every measure exercised here (Bernoulli retention,
// uniform windows, atom/density/deletion mixtures) while keeping supports and
// sup-norms exact.
class MeasureSpec {
 public:
  MeasureSpec(std::vector<Atom> atoms, std::vector<DensityPiece> densities);

  static MeasureSpec delta(double value);
  // p * delta_0 + (1-p) * delta_inf: site percolation with retention p.
  static MeasureSpec bernoulli(double p);
  // Constant density with the given total mass on [lo, hi].
  static MeasureSpec uniform_density(double lo, double hi, double mass = 1.0);
  // 1/3 uniform on [0,1] + 1/3 delta_{4d} + 1/3 delta_inf.
  static MeasureSpec percolation_example(int d);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityPiece>& densities() const { return densities_; }

  // One draw; consumes one or two uniforms from the stream.
  double sample(SiteRng& rng) const;

  // Support of the finite part: closures of the density pieces plus the finite
  // atoms, merged when overlapping or touching. Sorted and disjoint.
  std::vector<Interval> support_real() const;

  double deletion_probability() const;  // weight at infinity
  double retention_probability() const { return 1.0 - deletion_probability(); }
  bool has_finite_atoms() const;
  // supp = {0, inf} (pure site percolation)?
  bool is_bernoulli() const;

  // Mass of the open interval (lo, hi) carried by the density part.
  double density_mass(double lo, double hi) const;
  // Any finite atom strictly inside (lo, hi)?
  bool has_atom_in(double lo, double hi) const;
  // Max density height among pieces meeting the open interval (lo, hi).
  double density_sup(double lo, double hi) const;

  nlohmann::json to_json() const;
  static MeasureSpec from_json(const nlohmann::json& j);

 private:
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> densities_;
  std::vector<double> cumulative_;  // atom weights then piece masses

  void validate() const;
};

// Explicit constant of the finite-volume eigenvalue-count bound: with mu
// absolutely continuous on (a-2d, b+2d) with bounded density f,
//   C = 2^{d+2} ((b-a+4d+1)/delta)^2 * sup|f| / mu((a-2d, b+2d)).
double wegner_constant(const MeasureSpec& m, double a, double b, double delta,
                       int d);

}  // namespace percospec
