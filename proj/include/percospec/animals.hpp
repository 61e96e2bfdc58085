#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "percospec/hamiltonian.hpp"

namespace percospec {

// A finite connected induced subgraph of Z^d, one representative per
// translation class. Sites are sorted lexicographically with the minimal site
// at the origin. Coordinates beyond dimension d are zero.
struct LatticeAnimal {
  int d = 0;
  int n = 0;
  std::vector<std::array<int, 3>> sites;
  int boundary_size = 0;                     // |{y not in S : dist(y, S) = 1}|
  std::vector<std::pair<int, int>> edges;    // induced adjacency, i < j
};

// Canonical translate: minimal site at the origin, sites sorted.
std::vector<std::array<int, 3>> canonical_form(
    std::span<const std::array<int, 3>> sites, int d);

// All fixed animals with up to n_max sites, one per translation class, by
// depth-first growth over the lexicographic half-space (each animal is reached
// exactly once from its minimal cell). Guards: d <= 3; n_max <= 32 (d=1),
// 10 (d=2), 8 (d=3).
std::vector<LatticeAnimal> enumerate_animals(int d, int n_max);

// Adjacency operator of one animal.
SparseHamiltonian animal_adjacency(const LatticeAnimal& a);

// Monic integer polynomial with a sign-change bracket around one of its roots.
struct AlgebraicCertificate {
  std::vector<long long> poly;  // ascending coefficients, leading 1
  double lo = 0.0, hi = 0.0;    // bracket of the root, width <= 1e-12
  int derivative_order = 0;     // bracket found on the k-th derivative
  int animal = -1;              // source animal id
};

struct EigenOccurrence {
  int animal = 0;
  int multiplicity = 0;
};

struct CatalogEntry {
  double value = 0.0;                    // includes the potential shift
  std::vector<EigenOccurrence> occ;      // every animal carrying this value
  AlgebraicCertificate certificate;      // from the smallest source animal
  std::vector<int> flagged_near;         // entries within 1e-9 kept distinct
};

// Finite-size approximation of the finitely-supported-eigenvalue set: the
// union of all animal spectra up to n_max sites, with exact certificates,
// optionally shifted by a constant on-cluster potential.
class AnimalCatalog {
 public:
  AnimalCatalog() = default;
  AnimalCatalog(int d, int n_max, double shift,
                std::vector<LatticeAnimal> animals,
                std::vector<CatalogEntry> entries);

  int d() const { return d_; }
  int n_max() const { return n_max_; }
  double shift() const { return shift_; }
  const std::vector<LatticeAnimal>& animals() const { return animals_; }
  const std::vector<CatalogEntry>& entries() const { return entries_; }
  std::vector<double> values() const;

  // Entry whose value is within tol of E; nearest wins ties.
  const CatalogEntry* find(double E, double tol = kDedupTol) const;
  // Animal id of a canonical site set, or -1.
  int find_animal(std::span<const std::array<int, 3>> sites) const;

  // Max gap between consecutive catalogued values inside [lo, hi].
  double max_gap(double lo, double hi) const;

  nlohmann::json to_json() const;
  // Validates structural integrity and certificates; throws ValidationError.
  static AnimalCatalog from_json(const nlohmann::json& j);

  static constexpr double kDedupTol = 1e-9;

 private:
  int d_ = 0;
  int n_max_ = 0;
  double shift_ = 0.0;
  std::vector<LatticeAnimal> animals_;
  std::vector<CatalogEntry> entries_;
  std::map<std::vector<int>, int> index_;

  void build_index();
};

// Exact spectra for every animal, cross-checked against the integer
// characteristic polynomial, deduplicated across animals with
// certificate-gated merging. threads parallelizes the per-animal solves.
AnimalCatalog build_catalogue(const std::vector<LatticeAnimal>& animals,
                              double potential_shift = 0.0, int threads = 1);

struct JumpPrediction {
  double mass = 0.0;
  bool catalogued = false;
  int n_max = 0;
};

// Truncated per-site density of the E-eigenspace contributed by finite
// clusters under Bernoulli retention p:
//   sum over animals S of p^{|S|} (1-p)^{|dS|} mult_S(E).
// A lower bound on the jump of the IDS at E.
JumpPrediction predicted_jump(double E, double p, const AnimalCatalog& cat);

// Certificate that a catalogued eigenvalue is an algebraic integer.
AlgebraicCertificate verify_algebraic_integer(const AnimalCatalog& cat, double E);

// --- integer polynomial helpers (exported for tests) ---
double poly_eval(std::span<const long long> coeff, double x);
std::vector<long long> poly_derivative(std::span<const long long> coeff);
// Tight sign-change bracket around a root of poly near x0 (searches derivative
// orders upward to handle multiple roots).
AlgebraicCertificate bracket_root(std::vector<long long> poly, double x0);

}  // namespace percospec
