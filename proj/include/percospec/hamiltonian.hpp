#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "percospec/lattice.hpp"

namespace percospec {

enum class Variant { anderson, adjacency, neumann_like, dirichlet_like };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

// Symmetric sparse matrix over the retained active sites of a box. Rows follow
// increasing box index. Off-diagonal entries are the active-subgraph adjacency
// (value 1); only the upper triangle is stored.
class SparseHamiltonian {
 public:
  SparseHamiltonian() = default;
  SparseHamiltonian(std::vector<double> diag,
                    std::vector<long long> row_offsets,
                    std::vector<int> upper_cols,
                    std::vector<long long> site_of_row, Variant variant);

  long long n() const { return static_cast<long long>(diag_.size()); }
  Variant variant() const { return variant_; }
  double diag(long long i) const { return diag_[i]; }
  std::span<const int> upper_row(long long i) const {
    return {upper_cols_.data() + row_offsets_[i],
            static_cast<std::size_t>(row_offsets_[i + 1] - row_offsets_[i])};
  }
  // Box site index backing matrix row i.
  long long site_of(long long i) const { return site_of_row_[i]; }
  const std::vector<long long>& sites() const { return site_of_row_; }

  long long n_edges() const { return static_cast<long long>(upper_cols_.size()); }
  // max_i |i - j| over stored edges; 0 for diagonal matrices
  int bandwidth() const { return bandwidth_; }
  // max row sum of absolute values
  double inf_norm() const;

  // Dense row-major copy, n*n.
  std::vector<double> dense() const;

  // Symmetric coordinate-format text: "i j value", 1-based, upper triangle
  // including the diagonal.
  void export_coordinate(std::ostream& os) const;

 private:
  std::vector<double> diag_;
  std::vector<long long> row_offsets_;  // size n+1
  std::vector<int> upper_cols_;         // columns j > i
  std::vector<long long> site_of_row_;
  Variant variant_ = Variant::adjacency;
  int bandwidth_ = 0;
};

// Builds the operator over the active sites of cfg, optionally restricted to a
// set of clusters from `labeling` (empty `clusters` keeps everything).
//   anderson:       diag = q          adjacency:      diag = 0
//   neumann_like:   A + V             dirichlet_like: A - V
// with V(x) = 2d - deg(x). An empty retained set yields the 0-dimensional
// matrix.
SparseHamiltonian assemble(const PercolationConfig& cfg, Variant variant,
                           const ClusterLabeling* labeling = nullptr,
                           std::span<const int> clusters = {});

}  // namespace percospec
