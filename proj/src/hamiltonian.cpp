#include "percospec/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "percospec/errors.hpp"
#include "percospec/io.hpp"

namespace percospec {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::anderson: return "anderson";
    case Variant::adjacency: return "adjacency";
    case Variant::neumann_like: return "neumann_like";
    case Variant::dirichlet_like: return "dirichlet_like";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  if (s == "anderson") return Variant::anderson;
  if (s == "adjacency") return Variant::adjacency;
  if (s == "neumann_like") return Variant::neumann_like;
  if (s == "dirichlet_like") return Variant::dirichlet_like;
  throw ValidationError("variant: unknown operator variant \"" + s + "\"");
}

SparseHamiltonian::SparseHamiltonian(std::vector<double> diag,
                                     std::vector<long long> row_offsets,
                                     std::vector<int> upper_cols,
                                     std::vector<long long> site_of_row,
                                     Variant variant)
    : diag_(std::move(diag)),
      row_offsets_(std::move(row_offsets)),
      upper_cols_(std::move(upper_cols)),
      site_of_row_(std::move(site_of_row)),
      variant_(variant) {
  bandwidth_ = 0;
  for (long long i = 0; i < n(); ++i)
    for (int j : upper_row(i))
      bandwidth_ = std::max<int>(bandwidth_, j - static_cast<int>(i));
}

double SparseHamiltonian::inf_norm() const {
  std::vector<double> row(n(), 0.0);
  for (long long i = 0; i < n(); ++i) {
    row[i] += std::abs(diag_[i]);
    for (int j : upper_row(i)) {
      row[i] += 1.0;
      row[j] += 1.0;
    }
  }
  double m = 0.0;
  for (double r : row) m = std::max(m, r);
  return m;
}

std::vector<double> SparseHamiltonian::dense() const {
  const long long nn = n();
  std::vector<double> a(static_cast<std::size_t>(nn) * nn, 0.0);
  for (long long i = 0; i < nn; ++i) {
    a[i * nn + i] = diag_[i];
    for (int j : upper_row(i)) {
      a[i * nn + j] = 1.0;
      a[static_cast<long long>(j) * nn + i] = 1.0;
    }
  }
  return a;
}

void SparseHamiltonian::export_coordinate(std::ostream& os) const {
  for (long long i = 0; i < n(); ++i) {
    if (diag_[i] != 0.0)
      os << (i + 1) << " " << (i + 1) << " " << fmt_double(diag_[i]) << "\n";
    for (int j : upper_row(i)) os << (i + 1) << " " << (j + 1) << " 1\n";
  }
}

SparseHamiltonian assemble(const PercolationConfig& cfg, Variant variant,
                           const ClusterLabeling* labeling,
                           std::span<const int> clusters) {
  const Box& box = cfg.box;
  const long long n_box = box.n_sites();

  std::vector<char> keep_cluster;
  if (!clusters.empty()) {
    if (!labeling)
      throw ValidationError("assemble: cluster filter requires a labeling");
    keep_cluster.assign(labeling->n_clusters, 0);
    for (int c : clusters) {
      if (c < 0 || c >= labeling->n_clusters)
        throw ValidationError("assemble: cluster id out of range");
      keep_cluster[c] = 1;
    }
  }
  auto retained = [&](long long site) {
    if (!cfg.active(site)) return false;
    if (keep_cluster.empty()) return true;
    return keep_cluster[labeling->label[site]] != 0;
  };

  std::vector<long long> row_of_site(n_box, -1);
  std::vector<long long> site_of_row;
  for (long long s = 0; s < n_box; ++s)
    if (retained(s)) {
      row_of_site[s] = static_cast<long long>(site_of_row.size());
      site_of_row.push_back(s);
    }
  const long long n = static_cast<long long>(site_of_row.size());

  std::vector<int> V;
  if (variant == Variant::neumann_like || variant == Variant::dirichlet_like) {
    const std::vector<int> vd = vertex_deficiency(cfg);
    V.resize(n);
    for (long long i = 0; i < n; ++i) V[i] = vd[site_of_row[i]];
  }

  std::vector<double> diag(n, 0.0);
  std::vector<long long> row_offsets(n + 1, 0);
  std::vector<int> upper_cols;
  std::vector<long long> nb(2 * box.d());
  for (long long i = 0; i < n; ++i) {
    row_offsets[i] = static_cast<long long>(upper_cols.size());
    const long long s = site_of_row[i];
    const int cnt = box.neighbors(s, nb);
    for (int k = 0; k < cnt; ++k) {
      const long long r = nb[k] >= 0 ? row_of_site[nb[k]] : -1;
      if (r > i) upper_cols.push_back(static_cast<int>(r));
    }
    std::sort(upper_cols.begin() + row_offsets[i], upper_cols.end());
    switch (variant) {
      case Variant::anderson: diag[i] = cfg.q[s]; break;
      case Variant::adjacency: diag[i] = 0.0; break;
      case Variant::neumann_like: diag[i] = V[i]; break;
      case Variant::dirichlet_like: diag[i] = -V[i]; break;
    }
  }
  row_offsets[n] = static_cast<long long>(upper_cols.size());

  return SparseHamiltonian(std::move(diag), std::move(row_offsets),
                           std::move(upper_cols), std::move(site_of_row),
                           variant);
}

}  // namespace percospec
