#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "percospec/measure.hpp"

namespace percospec {

enum class Boundary { free, periodic };

// Cube of Z^d: sites with every coordinate in [-L/2, L/2]. For even L that is
// (L+1)^d sites; odd L (testing override) gives L^d. Two sites are adjacent
// iff their l1 distance is one; the periodic option wraps coordinates and is
// off by default.
class Box {
 public:
  Box(int d, long L, Boundary boundary = Boundary::free);

  int d() const { return d_; }
  long L() const { return L_; }
  Boundary boundary() const { return boundary_; }
  int side() const { return side_; }          // sites per axis
  int half() const { return half_; }          // coordinates run in [-half, half]
  long long n_sites() const { return n_sites_; }

  long long index_of(std::span<const int> x) const;
  void coord_of(long long idx, std::span<int> out) const;

  // Writes the box indices of the neighbors of idx; returns how many (<= 2d).
  int neighbors(long long idx, std::span<long long> out) const;

  bool on_boundary(long long idx) const;

 private:
  int d_;
  long L_;
  Boundary boundary_;
  int side_;
  int half_;
  long long n_sites_;
};

// One sampled potential field on a box. q == kDeleted marks removed vertices.
struct PercolationConfig {
  Box box;
  std::vector<double> q;
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;

  bool active(long long i) const { return !is_deleted(q[i]); }
  long long n_active() const;
};

// q drawn i.i.d. across sites, keyed by (seed, realization, site index).
PercolationConfig generate_config(const Box& box, const MeasureSpec& m,
                                  std::uint64_t seed, std::uint64_t realization);

// Connected components of the active induced subgraph. Labels are canonical:
// clusters are numbered 0,1,... by their minimal site index, so the labeling
// is independent of traversal order.
struct ClusterLabeling {
  std::vector<int> label;                // -1 on deleted sites
  std::vector<long long> size;           // per cluster
  std::vector<char> touches_boundary;    // per cluster
  std::vector<unsigned> span_axes;       // per cluster, bit i: joins faces of axis i
  int n_clusters = 0;
  int largest = -1;                      // ties resolved to the smaller label

  bool spans(int c) const { return span_axes[c] != 0; }
  bool spans_axis(int c, int axis) const { return (span_axes[c] >> axis) & 1u; }
};

ClusterLabeling label_clusters(const PercolationConfig& cfg);

// V(x) = 2d - deg(x) on active sites (in-box active neighbors only; periodic
// boxes wrap), -1 on deleted sites.
std::vector<int> vertex_deficiency(const PercolationConfig& cfg);

// CSV dump: x_1..x_d, q, cluster_label with "inf" for deleted sites.
void dump_config_csv(std::ostream& os, const PercolationConfig& cfg,
                     const ClusterLabeling* labeling, bool omit_deleted);

}  // namespace percospec
