#include "percospec/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "percospec/errors.hpp"
#include "percospec/io.hpp"

namespace percospec {

Box::Box(int d, long L, Boundary boundary)
    : d_(d), L_(L), boundary_(boundary) {
  if (d < 1) throw ValidationError("box: dimension d must be >= 1");
  if (L < 1) throw ValidationError("box: side parameter L must be >= 1");
  half_ = static_cast<int>(L / 2);
  side_ = 2 * half_ + 1;
  double n = std::pow(static_cast<double>(side_), d);
  if (n > 5e8) throw ResourceError("box: site count exceeds resource guard");
  n_sites_ = 1;
  for (int i = 0; i < d; ++i) n_sites_ *= side_;
}

long long Box::index_of(std::span<const int> x) const {
  long long idx = 0;
  for (int i = d_ - 1; i >= 0; --i) idx = idx * side_ + (x[i] + half_);
  return idx;
}

void Box::coord_of(long long idx, std::span<int> out) const {
  for (int i = 0; i < d_; ++i) {
    out[i] = static_cast<int>(idx % side_) - half_;
    idx /= side_;
  }
}

int Box::neighbors(long long idx, std::span<long long> out) const {
  int cnt = 0;
  long long stride = 1;
  long long rest = idx;
  for (int i = 0; i < d_; ++i) {
    const int c = static_cast<int>(rest % side_);  // shifted coordinate in [0, side)
    rest /= side_;
    if (c > 0)
      out[cnt++] = idx - stride;
    else if (boundary_ == Boundary::periodic && side_ > 2)
      out[cnt++] = idx + stride * (side_ - 1);
    if (c < side_ - 1)
      out[cnt++] = idx + stride;
    else if (boundary_ == Boundary::periodic && side_ > 2)
      out[cnt++] = idx - stride * (side_ - 1);
    stride *= side_;
  }
  return cnt;
}

bool Box::on_boundary(long long idx) const {
  for (int i = 0; i < d_; ++i) {
    const int c = static_cast<int>(idx % side_);
    if (c == 0 || c == side_ - 1) return true;
    idx /= side_;
  }
  return false;
}

long long PercolationConfig::n_active() const {
  long long n = 0;
  for (double v : q) n += !is_deleted(v);
  return n;
}

PercolationConfig generate_config(const Box& box, const MeasureSpec& m,
                                  std::uint64_t seed, std::uint64_t realization) {
  PercolationConfig cfg{box, std::vector<double>(box.n_sites()), seed, realization};
  for (long long i = 0; i < box.n_sites(); ++i) {
    SiteRng rng(seed, realization, static_cast<std::uint64_t>(i));
    cfg.q[i] = m.sample(rng);
  }
  return cfg;
}

namespace {

struct UnionFind {
  std::vector<long long> parent;
  explicit UnionFind(long long n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  long long find(long long x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(long long a, long long b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);  // keep the smaller index as root
    parent[a] = b;
  }
};

}  // namespace

ClusterLabeling label_clusters(const PercolationConfig& cfg) {
  const Box& box = cfg.box;
  const long long n = box.n_sites();
  const int d = box.d();

  UnionFind uf(n);
  std::vector<long long> nb(2 * d);
  for (long long i = 0; i < n; ++i) {
    if (!cfg.active(i)) continue;
    const int cnt = box.neighbors(i, nb);
    for (int k = 0; k < cnt; ++k)
      if (nb[k] > i && cfg.active(nb[k])) uf.unite(i, nb[k]);
  }

  ClusterLabeling out;
  out.label.assign(n, -1);
  // roots are minimal site indices, so scanning in index order yields the
  // canonical numbering directly
  for (long long i = 0; i < n; ++i) {
    if (!cfg.active(i)) continue;
    const long long r = uf.find(i);
    if (r == i) {
      out.label[i] = out.n_clusters++;
      out.size.push_back(0);
    } else {
      out.label[i] = out.label[r];
    }
    ++out.size[out.label[i]];
  }

  out.touches_boundary.assign(out.n_clusters, 0);
  // face hits per cluster and axis: bit 2i = low face, bit 2i+1 = high face
  std::vector<unsigned> faces(out.n_clusters, 0);
  std::vector<int> coord(d);
  for (long long i = 0; i < n; ++i) {
    const int c = out.label[i];
    if (c < 0) continue;
    box.coord_of(i, coord);
    for (int a = 0; a < d; ++a) {
      if (coord[a] == -box.half()) faces[c] |= 1u << (2 * a);
      if (coord[a] == box.half()) faces[c] |= 1u << (2 * a + 1);
    }
  }
  out.span_axes.assign(out.n_clusters, 0);
  for (int c = 0; c < out.n_clusters; ++c) {
    if (faces[c]) out.touches_boundary[c] = 1;
    for (int a = 0; a < d; ++a) {
      const bool lo = (faces[c] >> (2 * a)) & 1u, hi = (faces[c] >> (2 * a + 1)) & 1u;
      if (lo && hi) out.span_axes[c] |= 1u << a;
    }
  }

  for (int c = 0; c < out.n_clusters; ++c)
    if (out.largest < 0 || out.size[c] > out.size[out.largest]) out.largest = c;
  return out;
}

std::vector<int> vertex_deficiency(const PercolationConfig& cfg) {
  const Box& box = cfg.box;
  const long long n = box.n_sites();
  std::vector<int> V(n, -1);
  std::vector<long long> nb(2 * box.d());
  for (long long i = 0; i < n; ++i) {
    if (!cfg.active(i)) continue;
    const int cnt = box.neighbors(i, nb);
    int deg = 0;
    for (int k = 0; k < cnt; ++k) deg += cfg.active(nb[k]);
    V[i] = 2 * box.d() - deg;
  }
  return V;
}

void dump_config_csv(std::ostream& os, const PercolationConfig& cfg,
                     const ClusterLabeling* labeling, bool omit_deleted) {
  const Box& box = cfg.box;
  const int d = box.d();
  for (int i = 0; i < d; ++i) os << "x_" << (i + 1) << ",";
  os << "q,cluster_label\n";
  std::vector<int> coord(d);
  for (long long i = 0; i < box.n_sites(); ++i) {
    const bool act = cfg.active(i);
    if (!act && omit_deleted) continue;
    box.coord_of(i, coord);
    for (int k = 0; k < d; ++k) os << coord[k] << ",";
    if (act)
      os << fmt_double(cfg.q[i]);
    else
      os << "inf";
    os << ",";
    if (act && labeling)
      os << labeling->label[i];
    else
      os << -1;
    os << "\n";
  }
}

}  // namespace percospec
