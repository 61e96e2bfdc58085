#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "percospec/errors.hpp"
#include "percospec/lattice.hpp"

using namespace percospec;

TEST_CASE("box: site count and index bijection") {
  const Box box(2, 4);
  CHECK(box.n_sites() == 25);
  CHECK(box.side() == 5);
  std::vector<int> coord(2);
  for (long long i = 0; i < box.n_sites(); ++i) {
    box.coord_of(i, coord);
    CHECK(coord[0] >= -2);
    CHECK(coord[0] <= 2);
    CHECK(box.index_of(coord) == i);
  }
  // odd L (testing override): integer points of [-L/2, L/2] only
  CHECK(Box(1, 5).n_sites() == 5);
  CHECK(Box(3, 4).n_sites() == 125);
  CHECK_THROWS_AS(Box(0, 4), ValidationError);
  CHECK_THROWS_AS(Box(2, 0), ValidationError);
}

TEST_CASE("box: neighbors are the l1-distance-one sites") {
  const Box box(2, 4);
  std::vector<int> coord(2), nb_coord(2);
  std::vector<long long> nb(4);
  for (long long i = 0; i < box.n_sites(); ++i) {
    box.coord_of(i, coord);
    const int cnt = box.neighbors(i, nb);
    const int expected = (std::abs(coord[0]) == 2 ? 1 : 2) +
                         (std::abs(coord[1]) == 2 ? 1 : 2);
    CHECK(cnt == expected);
    for (int k = 0; k < cnt; ++k) {
      box.coord_of(nb[k], nb_coord);
      const int dist =
          std::abs(coord[0] - nb_coord[0]) + std::abs(coord[1] - nb_coord[1]);
      CHECK(dist == 1);
    }
  }
}

TEST_CASE("periodic box wraps") {
  const Box ring(1, 4, Boundary::periodic);
  std::vector<long long> nb(2);
  const int cnt = ring.neighbors(0, nb);  // site at coordinate -2
  CHECK(cnt == 2);
  CHECK(((nb[0] == 4 && nb[1] == 1) || (nb[0] == 1 && nb[1] == 4)));
}

TEST_CASE("generate_config: deterministic atoms") {
  const Box box(2, 6);
  const PercolationConfig all = generate_config(box, MeasureSpec::delta(0.0), 1, 0);
  CHECK(all.n_active() == box.n_sites());
  for (double v : all.q) CHECK(v == 0.0);
  const PercolationConfig none =
      generate_config(box, MeasureSpec::delta(kDeleted), 1, 0);
  CHECK(none.n_active() == 0);
}

TEST_CASE("generate_config: bernoulli active fraction at d=2, L=100") {
  const Box box(2, 100);
  const PercolationConfig cfg =
      generate_config(box, MeasureSpec::bernoulli(0.6), 2024, 0);
  const double frac = double(cfg.n_active()) / box.n_sites();
  CHECK(std::abs(frac - 0.6) <= 0.01);
}

TEST_CASE("generate_config regenerates bit-exactly") {
  const Box box(2, 20);
  const MeasureSpec m = MeasureSpec::percolation_example(2);
  const PercolationConfig a = generate_config(box, m, 99, 5);
  const PercolationConfig b = generate_config(box, m, 99, 5);
  CHECK(a.q == b.q);
  const PercolationConfig c = generate_config(box, m, 99, 6);
  CHECK(a.q != c.q);
}

TEST_CASE("label_clusters: full box is one spanning cluster") {
  const Box box(2, 4);
  const PercolationConfig cfg = generate_config(box, MeasureSpec::delta(0.0), 1, 0);
  const ClusterLabeling lab = label_clusters(cfg);
  CHECK(lab.n_clusters == 1);
  CHECK(lab.size[0] == 25);
  CHECK(lab.spans(0));
  CHECK(lab.spans_axis(0, 0));
  CHECK(lab.spans_axis(0, 1));
  CHECK(lab.largest == 0);
}

TEST_CASE("label_clusters: checkerboard gives singletons") {
  const Box box(2, 6);
  PercolationConfig cfg{box, std::vector<double>(box.n_sites(), kDeleted), 0, 0};
  std::vector<int> coord(2);
  for (long long i = 0; i < box.n_sites(); ++i) {
    box.coord_of(i, coord);
    if ((coord[0] + coord[1]) % 2 == 0) cfg.q[i] = 0.0;
  }
  const ClusterLabeling lab = label_clusters(cfg);
  CHECK(lab.n_clusters == cfg.n_active());
  for (long long s : lab.size) CHECK(s == 1);
}

TEST_CASE("label_clusters: labels are canonical by minimal site index") {
  const Box box(2, 30);
  const PercolationConfig cfg =
      generate_config(box, MeasureSpec::bernoulli(0.55), 31337, 2);
  const ClusterLabeling lab = label_clusters(cfg);
  // first active occurrence of each label must appear in label order
  int next = 0;
  for (long long i = 0; i < box.n_sites(); ++i) {
    const int c = lab.label[i];
    if (c < 0) continue;
    if (c == next) ++next;
    CHECK(c <= next);
  }
  CHECK(next == lab.n_clusters);
  const long long total =
      std::accumulate(lab.size.begin(), lab.size.end(), 0LL);
  CHECK(total == cfg.n_active());
}

TEST_CASE("label_clusters: spanning probability near the d=2 threshold") {
  const Box box(2, 64);
  const MeasureSpec m = MeasureSpec::bernoulli(0.5927);
  int spans = 0;
  const int n_real = 200;
  for (int r = 0; r < n_real; ++r) {
    const PercolationConfig cfg = generate_config(box, m, 777, r);
    const ClusterLabeling lab = label_clusters(cfg);
    bool any = false;
    for (int c = 0; c < lab.n_clusters && !any; ++c) any = lab.spans_axis(c, 0);
    spans += any;
  }
  const double prob = spans / double(n_real);
  CHECK(prob >= 0.4);
  CHECK(prob <= 0.6);
}

TEST_CASE("isolated active vertices match the binomial density") {
  const Box box(2, 50);
  const double p = 0.3;
  const MeasureSpec m = MeasureSpec::bernoulli(p);
  const int n_real = 50;
  std::vector<double> freq;
  std::vector<long long> nb(4);
  std::vector<int> coord(2);
  for (int r = 0; r < n_real; ++r) {
    const PercolationConfig cfg = generate_config(box, m, 4051, r);
    long long isolated = 0, interior = 0;
    for (long long i = 0; i < box.n_sites(); ++i) {
      if (box.on_boundary(i)) continue;
      ++interior;
      if (!cfg.active(i)) continue;
      const int cnt = box.neighbors(i, nb);
      bool alone = true;
      for (int k = 0; k < cnt; ++k) alone = alone && !cfg.active(nb[k]);
      isolated += alone;
    }
    freq.push_back(double(isolated) / interior);
  }
  const double mean = std::accumulate(freq.begin(), freq.end(), 0.0) / n_real;
  double var = 0.0;
  for (double f : freq) var += (f - mean) * (f - mean);
  const double se = std::sqrt(var / (n_real - 1)) / std::sqrt(double(n_real));
  const double expected = p * std::pow(1.0 - p, 4);
  CHECK(std::abs(mean - expected) <= 3.0 * se);
}

TEST_CASE("vertex_deficiency: isolated, interior, corner") {
  const Box box(2, 4);
  // all active
  const PercolationConfig full = generate_config(box, MeasureSpec::delta(0.0), 1, 0);
  const std::vector<int> v_full = vertex_deficiency(full);
  const std::vector<int> center{0, 0}, corner{-2, -2};
  CHECK(v_full[box.index_of(center)] == 0);
  CHECK(v_full[box.index_of(corner)] == 2);

  PercolationConfig lone{box, std::vector<double>(box.n_sites(), kDeleted), 0, 0};
  lone.q[box.index_of(center)] = 0.0;
  const std::vector<int> v_lone = vertex_deficiency(lone);
  CHECK(v_lone[box.index_of(center)] == 4);
  CHECK(v_lone[box.index_of(corner)] == -1);  // deleted marker
}

TEST_CASE("config csv dump spells inf and labels") {
  const Box box(1, 2);
  PercolationConfig cfg{box, {0.5, kDeleted, 1.25}, 0, 0};
  const ClusterLabeling lab = label_clusters(cfg);
  std::ostringstream os;
  dump_config_csv(os, cfg, &lab, false);
  CHECK(os.str() ==
        "x_1,q,cluster_label\n-1,0.5,0\n0,inf,-1\n1,1.25,1\n");
}
