#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "percospec/acceptance.hpp"
#include "percospec/errors.hpp"
#include "percospec/experiments.hpp"
#include "percospec/reports.hpp"

using namespace percospec;

TEST_CASE("make_grid is inclusive") {
  const auto g = make_grid(-2.0, 2.0, 0.04);
  CHECK(g.size() == 101);
  CHECK(g.front() == doctest::Approx(-2.0));
  CHECK(g.back() == doctest::Approx(2.0));
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.0), ValidationError);
}

TEST_CASE("estimate_ids: empty measure gives the zero curve") {
  IdsParams p{.measure = MeasureSpec::delta(kDeleted)};
  p.d = 2;
  p.L_list = {10, 20};
  p.grid = make_grid(-5.0, 5.0, 1.0);
  p.n_realizations = 3;
  const auto ids = estimate_ids(p);
  REQUIRE(ids.size() == 2);
  for (const auto& curve : ids)
    for (double v : curve.mean) CHECK(v == 0.0);
}

TEST_CASE("estimate_ids: 1d full lattice approaches the arcsine law") {
  IdsParams p{.measure = MeasureSpec::delta(0.0)};
  p.d = 1;
  p.L_list = {300};
  p.grid = make_grid(-2.0, 2.0, 0.08);
  p.n_realizations = 1;
  p.variant = Variant::adjacency;
  p.norm = Normalization::per_site;
  const EmpiricalIDS ids = estimate_ids(p).front();
  for (std::size_t i = 0; i < ids.grid.size(); ++i)
    CHECK(std::abs(ids.mean[i] - acceptance::analytic_ids_1d(ids.grid[i])) <=
          0.05);
  CHECK(std::is_sorted(ids.mean.begin(), ids.mean.end()));
}

TEST_CASE("estimate_ids: total mass equals the active density at E = 2d") {
  IdsParams p{.measure = MeasureSpec::bernoulli(0.3)};
  p.d = 2;
  p.L_list = {40};
  p.grid = {4.0};
  p.n_realizations = 20;
  p.variant = Variant::adjacency;
  p.norm = Normalization::per_site;
  const EmpiricalIDS ids = estimate_ids(p).front();
  CHECK(std::abs(ids.mean[0] - 0.3) <= 0.01);
}

TEST_CASE("estimate_ids: largest-cluster curve sits below the full curve") {
  IdsParams p{.measure = MeasureSpec::bernoulli(0.6)};
  p.d = 2;
  p.L_list = {20};
  p.grid = make_grid(-4.0, 4.0, 0.25);
  p.n_realizations = 5;
  p.variant = Variant::adjacency;
  const EmpiricalIDS all = estimate_ids(p).front();
  p.scope = ClusterScope::largest;
  const EmpiricalIDS largest = estimate_ids(p).front();
  for (std::size_t i = 0; i < all.grid.size(); ++i)
    CHECK(largest.mean[i] <= all.mean[i] + 1e-12);
}

TEST_CASE("estimate_ids: spanning scope keeps only face-to-face clusters") {
  IdsParams p{.measure = MeasureSpec::bernoulli(0.45)};  // subcritical-ish
  p.d = 2;
  p.L_list = {16};
  p.grid = {4.0};  // total mass kept by the scope
  p.n_realizations = 10;
  p.variant = Variant::adjacency;
  p.scope = ClusterScope::spanning;
  const EmpiricalIDS spanning = estimate_ids(p).front();
  p.scope = ClusterScope::largest;
  const EmpiricalIDS largest = estimate_ids(p).front();
  p.scope = ClusterScope::all;
  const EmpiricalIDS all = estimate_ids(p).front();
  CHECK(spanning.mean[0] <= all.mean[0]);
  CHECK(largest.mean[0] <= all.mean[0]);
  CHECK(largest.mean[0] > 0.0);
  // at p = 0.45 many realizations have no spanning cluster at all
  CHECK(spanning.mean[0] < largest.mean[0]);
}

TEST_CASE("total eigenvalue mass is monotone in the retention probability") {
  std::vector<double> masses;
  for (double p_ret : {0.3, 0.5, 0.8}) {
    IdsParams p{.measure = MeasureSpec::bernoulli(p_ret)};
    p.d = 2;
    p.L_list = {20};
    p.grid = {4.0};
    p.n_realizations = 8;
    p.variant = Variant::adjacency;
    p.norm = Normalization::per_site;
    masses.push_back(estimate_ids(p).front().mean[0]);
  }
  CHECK(masses[0] < masses[1]);  // shared seeds couple the configurations
  CHECK(masses[1] < masses[2]);
}

TEST_CASE("monotone coupling: raising p only adds vertices") {
  const Box box(2, 30);
  const PercolationConfig lo = generate_config(box, MeasureSpec::bernoulli(0.4), 5, 3);
  const PercolationConfig hi = generate_config(box, MeasureSpec::bernoulli(0.7), 5, 3);
  for (long long i = 0; i < box.n_sites(); ++i)
    if (lo.active(i)) CHECK(hi.active(i));
}

TEST_CASE("detect_jumps_from_ids: a synthetic step is reported") {
  const AnimalCatalog cat = build_catalogue(enumerate_animals(2, 2));
  EmpiricalIDS ids;
  ids.grid = {-1.0, -0.5, 0.0, 0.5, 1.0};
  ids.mean = {0.1, 0.1, 0.3, 0.3, 0.3};  // single step of size 0.2 at E = 0
  ids.sd.assign(5, 0.0);
  const JumpReport report =
      detect_jumps_from_ids(ids, cat, MeasureSpec::bernoulli(0.5), 0.05);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].location == 0.0);
  CHECK(report.rows[0].mass == doctest::Approx(0.2));
  CHECK(report.rows[0].matched);
  CHECK(report.rows[0].matched_value == doctest::Approx(0.0));
}

TEST_CASE("detect_jumps: subcritical percolation shows the zero-energy atom") {
  const AnimalCatalog cat = build_catalogue(enumerate_animals(2, 6));
  JumpParams p{.measure = MeasureSpec::bernoulli(0.3)};
  p.d = 2;
  p.L = 24;
  p.n_realizations = 10;
  p.threshold = 5e-3;
  p.threads = 2;
  const JumpReport report = detect_jumps(p, cat);
  const JumpRow* zero = nullptr;
  for (const JumpRow& r : report.rows)
    if (r.matched && std::abs(r.matched_value) < 1e-9) zero = &r;
  REQUIRE(zero != nullptr);
  CHECK(zero->prediction_valid);
  // truncated prediction within 35% at this small volume
  CHECK(std::abs(zero->mass - zero->predicted) / zero->predicted < 0.35);
}

TEST_CASE("detect_jumps: shifted atom moves the catalogue") {
  // 0.6 delta_2 + 0.4 delta_inf: jumps appear at 2 + (animal eigenvalues)
  const AnimalCatalog cat = build_catalogue(enumerate_animals(2, 4), 2.0);
  JumpParams p{.measure = MeasureSpec({Atom{2.0, 0.6}, Atom{kDeleted, 0.4}}, {})};
  p.d = 2;
  p.L = 20;
  p.variant = Variant::anderson;
  p.n_realizations = 10;
  p.threshold = 5e-3;
  const JumpReport report = detect_jumps(p, cat);
  const JumpRow* at2 = nullptr;
  for (const JumpRow& r : report.rows)
    if (r.matched && std::abs(r.matched_value - 2.0) < 1e-9) at2 = &r;
  REQUIRE(at2 != nullptr);
  CHECK(at2->prediction_valid);
  CHECK(at2->predicted ==
        doctest::Approx(predicted_jump(2.0, 0.6, cat).mass));
}

TEST_CASE("wegner_experiment: precondition names the offending interval") {
  WegnerParams p{.measure = MeasureSpec::uniform_density(-2.0, 3.0)};
  p.d = 1;
  p.L = 20;
  p.intervals = {{0.1, 0.2}};  // dist to (0,1)^c is 0.1 < delta = 0.5
  p.n_realizations = 2;
  CHECK_THROWS_WITH_AS(wegner_experiment(p), doctest::Contains("0.1"),
                       ValidationError);
}

TEST_CASE("wegner_experiment: bound linear in |I|, point intervals vanish") {
  WegnerParams p{.measure = MeasureSpec::uniform_density(-2.0, 3.0)};
  p.d = 1;
  p.L = 30;
  p.intervals = {{0.4, 0.6}, {0.45, 0.55}, {0.5, 0.5}};
  p.n_realizations = 40;
  p.threads = 2;
  const WegnerResult result = wegner_experiment(p);
  CHECK(result.constant == doctest::Approx(230.4));
  CHECK(result.rows[0].rhs == doctest::Approx(2.0 * result.rows[1].rhs));
  // degenerate point interval: zero bound, and the estimate must not be
  // significantly positive (continuity)
  CHECK(result.rows[2].rhs == 0.0);
  CHECK(result.rows[2].lhs <= 0.05);
  for (const WegnerRow& row : result.rows) CHECK_FALSE(row.violation);
}

TEST_CASE("predicted_spectrum: minkowski sums of the closing example") {
  // d=2: [-4,4] + ([0,1] u {8}) = [-4,5] u [4,12] -> merged [-4,12]
  const auto sigma = predicted_spectrum(MeasureSpec::percolation_example(2), 2);
  REQUIRE(sigma.size() == 1);
  CHECK(sigma[0].lo == doctest::Approx(-4.0));
  CHECK(sigma[0].hi == doctest::Approx(12.0));
  // d=1 half/half atoms at 0 and 10: [-2,2] u [8,12]
  const auto split =
      predicted_spectrum(MeasureSpec({Atom{0.0, 0.5}, Atom{10.0, 0.5}}, {}), 1);
  REQUIRE(split.size() == 2);
  CHECK(split[0].lo == doctest::Approx(-2.0));
  CHECK(split[0].hi == doctest::Approx(2.0));
  CHECK(split[1].lo == doctest::Approx(8.0));
  CHECK(split[1].hi == doctest::Approx(12.0));
}

TEST_CASE("support_check: full 1d lattice fills [-2,2]") {
  SupportParams p{.measure = MeasureSpec::delta(0.0)};
  p.d = 1;
  p.L_list = {200};
  p.n_realizations = 1;
  p.epsilon = 0.05;
  const SupportResult result = support_check(p);
  REQUIRE(result.sigma.size() == 1);
  CHECK(result.rows[0].n_outside == 0);
  CHECK(result.rows[0].dist_min <= 0.01);
  CHECK(result.rows[0].dist_max <= 0.01);
}

TEST_CASE("continuity_check rejects measures with finite atoms") {
  ContinuityParams p{.measure = MeasureSpec::bernoulli(0.5)};
  p.d = 1;
  p.L_list = {20};
  CHECK_THROWS_WITH_AS(continuity_check(p), doctest::Contains("atoms"),
                       ValidationError);
}

TEST_CASE("continuity_check: absolutely continuous measure, shrinking jumps") {
  ContinuityParams p{.measure = MeasureSpec({Atom{kDeleted, 0.3}},
                                            {DensityPiece{0.0, 2.0, 0.35}})};
  p.d = 1;
  p.L_list = {20, 60};
  p.n_realizations = 10;
  p.threads = 2;
  const auto rows = continuity_check(p);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].max_jump > rows[1].max_jump);
  // continuous potential: no exact degeneracies
  CHECK(rows[0].max_multiplicity == 1);
  CHECK(rows[0].max_jump == doctest::Approx(1.0 / 20.0));
}

TEST_CASE("lifshitz_probe: guards and insufficient statistics") {
  LifshitzParams p{.measure = MeasureSpec::bernoulli(0.5)};
  p.d = 1;
  p.L = 100;
  p.n_realizations = 2;
  p.offsets = {1e-7};  // nothing that deep in the tail at this volume
  CHECK_THROWS_AS(lifshitz_probe(p), InsufficientStatistics);

  LifshitzParams bad{.measure = MeasureSpec::delta(1.0)};
  bad.offsets = {0.1};
  CHECK_THROWS_WITH_AS(lifshitz_probe(bad), doctest::Contains("support"),
                       ValidationError);
}

TEST_CASE("lifshitz_probe: van hove control fits a small exponent") {
  LifshitzParams p{.measure = MeasureSpec::delta(0.0)};
  p.d = 1;
  p.L = 1000;
  p.n_realizations = 1;
  p.offsets = {0.002, 0.004, 0.008, 0.016, 0.032};
  p.bulk_cap = 0.05;
  const LifshitzResult result = lifshitz_probe(p);
  CHECK(result.n_used >= 3);
  CHECK_FALSE(result.lifshitz_like);
}

TEST_CASE("multiplicity bound: engineered interior clusters") {
  const AnimalCatalog cat = build_catalogue(enumerate_animals(2, 4));
  const Box box(2, 10);
  PercolationConfig cfg{box, std::vector<double>(box.n_sites(), kDeleted), 0, 0};
  auto at = [&](int x, int y) -> double& {
    const std::vector<int> c{x, y};
    return cfg.q[box.index_of(c)];
  };
  // three isolated interior vertices and one interior dimer
  at(-3, -3) = 0.0;
  at(0, 0) = 0.0;
  at(3, 3) = 0.0;
  at(-3, 2) = 0.0;
  at(-2, 2) = 0.0;
  const ClusterLabeling lab = label_clusters(cfg);

  const MultiplicityRow zero = multiplicity_check(cfg, lab, cat, 0.0);
  CHECK(zero.bound == 3);
  CHECK(zero.observed >= 3);
  const MultiplicityRow plus = multiplicity_check(cfg, lab, cat, 1.0);
  CHECK(plus.bound == 1);
  CHECK(plus.observed >= 1);
  const MultiplicityRow minus = multiplicity_check(cfg, lab, cat, -1.0);
  CHECK(minus.bound == 1);

  CHECK_THROWS_AS(multiplicity_check(cfg, lab, cat, 0.333), ValidationError);
}

TEST_CASE("multiplicity bound holds on random subcritical configs") {
  const AnimalCatalog cat = build_catalogue(enumerate_animals(2, 4));
  const MeasureSpec m = MeasureSpec::bernoulli(0.3);
  const Box box(2, 20);
  for (int r = 0; r < 20; ++r) {
    const PercolationConfig cfg = generate_config(box, m, 606, r);
    const ClusterLabeling lab = label_clusters(cfg);
    for (const MultiplicityRow& row : multiplicity_check_all(cfg, lab, cat))
      CHECK(row.observed >= row.bound);
  }
}

TEST_CASE("experiments are byte-reproducible across widths") {
  IdsParams p{.measure = MeasureSpec::bernoulli(0.55)};
  p.d = 2;
  p.L_list = {16};
  p.grid = make_grid(-4.0, 4.0, 0.5);
  p.n_realizations = 6;
  p.variant = Variant::adjacency;
  p.threads = 1;
  const EmpiricalIDS serial = estimate_ids(p).front();
  p.threads = 4;
  const EmpiricalIDS wide = estimate_ids(p).front();
  CHECK(serial.mean == wide.mean);
  CHECK(serial.sd == wide.sd);
  CHECK(ids_csv(serial) == ids_csv(wide));
}

TEST_CASE("scope and normalization names round-trip") {
  for (ClusterScope s :
       {ClusterScope::all, ClusterScope::largest, ClusterScope::spanning})
    CHECK(scope_from_string(to_string(s)) == s);
  for (Normalization n : {Normalization::volume, Normalization::per_site})
    CHECK(normalization_from_string(to_string(n)) == n);
  for (Boundary b : {Boundary::free, Boundary::periodic})
    CHECK(boundary_from_string(to_string(b)) == b);
  CHECK_THROWS_AS(scope_from_string("none"), ValidationError);
}
