#include <doctest.h>

#include <cmath>

#include "percospec/errors.hpp"
#include "percospec/measure.hpp"

using namespace percospec;

TEST_CASE("measure validation names the violated invariant") {
  CHECK_THROWS_WITH_AS(MeasureSpec({Atom{0.0, 0.5}}, {}),
                       doctest::Contains("total mass"), ValidationError);
  CHECK_THROWS_WITH_AS(MeasureSpec({Atom{0.0, -0.5}, Atom{1.0, 1.5}}, {}),
                       doctest::Contains("weight"), ValidationError);
  CHECK_THROWS_WITH_AS(MeasureSpec({}, {DensityPiece{1.0, 0.0, 1.0}}),
                       doctest::Contains("lo < hi"), ValidationError);
  CHECK_THROWS_WITH_AS(
      MeasureSpec({}, {DensityPiece{0.0, 1.0, 0.5}, DensityPiece{0.5, 1.5, 0.5}}),
      doctest::Contains("disjoint"), ValidationError);
  CHECK_THROWS_AS(MeasureSpec({}, {DensityPiece{0.0, kDeleted, 1.0}}),
                  ValidationError);
}

TEST_CASE("delta measure always returns its atom") {
  const MeasureSpec m = MeasureSpec::delta(0.0);
  for (int i = 0; i < 100; ++i) {
    SiteRng rng(1, 2, i);
    CHECK(m.sample(rng) == 0.0);
  }
}

TEST_CASE("closing-example measure: thirds land in [0,1], at 4d, at infinity") {
  const int d = 2;
  const MeasureSpec m = MeasureSpec::percolation_example(d);
  const int n = 10000;
  int in_box = 0, at_atom = 0, deleted = 0;
  for (int i = 0; i < n; ++i) {
    SiteRng rng(42, 0, i);
    const double v = m.sample(rng);
    if (is_deleted(v))
      ++deleted;
    else if (v == 8.0)
      ++at_atom;
    else if (v >= 0.0 && v <= 1.0)
      ++in_box;
    else
      FAIL("sample outside the measure support: ", v);
  }
  const double third = 1.0 / 3.0;
  CHECK(std::abs(in_box / double(n) - third) <= 0.02);
  CHECK(std::abs(at_atom / double(n) - third) <= 0.02);
  CHECK(std::abs(deleted / double(n) - third) <= 0.02);
}

TEST_CASE("bernoulli measure is two-valued site percolation") {
  const MeasureSpec m = MeasureSpec::bernoulli(0.6);
  CHECK(m.is_bernoulli());
  CHECK(m.retention_probability() == doctest::Approx(0.6));
  int zeros = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    SiteRng rng(42, 1, i);
    const double v = m.sample(rng);
    CHECK((v == 0.0 || is_deleted(v)));
    zeros += v == 0.0;
  }
  CHECK(std::abs(zeros / double(n) - 0.6) <= 0.02);
}

TEST_CASE("sampling frequencies obey the 4-sigma binomial envelope") {
  const MeasureSpec m = MeasureSpec::bernoulli(0.35);
  const int n_draws = 2000, n_seeds = 50;
  const double bound = 4.0 * std::sqrt(0.35 * 0.65 / n_draws);
  int ok = 0;
  for (int s = 0; s < n_seeds; ++s) {
    int zeros = 0;
    for (int i = 0; i < n_draws; ++i) {
      SiteRng rng(1000 + s, 0, i);
      zeros += m.sample(rng) == 0.0;
    }
    ok += std::abs(zeros / double(n_draws) - 0.35) <= bound;
  }
  CHECK(ok >= 49);  // >= 99% of seeds
}

TEST_CASE("support_real merges pieces and atoms") {
  CHECK(MeasureSpec::delta(kDeleted).support_real().empty());

  const auto two_atoms =
      MeasureSpec({Atom{0.0, 0.5}, Atom{10.0, 0.5}}, {}).support_real();
  REQUIRE(two_atoms.size() == 2);
  CHECK(two_atoms[0].lo == 0.0);
  CHECK(two_atoms[0].is_point());
  CHECK(two_atoms[1].lo == 10.0);

  const auto closing = MeasureSpec::percolation_example(2).support_real();
  REQUIRE(closing.size() == 2);
  CHECK(closing[0].lo == 0.0);
  CHECK(closing[0].hi == 1.0);
  CHECK(closing[1].lo == 8.0);
  CHECK(closing[1].is_point());

  // touching intervals merge
  const auto merged =
      MeasureSpec({Atom{1.0, 0.2}}, {DensityPiece{0.0, 1.0, 0.4},
                                     DensityPiece{1.0, 2.0, 0.4}})
          .support_real();
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].lo == 0.0);
  CHECK(merged[0].hi == 2.0);
}

TEST_CASE("sampled finite values stay inside the real support") {
  const MeasureSpec m = MeasureSpec::percolation_example(1);
  const auto supp = m.support_real();
  for (int i = 0; i < 1000; ++i) {
    SiteRng rng(7, 7, i);
    const double v = m.sample(rng);
    if (!is_deleted(v)) CHECK(intervals_contain(supp, v));
  }
}

TEST_CASE("wegner constant: hand-substituted value 230.4") {
  const MeasureSpec m = MeasureSpec::uniform_density(-2.0, 3.0);
  CHECK(wegner_constant(m, 0.0, 1.0, 0.5, 1) == doctest::Approx(230.4).epsilon(1e-12));
}

TEST_CASE("wegner constant: doubling the density height doubles C") {
  // same unit mass on the window (-2, 3), twice the sup-norm
  const MeasureSpec halved = MeasureSpec::uniform_density(-2.0, 3.0);
  const MeasureSpec doubled = MeasureSpec::uniform_density(-2.0, 0.5);
  const double c1 = wegner_constant(halved, 0.0, 1.0, 0.5, 1);
  const double c2 = wegner_constant(doubled, 0.0, 1.0, 0.5, 1);
  CHECK(c2 == doctest::Approx(2.0 * c1).epsilon(1e-12));
}

TEST_CASE("wegner constant monotonicity in delta and window mass") {
  const MeasureSpec m = MeasureSpec::uniform_density(-2.0, 3.0);
  // quartering delta quadruples C
  CHECK(wegner_constant(m, 0.0, 1.0, 0.25, 1) ==
        doctest::Approx(4.0 * wegner_constant(m, 0.0, 1.0, 0.5, 1)));
  // half the window mass (same sup-norm) doubles C
  const MeasureSpec half_mass =
      MeasureSpec({Atom{10.0, 0.5}}, {DensityPiece{-2.0, 0.5, 0.2}});
  CHECK(wegner_constant(half_mass, 0.0, 1.0, 0.5, 1) ==
        doctest::Approx(2.0 * wegner_constant(m, 0.0, 1.0, 0.5, 1)));
}

TEST_CASE("wegner constant preconditions") {
  // atom inside the open window (a-2d, b+2d)
  const MeasureSpec with_atom =
      MeasureSpec({Atom{0.0, 0.5}}, {DensityPiece{-2.0, 3.0, 0.1}});
  CHECK_THROWS_WITH_AS(wegner_constant(with_atom, 0.0, 1.0, 0.5, 1),
                       doctest::Contains("absolutely continuous"),
                       ValidationError);
  // zero mass on the window
  CHECK_THROWS_WITH_AS(wegner_constant(MeasureSpec::delta(10.0), 0.0, 1.0, 0.5, 1),
                       doctest::Contains("zero mass"), ValidationError);
  CHECK_THROWS_AS(
      wegner_constant(MeasureSpec::uniform_density(-2.0, 3.0), 0.0, 1.0, -1.0, 1),
      ValidationError);
}

TEST_CASE("measure json round-trip spells infinity as \"inf\"") {
  const MeasureSpec m = MeasureSpec::percolation_example(2);
  const nlohmann::json j = m.to_json();
  CHECK(j.dump().find("\"inf\"") != std::string::npos);
  const MeasureSpec back = MeasureSpec::from_json(j);
  REQUIRE(back.atoms().size() == m.atoms().size());
  for (std::size_t i = 0; i < m.atoms().size(); ++i) {
    CHECK(back.atoms()[i].value == m.atoms()[i].value);
    CHECK(back.atoms()[i].weight == m.atoms()[i].weight);
  }
  REQUIRE(back.densities().size() == 1);
  CHECK(back.densities()[0].height == m.densities()[0].height);

  CHECK_THROWS_AS(MeasureSpec::from_json(nlohmann::json::parse(
                      R"({"atoms":[{"value":"oops","weight":1.0}]})")),
                  ValidationError);
}
