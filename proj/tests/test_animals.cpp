#include <doctest.h>

#include <cmath>
#include <set>

#include "percospec/acceptance.hpp"
#include "percospec/animals.hpp"
#include "percospec/errors.hpp"

using namespace percospec;

TEST_CASE("enumeration: d=1 has exactly one animal per size") {
  const auto animals = enumerate_animals(1, 6);
  std::vector<int> counts(6, 0);
  for (const auto& a : animals) ++counts[a.n - 1];
  for (int c : counts) CHECK(c == 1);
}

TEST_CASE("enumeration: d=2 counts match the naive oracle and frozen values") {
  const std::vector<long long> frozen{1, 2, 6, 19, 63};
  std::vector<long long> counts(5, 0);
  for (const auto& a : enumerate_animals(2, 5)) ++counts[a.n - 1];
  for (int n = 1; n <= 5; ++n) {
    CHECK(counts[n - 1] == frozen[n - 1]);
    CHECK(counts[n - 1] == acceptance::brute_force_animal_count(2, n));
  }
}

TEST_CASE("enumeration: d=3 has one animal per axis at n=2") {
  std::vector<const LatticeAnimal*> dimers;
  const auto animals = enumerate_animals(3, 2);
  for (const auto& a : animals)
    if (a.n == 2) dimers.push_back(&a);
  CHECK(dimers.size() == 3);
  // d=3 triominoes: 15 fixed
  long long n3 = 0;
  for (const auto& a : enumerate_animals(3, 3)) n3 += a.n == 3;
  CHECK(n3 == 15);
  CHECK(acceptance::brute_force_animal_count(3, 3) == 15);
}

TEST_CASE("enumeration: d=3 fixed counts up to tetracubes") {
  const std::vector<long long> frozen{1, 3, 15, 86};
  std::vector<long long> counts(4, 0);
  for (const auto& a : enumerate_animals(3, 4)) ++counts[a.n - 1];
  CHECK(counts == frozen);
}

TEST_CASE("enumeration guards") {
  CHECK_THROWS_AS(enumerate_animals(2, 11), ResourceError);
  CHECK_THROWS_AS(enumerate_animals(3, 9), ResourceError);
  CHECK_THROWS_AS(enumerate_animals(4, 2), ResourceError);
  CHECK_THROWS_AS(enumerate_animals(2, 0), ValidationError);
}

TEST_CASE("animals are canonical, connected and distinct") {
  const auto animals = enumerate_animals(2, 6);
  std::set<std::vector<std::array<int, 3>>> unique;
  for (const auto& a : animals) {
    CHECK(a.sites.front() == std::array<int, 3>{0, 0, 0});
    CHECK(std::is_sorted(a.sites.begin(), a.sites.end()));
    CHECK(canonical_form(a.sites, 2) == a.sites);
    CHECK(unique.insert(a.sites).second);
    // edges connect the animal
    std::vector<int> seen(a.n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const auto& [x, y] : a.edges) {
        const int w = x == u ? y : (y == u ? x : -1);
        if (w >= 0 && !seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    CHECK(reached == a.n);
  }
}

TEST_CASE("site boundary sizes") {
  const auto a1 = enumerate_animals(2, 1);
  REQUIRE(a1.size() == 1);
  CHECK(a1[0].boundary_size == 4);
  for (const auto& a : enumerate_animals(2, 2))
    if (a.n == 2) CHECK(a.boundary_size == 6);
  for (const auto& a : enumerate_animals(1, 2))
    if (a.n == 2) CHECK(a.boundary_size == 2);
}

TEST_CASE("catalogue: exact truncations of the eigenvalue set") {
  const AnimalCatalog c1 = build_catalogue(enumerate_animals(2, 1));
  REQUIRE(c1.entries().size() == 1);
  CHECK(std::abs(c1.entries()[0].value) <= 1e-12);

  const AnimalCatalog c2 = build_catalogue(enumerate_animals(2, 2));
  const std::vector<double> v2 = c2.values();
  REQUIRE(v2.size() == 3);
  CHECK(v2[0] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(v2[1]) <= 1e-9);
  CHECK(v2[2] == doctest::Approx(1.0).epsilon(1e-9));

  const AnimalCatalog c3 = build_catalogue(enumerate_animals(2, 3));
  const std::vector<double> v3 = c3.values();
  const double r2 = std::sqrt(2.0);
  REQUIRE(v3.size() == 5);
  CHECK(v3[0] == doctest::Approx(-r2).epsilon(1e-9));
  CHECK(v3[1] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(v3[2]) <= 1e-9);
  CHECK(v3[3] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(v3[4] == doctest::Approx(r2).epsilon(1e-9));
}

TEST_CASE("catalogue eigenvalues respect the gershgorin bound") {
  const AnimalCatalog cat = build_catalogue(enumerate_animals(2, 6), 0.0, 2);
  for (double v : cat.values()) CHECK(std::abs(v) <= 4.0 + 1e-9);
}

TEST_CASE("catalogue gap in [-2, 2] shrinks as n_max grows") {
  double prev = 1e300;
  for (int n_max : {2, 4, 6, 8}) {
    const AnimalCatalog cat = build_catalogue(enumerate_animals(2, n_max), 0.0, 2);
    const double gap = cat.max_gap(-2.0, 2.0);
    CHECK(gap <= prev + 1e-12);
    prev = gap;
  }
  CHECK(prev < 0.5);  // n_max=8 already fills [-2,2] fairly densely
}

TEST_CASE("predicted_jump: closed forms for tiny truncations") {
  const double p = 0.37;
  const AnimalCatalog c1 = build_catalogue(enumerate_animals(2, 1));
  const JumpPrediction j1 = predicted_jump(0.0, p, c1);
  CHECK(j1.catalogued);
  CHECK(j1.mass == doctest::Approx(p * std::pow(1 - p, 4)).epsilon(1e-12));

  const AnimalCatalog d1 = build_catalogue(enumerate_animals(1, 2));
  const JumpPrediction j2 = predicted_jump(1.0, p, d1);
  CHECK(j2.mass == doctest::Approx(p * p * (1 - p) * (1 - p)).epsilon(1e-12));

  const JumpPrediction none = predicted_jump(5.0, p, d1);
  CHECK_FALSE(none.catalogued);
  CHECK(none.mass == 0.0);

  CHECK_THROWS_AS(predicted_jump(0.0, 1.5, c1), ValidationError);
}

TEST_CASE("predicted_jump grows with the truncation size") {
  double prev = 0.0;
  for (int n_max : {1, 2, 3, 4, 5, 6}) {
    const AnimalCatalog cat = build_catalogue(enumerate_animals(2, n_max));
    const double mass = predicted_jump(0.0, 0.3, cat).mass;
    CHECK(mass >= prev - 1e-15);
    prev = mass;
  }
}

TEST_CASE("algebraic-integer certificates") {
  const AnimalCatalog cat = build_catalogue(enumerate_animals(2, 3));
  const double r2 = std::sqrt(2.0);

  const AlgebraicCertificate csqrt2 = verify_algebraic_integer(cat, r2);
  CHECK(csqrt2.poly == std::vector<long long>{0, -2, 0, 1});  // x^3 - 2x
  CHECK(csqrt2.lo <= r2);
  CHECK(csqrt2.hi >= r2);
  CHECK(csqrt2.hi - csqrt2.lo <= 1e-9);

  CHECK(verify_algebraic_integer(cat, 1.0).poly ==
        std::vector<long long>{-1, 0, 1});  // dimer: x^2 - 1
  CHECK(verify_algebraic_integer(cat, 0.0).poly ==
        std::vector<long long>{0, 1});  // single vertex: x

  CHECK_THROWS_AS(verify_algebraic_integer(cat, 0.123), ValidationError);
}

TEST_CASE("catalogue shift moves every entry") {
  const AnimalCatalog shifted = build_catalogue(enumerate_animals(2, 2), 2.5);
  const std::vector<double> v = shifted.values();
  CHECK(v[0] == doctest::Approx(1.5));
  CHECK(v[1] == doctest::Approx(2.5));
  CHECK(v[2] == doctest::Approx(3.5));
  // certificates still annihilate the unshifted root
  const AlgebraicCertificate cert = verify_algebraic_integer(shifted, 3.5);
  CHECK(cert.poly == std::vector<long long>{-1, 0, 1});
}

TEST_CASE("find_animal resolves canonical site sets") {
  const AnimalCatalog cat = build_catalogue(enumerate_animals(2, 4));
  // an L-tromino placed away from the origin
  const std::vector<std::array<int, 3>> sites{{5, 7, 0}, {5, 8, 0}, {6, 7, 0}};
  const int id = cat.find_animal(sites);
  REQUIRE(id >= 0);
  CHECK(cat.animals()[id].n == 3);
  const std::vector<std::array<int, 3>> bogus{{0, 0, 0}, {2, 0, 0}};
  CHECK(cat.find_animal(bogus) == -1);
}

TEST_CASE("catalogue json round-trip and corruption detection") {
  const AnimalCatalog cat = build_catalogue(enumerate_animals(2, 4));
  const nlohmann::json j = cat.to_json();
  const AnimalCatalog back = AnimalCatalog::from_json(j);
  CHECK(back.n_max() == cat.n_max());
  CHECK(back.values() == cat.values());
  CHECK(back.animals().size() == cat.animals().size());

  nlohmann::json bad = j;
  bad["animals"][1]["boundary"] = 99;
  CHECK_THROWS_WITH_AS(AnimalCatalog::from_json(bad),
                       doctest::Contains("boundary"), ValidationError);

  bad = j;
  bad["eigenvalues"][0]["value"] = 7.0;  // outside [-2d, 2d]
  CHECK_THROWS_AS(AnimalCatalog::from_json(bad), ValidationError);

  bad = j;
  bad["eigenvalues"][2]["certificate"]["poly"] = {5, 1, 2};
  CHECK_THROWS_AS(AnimalCatalog::from_json(bad), ValidationError);

  bad = j;
  bad["animals"][2]["sites"][0][0] = 3;  // no longer canonical/connected
  CHECK_THROWS_AS(AnimalCatalog::from_json(bad), ValidationError);
}
