#include "percospec/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "percospec/errors.hpp"

namespace percospec {

MeasureSpec::MeasureSpec(std::vector<Atom> atoms,
                         std::vector<DensityPiece> densities)
    : atoms_(std::move(atoms)), densities_(std::move(densities)) {
  validate();
  cumulative_.reserve(atoms_.size() + densities_.size());
  double acc = 0.0;
  for (const Atom& a : atoms_) cumulative_.push_back(acc += a.weight);
  for (const DensityPiece& p : densities_)
    cumulative_.push_back(acc += p.height * (p.hi - p.lo));
}

void MeasureSpec::validate() const {
  double mass = 0.0;
  for (const Atom& a : atoms_) {
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
      throw ValidationError("measure: atom weight must be >= 0 and finite");
    if (std::isnan(a.value) || a.value == -kDeleted)
      throw ValidationError("measure: atom value must be a real number or inf");
    mass += a.weight;
  }
  for (const DensityPiece& p : densities_) {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi))
      throw ValidationError("measure: density piece endpoints must be finite");
    if (!(p.lo < p.hi))
      throw ValidationError("measure: density piece requires lo < hi");
    if (!(p.height >= 0.0) || !std::isfinite(p.height))
      throw ValidationError("measure: density height must be >= 0 and finite");
    mass += p.height * (p.hi - p.lo);
  }
  // pairwise-disjoint interiors
  std::vector<DensityPiece> sorted = densities_;
  std::sort(sorted.begin(), sorted.end(),
            [](const DensityPiece& a, const DensityPiece& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].lo < sorted[i - 1].hi)
      throw ValidationError("measure: density pieces must have disjoint interiors");
  }
  if (std::abs(mass - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "measure: total mass must be 1 within 1e-12, got " << mass;
    throw ValidationError(os.str());
  }
}

MeasureSpec MeasureSpec::delta(double value) {
  return MeasureSpec({Atom{value, 1.0}}, {});
}

MeasureSpec MeasureSpec::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ValidationError("measure: bernoulli retention p must lie in [0,1]");
  // delta_0 listed first so that, under shared streams, raising p only adds
  // vertices (monotone coupling).
  return MeasureSpec({Atom{0.0, p}, Atom{kDeleted, 1.0 - p}}, {});
}

MeasureSpec MeasureSpec::uniform_density(double lo, double hi, double mass) {
  return MeasureSpec({}, {DensityPiece{lo, hi, mass / (hi - lo)}});
}

MeasureSpec MeasureSpec::percolation_example(int d) {
  const double third = 1.0 / 3.0;
  return MeasureSpec({Atom{4.0 * d, third}, Atom{kDeleted, third}},
                     {DensityPiece{0.0, 1.0, third}});
}

double MeasureSpec::sample(SiteRng& rng) const {
  const double u = rng.next_unit();
  std::size_t k = 0;
  while (k + 1 < cumulative_.size() && u >= cumulative_[k]) ++k;
  if (k < atoms_.size()) return atoms_[k].value;
  const DensityPiece& p = densities_[k - atoms_.size()];
  return p.lo + rng.next_unit() * (p.hi - p.lo);
}

std::vector<Interval> MeasureSpec::support_real() const {
  std::vector<Interval> xs;
  for (const Atom& a : atoms_)
    if (!is_deleted(a.value) && a.weight > 0.0) xs.push_back({a.value, a.value});
  for (const DensityPiece& p : densities_)
    if (p.height > 0.0) xs.push_back({p.lo, p.hi});
  return merge_intervals(std::move(xs));
}

double MeasureSpec::deletion_probability() const {
  double w = 0.0;
  for (const Atom& a : atoms_)
    if (is_deleted(a.value)) w += a.weight;
  return w;
}

bool MeasureSpec::has_finite_atoms() const {
  for (const Atom& a : atoms_)
    if (!is_deleted(a.value) && a.weight > 0.0) return true;
  return false;
}

bool MeasureSpec::is_bernoulli() const {
  for (const DensityPiece& p : densities_)
    if (p.height > 0.0) return false;
  for (const Atom& a : atoms_)
    if (!is_deleted(a.value) && a.value != 0.0 && a.weight > 0.0) return false;
  return true;
}

double MeasureSpec::density_mass(double lo, double hi) const {
  double m = 0.0;
  for (const DensityPiece& p : densities_) {
    const double l = std::max(lo, p.lo), h = std::min(hi, p.hi);
    if (l < h) m += p.height * (h - l);
  }
  return m;
}

bool MeasureSpec::has_atom_in(double lo, double hi) const {
  for (const Atom& a : atoms_)
    if (!is_deleted(a.value) && a.weight > 0.0 && a.value > lo && a.value < hi)
      return true;
  return false;
}

double MeasureSpec::density_sup(double lo, double hi) const {
  double s = 0.0;
  for (const DensityPiece& p : densities_)
    if (p.lo < hi && p.hi > lo) s = std::max(s, p.height);
  return s;
}

nlohmann::json MeasureSpec::to_json() const {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (const Atom& a : atoms_) {
    nlohmann::json ja;
    if (is_deleted(a.value))
      ja["value"] = "inf";
    else
      ja["value"] = a.value;
    ja["weight"] = a.weight;
    j["atoms"].push_back(ja);
  }
  j["densities"] = nlohmann::json::array();
  for (const DensityPiece& p : densities_)
    j["densities"].push_back({{"lo", p.lo}, {"hi", p.hi}, {"height", p.height}});
  return j;
}

MeasureSpec MeasureSpec::from_json(const nlohmann::json& j) {
  std::vector<Atom> atoms;
  std::vector<DensityPiece> densities;
  if (j.contains("atoms")) {
    for (const auto& ja : j.at("atoms")) {
      Atom a;
      const auto& v = ja.at("value");
      if (v.is_string()) {
        if (v.get<std::string>() != "inf")
          throw ValidationError("measure: atom value string must be \"inf\"");
        a.value = kDeleted;
      } else {
        a.value = v.get<double>();
      }
      a.weight = ja.at("weight").get<double>();
      atoms.push_back(a);
    }
  }
  if (j.contains("densities")) {
    for (const auto& jp : j.at("densities")) {
      densities.push_back(DensityPiece{jp.at("lo").get<double>(),
                                       jp.at("hi").get<double>(),
                                       jp.at("height").get<double>()});
    }
  }
  return MeasureSpec(std::move(atoms), std::move(densities));
}

double wegner_constant(const MeasureSpec& m, double a, double b, double delta,
                       int d) {
  if (!(delta > 0.0)) throw ValidationError("wegner: delta must be > 0");
  if (!(b > a)) throw ValidationError("wegner: requires a < b");
  if (d < 1) throw ValidationError("wegner: dimension must be >= 1");
  const double lo = a - 2.0 * d, hi = b + 2.0 * d;
  if (m.has_atom_in(lo, hi))
    throw ValidationError(
        "wegner: measure must be absolutely continuous on (a-2d, b+2d); "
        "found an atom inside the window");
  const double mass = m.density_mass(lo, hi);
  if (!(mass > 0.0))
    throw ValidationError("wegner: measure has zero mass on (a-2d, b+2d)");
  const double fsup = m.density_sup(lo, hi);
  const double width = (b - a + 4.0 * d + 1.0) / delta;
  return std::ldexp(1.0, d + 2) * width * width * fsup / mass;
}

}  // namespace percospec
