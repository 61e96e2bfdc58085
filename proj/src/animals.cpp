#include "percospec/animals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "percospec/errors.hpp"
#include "percospec/parallel.hpp"
#include "percospec/spectral.hpp"

namespace percospec {

namespace {

using Cell = std::array<int, 3>;

// Lexicographic half-space {0} u {c : first nonzero coordinate > 0}: the
// canonical translate of every animal lives here with its minimal cell at the
// origin.
bool in_half_space(const Cell& c, int d) {
  for (int i = 0; i < d; ++i) {
    if (c[i] > 0) return true;
    if (c[i] < 0) return false;
  }
  return true;  // origin
}

int guard_n_max(int d) {
  switch (d) {
    case 1: return 32;
    case 2: return 10;
    case 3: return 8;
    default: return 0;
  }
}

struct Enumerator {
  int d, n_max, span, side;
  std::vector<char> seen;
  std::vector<Cell> current;
  std::vector<LatticeAnimal>* out;

  long long encode(const Cell& c) const {
    long long idx = 0;
    for (int i = d - 1; i >= 0; --i) idx = idx * side + (c[i] + span);
    return idx;
  }
  bool in_window(const Cell& c) const {
    for (int i = 0; i < d; ++i)
      if (c[i] < -span || c[i] > span) return false;
    return true;
  }

  void emit() {
    LatticeAnimal a;
    a.d = d;
    a.n = static_cast<int>(current.size());
    a.sites = canonical_form(current, d);
    // site boundary in Z^d (not window-clipped)
    std::set<Cell> inside(a.sites.begin(), a.sites.end());
    std::set<Cell> boundary;
    for (const Cell& s : a.sites) {
      for (int axis = 0; axis < d; ++axis) {
        for (int dir : {-1, 1}) {
          Cell nb = s;
          nb[axis] += dir;
          if (!inside.count(nb)) boundary.insert(nb);
        }
      }
    }
    a.boundary_size = static_cast<int>(boundary.size());
    for (int i = 0; i < a.n; ++i)
      for (int j = i + 1; j < a.n; ++j) {
        int dist = 0;
        for (int k = 0; k < d; ++k) dist += std::abs(a.sites[i][k] - a.sites[j][k]);
        if (dist == 1) a.edges.emplace_back(i, j);
      }
    out->push_back(std::move(a));
  }

  // Classic untried-set growth: each cell is marked when first proposed; cells
  // popped in this frame stay marked until the proposing frame unwinds, which
  // is what makes every subset appear exactly once.
  void grow(std::vector<Cell> untried) {
    while (!untried.empty()) {
      const Cell c = untried.back();
      untried.pop_back();
      current.push_back(c);
      emit();
      if (static_cast<int>(current.size()) < n_max) {
        std::vector<Cell> added;
        for (int axis = 0; axis < d; ++axis) {
          for (int dir : {-1, 1}) {
            Cell nb = c;
            nb[axis] += dir;
            if (!in_window(nb) || !in_half_space(nb, d)) continue;
            char& mark = seen[encode(nb)];
            if (mark) continue;
            mark = 1;
            added.push_back(nb);
          }
        }
        std::vector<Cell> next = untried;
        next.insert(next.end(), added.begin(), added.end());
        grow(std::move(next));
        for (const Cell& nb : added) seen[encode(nb)] = 0;
      }
      current.pop_back();
      // c stays marked for the remainder of this frame
    }
  }
};

}  // namespace

std::vector<Cell> canonical_form(std::span<const Cell> sites, int d) {
  std::vector<Cell> out(sites.begin(), sites.end());
  for (Cell& c : out)
    for (int i = d; i < 3; ++i) c[i] = 0;
  std::sort(out.begin(), out.end());
  const Cell base = out.front();
  for (Cell& c : out)
    for (int i = 0; i < 3; ++i) c[i] -= base[i];
  return out;
}

std::vector<LatticeAnimal> enumerate_animals(int d, int n_max) {
  if (d < 1 || d > 3)
    throw ResourceError("enumerate: dimension must be 1, 2 or 3");
  if (n_max < 1) throw ValidationError("enumerate: n_max must be >= 1");
  if (n_max > guard_n_max(d)) {
    std::ostringstream os;
    os << "enumerate: n_max = " << n_max << " exceeds the resource guard "
       << guard_n_max(d) << " for d = " << d;
    throw ResourceError(os.str());
  }

  std::vector<LatticeAnimal> out;
  Enumerator en;
  en.d = d;
  en.n_max = n_max;
  en.span = n_max;  // one cell of margin beyond the reachable range
  en.side = 2 * en.span + 1;
  long long cells = 1;
  for (int i = 0; i < d; ++i) cells *= en.side;
  en.seen.assign(cells, 0);
  en.out = &out;

  const Cell origin{0, 0, 0};
  en.seen[en.encode(origin)] = 1;
  en.grow({origin});

  std::sort(out.begin(), out.end(),
            [](const LatticeAnimal& a, const LatticeAnimal& b) {
              if (a.n != b.n) return a.n < b.n;
              return a.sites < b.sites;
            });
  return out;
}

SparseHamiltonian animal_adjacency(const LatticeAnimal& a) {
  std::vector<double> diag(a.n, 0.0);
  std::vector<long long> offsets(a.n + 1, 0);
  std::vector<int> cols;
  for (int i = 0; i < a.n; ++i) {
    offsets[i] = static_cast<long long>(cols.size());
    for (const auto& [u, v] : a.edges)
      if (u == i) cols.push_back(v);
  }
  offsets[a.n] = static_cast<long long>(cols.size());
  std::vector<long long> rows(a.n);
  for (int i = 0; i < a.n; ++i) rows[i] = i;
  return SparseHamiltonian(std::move(diag), std::move(offsets), std::move(cols),
                           std::move(rows), Variant::adjacency);
}

// ---------------------------------------------------------------------------
// integer polynomial helpers
// ---------------------------------------------------------------------------

double poly_eval(std::span<const long long> coeff, double x) {
  double acc = 0.0;
  for (std::size_t i = coeff.size(); i-- > 0;)
    acc = acc * x + static_cast<double>(coeff[i]);
  return acc;
}

std::vector<long long> poly_derivative(std::span<const long long> coeff) {
  if (coeff.size() <= 1) return {0};
  std::vector<long long> out(coeff.size() - 1);
  for (std::size_t i = 1; i < coeff.size(); ++i)
    out[i - 1] = coeff[i] * static_cast<long long>(i);
  return out;
}

AlgebraicCertificate bracket_root(std::vector<long long> poly, double x0) {
  std::vector<long long> q = poly;
  for (int order = 0; order + 1 < static_cast<int>(poly.size()); ++order) {
    double delta = 1e-7;
    const double qa = poly_eval(q, x0 - delta), qb = poly_eval(q, x0 + delta);
    if ((qa < 0.0) != (qb < 0.0) && qa != 0.0 && qb != 0.0) {
      double lo = x0 - delta, hi = x0 + delta;
      double flo = qa;
      for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = poly_eval(q, mid);
        if (fm == 0.0) {
          const double w = 0.25 * (hi - lo);
          lo = mid - w;
          hi = mid + w;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      AlgebraicCertificate cert;
      cert.poly = std::move(poly);
      cert.lo = lo;
      cert.hi = hi;
      cert.derivative_order = order;
      return cert;
    }
    q = poly_derivative(q);
  }
  throw NumericError("certificate: no sign-change bracket found near root");
}

// ---------------------------------------------------------------------------
// catalogue
// ---------------------------------------------------------------------------

AnimalCatalog::AnimalCatalog(int d, int n_max, double shift,
                             std::vector<LatticeAnimal> animals,
                             std::vector<CatalogEntry> entries)
    : d_(d),
      n_max_(n_max),
      shift_(shift),
      animals_(std::move(animals)),
      entries_(std::move(entries)) {
  build_index();
}

void AnimalCatalog::build_index() {
  index_.clear();
  for (std::size_t id = 0; id < animals_.size(); ++id) {
    std::vector<int> key;
    for (const auto& s : animals_[id].sites)
      key.insert(key.end(), s.begin(), s.end());
    index_.emplace(std::move(key), static_cast<int>(id));
  }
}

std::vector<double> AnimalCatalog::values() const {
  std::vector<double> v;
  v.reserve(entries_.size());
  for (const CatalogEntry& e : entries_) v.push_back(e.value);
  return v;
}

const CatalogEntry* AnimalCatalog::find(double E, double tol) const {
  const CatalogEntry* best = nullptr;
  double bestDist = tol;
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), E - tol,
      [](const CatalogEntry& e, double v) { return e.value < v; });
  for (; it != entries_.end() && it->value <= E + tol; ++it) {
    const double dist = std::abs(it->value - E);
    if (dist <= bestDist) {
      bestDist = dist;
      best = &*it;
    }
  }
  return best;
}

int AnimalCatalog::find_animal(std::span<const Cell> sites) const {
  const std::vector<Cell> canon = canonical_form(sites, d_);
  std::vector<int> key;
  for (const Cell& s : canon) key.insert(key.end(), s.begin(), s.end());
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

double AnimalCatalog::max_gap(double lo, double hi) const {
  std::vector<double> vals;
  for (const CatalogEntry& e : entries_)
    if (e.value >= lo && e.value <= hi) vals.push_back(e.value);
  if (vals.size() < 2) return hi - lo;
  double g = 0.0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    g = std::max(g, vals[i] - vals[i - 1]);
  return g;
}

AnimalCatalog build_catalogue(const std::vector<LatticeAnimal>& animals,
                              double potential_shift, int threads) {
  struct Occurrence {
    double value;  // unshifted
    int animal;
    int mult;
    AlgebraicCertificate cert;
  };
  std::vector<std::vector<Occurrence>> per_animal(animals.size());

  parallel_for(static_cast<long long>(animals.size()), threads, [&](long long id) {
    const LatticeAnimal& a = animals[id];
    SparseHamiltonian A = animal_adjacency(a);
    const std::vector<long long> poly = char_poly_exact(A);
    SpectrumResult s = eigen_sym(A, false);
    std::vector<Occurrence>& occ = per_animal[id];
    std::size_t i = 0;
    while (i < s.eigenvalues.size()) {
      std::size_t j = i + 1;
      while (j < s.eigenvalues.size() &&
             s.eigenvalues[j] - s.eigenvalues[j - 1] <= AnimalCatalog::kDedupTol)
        ++j;
      Occurrence o;
      o.value = s.eigenvalues[i + (j - i) / 2];
      o.animal = static_cast<int>(id);
      o.mult = static_cast<int>(j - i);
      o.cert = bracket_root(poly, o.value);
      o.cert.animal = o.animal;
      // floating eigenvalue must sit on the exact root to 1e-8
      if (o.value < o.cert.lo - 1e-8 || o.value > o.cert.hi + 1e-8)
        throw NumericError("catalogue: eigenvalue disagrees with char-poly root");
      o.value = 0.5 * (o.cert.lo + o.cert.hi);  // certificate-refined
      occ.push_back(std::move(o));
      i = j;
    }
  });

  std::vector<Occurrence> all;
  for (auto& v : per_animal)
    for (Occurrence& o : v) all.push_back(std::move(o));
  std::sort(all.begin(), all.end(), [](const Occurrence& a, const Occurrence& b) {
    return a.value < b.value;
  });

  std::vector<CatalogEntry> entries;
  std::size_t i = 0;
  while (i < all.size()) {
    CatalogEntry entry;
    entry.value = all[i].value;
    entry.certificate = all[i].cert;
    entry.occ.push_back({all[i].animal, all[i].mult});
    std::size_t j = i + 1;
    // merge only occurrences whose certificate brackets overlap the entry's
    while (j < all.size() &&
           all[j].value - entry.value <= AnimalCatalog::kDedupTol) {
      const bool overlap = all[j].cert.lo <= entry.certificate.hi + 1e-11 &&
                           entry.certificate.lo <= all[j].cert.hi + 1e-11;
      if (!overlap) break;
      entry.occ.push_back({all[j].animal, all[j].mult});
      // prefer the smallest animal as certificate source
      if (animals[all[j].animal].n < animals[entry.certificate.animal].n)
        entry.certificate = all[j].cert;
      ++j;
    }
    entries.push_back(std::move(entry));
    i = j;
  }
  // shift and flag uncertified near-pairs
  for (CatalogEntry& e : entries) e.value += potential_shift;
  for (std::size_t k = 0; k + 1 < entries.size(); ++k) {
    if (entries[k + 1].value - entries[k].value <= AnimalCatalog::kDedupTol) {
      entries[k].flagged_near.push_back(static_cast<int>(k + 1));
      entries[k + 1].flagged_near.push_back(static_cast<int>(k));
    }
  }

  const int d = animals.empty() ? 0 : animals.front().d;
  int n_max = 0;
  for (const LatticeAnimal& a : animals) n_max = std::max(n_max, a.n);
  return AnimalCatalog(d, n_max, potential_shift, animals, std::move(entries));
}

JumpPrediction predicted_jump(double E, double p, const AnimalCatalog& cat) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ValidationError("predicted_jump: retention p must lie in [0,1]");
  JumpPrediction out;
  out.n_max = cat.n_max();
  const CatalogEntry* e = cat.find(E);
  if (!e) return out;
  out.catalogued = true;
  double mass = 0.0;
  for (const EigenOccurrence& o : e->occ) {
    const LatticeAnimal& a = cat.animals()[o.animal];
    mass += std::pow(p, a.n) * std::pow(1.0 - p, a.boundary_size) * o.multiplicity;
  }
  out.mass = mass;
  return out;
}

AlgebraicCertificate verify_algebraic_integer(const AnimalCatalog& cat, double E) {
  const CatalogEntry* e = cat.find(E);
  if (!e)
    throw ValidationError("verify_algebraic_integer: value is not catalogued");
  if (cat.animals()[e->certificate.animal].n > 12)
    throw ResourceError("verify_algebraic_integer: certificate unavailable for n > 12");
  return e->certificate;
}

// ---------------------------------------------------------------------------
// persistence
// ---------------------------------------------------------------------------

nlohmann::json AnimalCatalog::to_json() const {
  nlohmann::json j;
  j["d"] = d_;
  j["n_max"] = n_max_;
  j["shift"] = shift_;
  j["animals"] = nlohmann::json::array();
  for (std::size_t id = 0; id < animals_.size(); ++id) {
    const LatticeAnimal& a = animals_[id];
    nlohmann::json ja;
    ja["id"] = id;
    ja["boundary"] = a.boundary_size;
    nlohmann::json sites = nlohmann::json::array();
    for (const Cell& s : a.sites) {
      nlohmann::json c = nlohmann::json::array();
      for (int i = 0; i < d_; ++i) c.push_back(s[i]);
      sites.push_back(c);
    }
    ja["sites"] = sites;
    j["animals"].push_back(ja);
  }
  j["eigenvalues"] = nlohmann::json::array();
  for (const CatalogEntry& e : entries_) {
    nlohmann::json je;
    je["value"] = e.value;
    je["certificate"] = {{"animal", e.certificate.animal},
                         {"poly", e.certificate.poly},
                         {"bracket", {e.certificate.lo, e.certificate.hi}},
                         {"derivative_order", e.certificate.derivative_order}};
    nlohmann::json occ = nlohmann::json::array();
    for (const EigenOccurrence& o : e.occ)
      occ.push_back({o.animal, o.multiplicity});
    je["occurrences"] = occ;
    if (!e.flagged_near.empty()) je["flagged_near"] = e.flagged_near;
    j["eigenvalues"].push_back(je);
  }
  return j;
}

AnimalCatalog AnimalCatalog::from_json(const nlohmann::json& j) {
  AnimalCatalog cat;
  try {
    cat.d_ = j.at("d").get<int>();
    cat.n_max_ = j.at("n_max").get<int>();
    cat.shift_ = j.at("shift").get<double>();
    if (cat.d_ < 1 || cat.d_ > 3)
      throw ValidationError("catalogue: dimension out of range");
    for (const auto& ja : j.at("animals")) {
      LatticeAnimal a;
      a.d = cat.d_;
      for (const auto& js : ja.at("sites")) {
        Cell c{0, 0, 0};
        if (static_cast<int>(js.size()) != cat.d_)
          throw ValidationError("catalogue: site arity mismatch");
        for (int i = 0; i < cat.d_; ++i) c[i] = js[i].get<int>();
        a.sites.push_back(c);
      }
      a.n = static_cast<int>(a.sites.size());
      a.boundary_size = ja.at("boundary").get<int>();
      if (a.n < 1 || a.n > cat.n_max_)
        throw ValidationError("catalogue: animal size out of range");
      // recompute derived structure and check the stored pieces
      std::vector<Cell> canon = canonical_form(a.sites, cat.d_);
      if (canon != a.sites)
        throw ValidationError("catalogue: animal sites are not canonical");
      for (int u = 0; u < a.n; ++u)
        for (int v = u + 1; v < a.n; ++v) {
          int dist = 0;
          for (int k = 0; k < cat.d_; ++k)
            dist += std::abs(a.sites[u][k] - a.sites[v][k]);
          if (dist == 1) a.edges.emplace_back(u, v);
        }
      // connectivity
      std::vector<int> comp(a.n, -1);
      std::vector<int> stack{0};
      comp[0] = 0;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (const auto& [x, y] : a.edges) {
          const int w = x == u ? y : (y == u ? x : -1);
          if (w >= 0 && comp[w] < 0) {
            comp[w] = 0;
            stack.push_back(w);
          }
        }
      }
      for (int u = 0; u < a.n; ++u)
        if (comp[u] < 0)
          throw ValidationError("catalogue: animal is not connected");
      // boundary size must match the geometry
      std::set<Cell> inside(a.sites.begin(), a.sites.end());
      std::set<Cell> boundary;
      for (const Cell& s : a.sites)
        for (int axis = 0; axis < cat.d_; ++axis)
          for (int dir : {-1, 1}) {
            Cell nb = s;
            nb[axis] += dir;
            if (!inside.count(nb)) boundary.insert(nb);
          }
      if (static_cast<int>(boundary.size()) != a.boundary_size)
        throw ValidationError("catalogue: stored boundary size is wrong");
      cat.animals_.push_back(std::move(a));
    }
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& je : j.at("eigenvalues")) {
      CatalogEntry e;
      e.value = je.at("value").get<double>();
      if (std::abs(e.value - cat.shift_) > 2.0 * cat.d_ + 1e-9)
        throw ValidationError("catalogue: eigenvalue outside [-2d, 2d] + shift");
      if (e.value < prev)
        throw ValidationError("catalogue: eigenvalues not ascending");
      prev = e.value;
      const auto& jc = je.at("certificate");
      e.certificate.animal = jc.at("animal").get<int>();
      e.certificate.poly = jc.at("poly").get<std::vector<long long>>();
      e.certificate.lo = jc.at("bracket")[0].get<double>();
      e.certificate.hi = jc.at("bracket")[1].get<double>();
      e.certificate.derivative_order = jc.at("derivative_order").get<int>();
      if (e.certificate.animal < 0 ||
          e.certificate.animal >= static_cast<int>(cat.animals_.size()))
        throw ValidationError("catalogue: certificate references a bad animal");
      if (e.certificate.poly.empty() || e.certificate.poly.back() != 1)
        throw ValidationError("catalogue: certificate polynomial is not monic");
      // the certificate must actually annihilate the (unshifted) value:
      // recompute the exact char poly of the source animal and compare
      const std::vector<long long> poly =
          char_poly_exact(animal_adjacency(cat.animals_[e.certificate.animal]));
      if (poly != e.certificate.poly)
        throw ValidationError(
            "catalogue: certificate does not match the animal's char poly");
      const double unshifted = e.value - cat.shift_;
      if (unshifted < e.certificate.lo - 1e-8 ||
          unshifted > e.certificate.hi + 1e-8)
        throw ValidationError("catalogue: value falls outside its root bracket");
      for (const auto& jo : je.at("occurrences")) {
        EigenOccurrence o{jo[0].get<int>(), jo[1].get<int>()};
        if (o.animal < 0 || o.animal >= static_cast<int>(cat.animals_.size()) ||
            o.multiplicity < 1)
          throw ValidationError("catalogue: bad occurrence entry");
        e.occ.push_back(o);
      }
      if (e.occ.empty())
        throw ValidationError("catalogue: entry with no occurrences");
      if (je.contains("flagged_near"))
        e.flagged_near = je.at("flagged_near").get<std::vector<int>>();
      cat.entries_.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("catalogue: malformed JSON: ") + ex.what());
  }
  cat.build_index();
  return cat;
}

}  // namespace percospec
