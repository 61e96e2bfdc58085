#include "percospec/interval.hpp"

#include <algorithm>

namespace percospec {

std::vector<Interval> merge_intervals(std::vector<Interval> xs) {
  if (xs.empty()) return xs;
  std::sort(xs.begin(), xs.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> out;
  out.push_back(xs.front());
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i].lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, xs[i].hi);
    } else {
      out.push_back(xs[i]);
    }
  }
  return out;
}

std::vector<Interval> fatten(const std::vector<Interval>& xs, double r) {
  std::vector<Interval> out;
  out.reserve(xs.size());
  for (const Interval& x : xs) out.push_back({x.lo - r, x.hi + r});
  return merge_intervals(out);
}

bool intervals_contain(const std::vector<Interval>& xs, double v) {
  for (const Interval& x : xs)
    if (v >= x.lo && v <= x.hi) return true;
  return false;
}

double intervals_min(const std::vector<Interval>& xs) {
  double m = xs.front().lo;
  for (const Interval& x : xs) m = std::min(m, x.lo);
  return m;
}

double intervals_max(const std::vector<Interval>& xs) {
  double m = xs.front().hi;
  for (const Interval& x : xs) m = std::max(m, x.hi);
  return m;
}

}  // namespace percospec
