#pragma once

#include <vector>

namespace percospec {

// Closed interval [lo, hi]; lo == hi encodes an isolated point.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool is_point() const { return lo == hi; }
  double length() const { return hi - lo; }
};

// Sorts by lo and merges overlapping or touching intervals.
std::vector<Interval> merge_intervals(std::vector<Interval> xs);

// Minkowski sum with [-r, r], merged.
std::vector<Interval> fatten(const std::vector<Interval>& xs, double r);

bool intervals_contain(const std::vector<Interval>& xs, double v);

// min over xs of lo, max over xs of hi; xs must be non-empty.
double intervals_min(const std::vector<Interval>& xs);
double intervals_max(const std::vector<Interval>& xs);

}  // namespace percospec
