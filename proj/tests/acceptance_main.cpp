// Acceptance suite: one line per criterion, nonzero exit if any
// non-exploratory criterion fails. --fast limits the run to the oracle checks.
#include <cstring>
#include <iostream>

#include "percospec/acceptance.hpp"
#include "percospec/parallel.hpp"

int main(int argc, char** argv) {
  bool fast = false;
  int threads = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--fast") == 0) fast = true;
    if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc)
      threads = std::atoi(argv[++i]);
  }
  threads = percospec::resolve_threads(threads);

  using namespace percospec::acceptance;
  const std::vector<CheckResult> results =
      fast ? fast_checks(threads) : full_checks(threads);
  std::cout << render_report(results);
  return all_passed(results) ? 0 : 1;
}
