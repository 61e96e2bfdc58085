// Compares the serial reference path (width 1) against the OpenMP pool on the
// two realization-parallel workloads: IDS counting and eigenvalue pooling.
#include <chrono>
#include <cstdio>
#include <cstring>

#include "percospec/animals.hpp"
#include "percospec/experiments.hpp"
#include "percospec/parallel.hpp"

using namespace percospec;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

double time_ids(int threads) {
  IdsParams p{.measure = MeasureSpec::bernoulli(0.6)};
  p.d = 2;
  p.L_list = {80};
  // grid avoids exact catalogue values: counting at pinned thresholds of a
  // large kernel redoes a dense solve, which is not what this measures
  p.grid = make_grid(-4.05, 4.05, 0.1);
  p.n_realizations = 16;
  p.variant = Variant::adjacency;
  p.threads = threads;
  const auto t0 = clock_type::now();
  estimate_ids(p);
  return seconds(t0);
}

double time_jumps(int threads, const AnimalCatalog& cat) {
  JumpParams p{.measure = MeasureSpec::bernoulli(0.35)};
  p.d = 2;
  p.L = 36;
  p.n_realizations = 16;
  p.threshold = 1e-3;
  p.threads = threads;
  const auto t0 = clock_type::now();
  detect_jumps(p, cat);
  return seconds(t0);
}

double time_catalogue(int threads) {
  const auto animals = enumerate_animals(2, 8);
  const auto t0 = clock_type::now();
  build_catalogue(animals, 0.0, threads);
  return seconds(t0);
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc)
      threads = std::atoi(argv[++i]);
  threads = resolve_threads(threads);

  std::printf("kernel                01 thread   %02d threads   speedup\n", threads);
  const AnimalCatalog cat = build_catalogue(enumerate_animals(2, 8));
  struct Row {
    const char* name;
    double serial, parallel;
  };
  const Row rows[] = {
      {"ids counting", time_ids(1), time_ids(threads)},
      {"eigenvalue pooling", time_jumps(1, cat), time_jumps(threads, cat)},
      {"animal catalogue", time_catalogue(1), time_catalogue(threads)},
  };
  for (const Row& r : rows)
    std::printf("%-20s %8.3fs %10.3fs %8.2fx\n", r.name, r.serial, r.parallel,
                r.serial / r.parallel);
  return 0;
}
