#pragma once

#include <functional>

namespace percospec {

// Runs body(i) for i in [0, n). width <= 1 executes the plain serial loop
// (the reference path); larger widths use the OpenMP pool. Bodies must write
// only to per-index slots; aggregation after the loop is then independent of
// the width, which is what keeps outputs byte-identical across widths.
// Exceptions thrown by bodies are captured and rethrown after the loop joins.
void parallel_for(long long n, int width,
                  const std::function<void(long long)>& body);

// 0 -> PERCOSPEC_THREADS env var if set, else all hardware threads.
int resolve_threads(int requested);

}  // namespace percospec
