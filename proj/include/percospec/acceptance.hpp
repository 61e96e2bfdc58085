#pragma once

#include <string>
#include <vector>

namespace percospec::acceptance {

struct CheckResult {
  std::string name;
  bool pass = false;
  bool exploratory = false;  // failure triggers investigation, not rejection
  std::string detail;        // deterministic: observed values and tolerances
};

// --- independent oracles (deliberately separate from the implementation
//     paths they validate) ---

// Naive enumeration: all n-subsets of a fixed window whose minimal cell is the
// origin, connectivity by BFS.
long long brute_force_animal_count(int d, int n);

// Full-lattice d=1 integrated density of states, 1 - arccos(E/2)/pi on [-2,2].
double analytic_ids_1d(double E);

// --- criteria ---
CheckResult check_animal_enumeration();            //  1
CheckResult check_catalogue_exactness();           //  2
CheckResult check_ids_oracle(int threads);         //  3
CheckResult check_jumps_subcritical(int threads);  //  4
CheckResult check_jumps_largest(int threads);      //  5
CheckResult check_wegner_bound(int threads);       //  6
CheckResult check_spectrum_support(int threads);   //  7
CheckResult check_ids_continuity(int threads);     //  8
CheckResult check_multiplicity_bound(int threads); //  9
CheckResult check_linalg_invariants(int threads);  // 10
CheckResult check_lifshitz(int threads);           // 11 (exploratory)
CheckResult check_reproducibility();               // 12

// Integrity of a persisted catalogue file.
CheckResult catalogue_file_check(const std::string& path);

// fast: oracle/exactness checks, minutes. full: every criterion.
std::vector<CheckResult> fast_checks(int threads);
std::vector<CheckResult> full_checks(int threads);

std::string render_report(const std::vector<CheckResult>& results);
bool all_passed(const std::vector<CheckResult>& results);  // exploratory excluded

}  // namespace percospec::acceptance
