#pragma once

#include <string>
#include <vector>

#include "percospec/experiments.hpp"

namespace percospec {

// CSV renderings of experiment results. All numbers go through fmt_double, so
// identical results give byte-identical files.

std::string ids_csv(const EmpiricalIDS& ids);
std::string jumps_csv(const JumpReport& report);
std::string wegner_csv(const WegnerResult& result);
std::string support_csv(const SupportResult& result);
std::string sigma_csv(const std::vector<Interval>& sigma);
std::string continuity_csv(const std::vector<ContinuityRow>& rows);
std::string lifshitz_csv(const LifshitzResult& result);
std::string animals_csv(const std::vector<LatticeAnimal>& animals);
std::string spectrum_csv(const SpectrumResult& spectrum);
std::string localization_csv(const std::vector<LocalizationRow>& rows);

struct MultiplicityRealizationRow {
  int realization = 0;
  MultiplicityRow row;
};
std::string multiplicity_csv(const std::vector<MultiplicityRealizationRow>& rows);

// Minimal gnuplot script plotting the named CSV columns.
std::string gnuplot_script(const std::string& csv_file, const std::string& title,
                           int x_column, int y_column);

}  // namespace percospec
