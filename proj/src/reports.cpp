#include "percospec/reports.hpp"

#include <sstream>

#include "percospec/io.hpp"

namespace percospec {

namespace {
std::string d(double v) { return fmt_double(v); }
}  // namespace

std::string ids_csv(const EmpiricalIDS& ids) {
  std::ostringstream os;
  os << "E,N_mean,N_sd,n_realizations\n";
  for (std::size_t i = 0; i < ids.grid.size(); ++i)
    os << d(ids.grid[i]) << "," << d(ids.mean[i]) << "," << d(ids.sd[i]) << ","
       << ids.n_realizations << "\n";
  return os.str();
}

std::string jumps_csv(const JumpReport& report) {
  std::ostringstream os;
  os << "location,mass,matched,matched_value,predicted,prediction_valid\n";
  for (const JumpRow& r : report.rows)
    os << d(r.location) << "," << d(r.mass) << "," << (r.matched ? 1 : 0) << ","
       << (r.matched ? d(r.matched_value) : "uncatalogued") << ","
       << d(r.predicted) << "," << (r.prediction_valid ? 1 : 0) << "\n";
  return os.str();
}

std::string wegner_csv(const WegnerResult& result) {
  std::ostringstream os;
  os << "lo,hi,lhs,lhs_se,rhs,slack,violation\n";
  for (const WegnerRow& r : result.rows)
    os << d(r.interval.lo) << "," << d(r.interval.hi) << "," << d(r.lhs) << ","
       << d(r.lhs_se) << "," << d(r.rhs) << "," << d(r.slack) << ","
       << (r.violation ? 1 : 0) << "\n";
  return os.str();
}

std::string support_csv(const SupportResult& result) {
  std::ostringstream os;
  os << "L,n_eigenvalues,n_outside,frac_outside,min_eig,max_eig,dist_min,dist_max\n";
  for (const SupportRow& r : result.rows)
    os << r.L << "," << r.n_eigenvalues << "," << r.n_outside << ","
       << d(r.frac_outside) << "," << d(r.min_eig) << "," << d(r.max_eig) << ","
       << d(r.dist_min) << "," << d(r.dist_max) << "\n";
  return os.str();
}

std::string sigma_csv(const std::vector<Interval>& sigma) {
  std::ostringstream os;
  os << "lo,hi\n";
  for (const Interval& s : sigma) os << d(s.lo) << "," << d(s.hi) << "\n";
  return os.str();
}

std::string continuity_csv(const std::vector<ContinuityRow>& rows) {
  std::ostringstream os;
  os << "L,max_multiplicity,max_jump\n";
  for (const ContinuityRow& r : rows)
    os << r.L << "," << r.max_multiplicity << "," << d(r.max_jump) << "\n";
  return os.str();
}

std::string lifshitz_csv(const LifshitzResult& result) {
  std::ostringstream os;
  os << "s,N,used\n";
  for (const LifshitzPoint& p : result.points)
    os << d(p.s) << "," << d(p.N) << "," << (p.used ? 1 : 0) << "\n";
  return os.str();
}

std::string animals_csv(const std::vector<LatticeAnimal>& animals) {
  std::ostringstream os;
  os << "id,n,boundary,sites\n";
  for (std::size_t id = 0; id < animals.size(); ++id) {
    const LatticeAnimal& a = animals[id];
    os << id << "," << a.n << "," << a.boundary_size << ",";
    for (int i = 0; i < a.n; ++i) {
      if (i) os << ";";
      for (int k = 0; k < a.d; ++k) {
        if (k) os << " ";
        os << a.sites[i][k];
      }
    }
    os << "\n";
  }
  return os.str();
}

std::string spectrum_csv(const SpectrumResult& spectrum) {
  std::ostringstream os;
  os << "index,eigenvalue\n";
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i)
    os << i << "," << d(spectrum.eigenvalues[i]) << "\n";
  return os.str();
}

std::string localization_csv(const std::vector<LocalizationRow>& rows) {
  std::ostringstream os;
  os << "eigenvalue,ipr,amp_by_dist\n";
  for (const LocalizationRow& r : rows) {
    os << d(r.eigenvalue) << "," << d(r.ipr) << ",";
    for (std::size_t k = 0; k < r.amp_by_dist.size(); ++k) {
      if (k) os << ";";
      os << d(r.amp_by_dist[k]);
    }
    os << "\n";
  }
  return os.str();
}

std::string multiplicity_csv(const std::vector<MultiplicityRealizationRow>& rows) {
  std::ostringstream os;
  os << "realization,E,observed,bound,ok\n";
  for (const MultiplicityRealizationRow& r : rows)
    os << r.realization << "," << d(r.row.E) << "," << r.row.observed << ","
       << r.row.bound << "," << (r.row.observed >= r.row.bound ? 1 : 0) << "\n";
  return os.str();
}

std::string gnuplot_script(const std::string& csv_file, const std::string& title,
                           int x_column, int y_column) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set title '" << title << "'\n"
     << "plot '" << csv_file << "' using " << x_column << ":" << y_column
     << " with steps\n";
  return os.str();
}

}  // namespace percospec
