// percospec: numerical laboratory for random operators on site-percolation
// subgraphs of Z^d. Subcommands map onto the experiment drivers; every run
// writes CSV results plus a meta.json sidecar that reproduces the full run
// specification.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "percospec/acceptance.hpp"
#include "percospec/animals.hpp"
#include "percospec/errors.hpp"
#include "percospec/experiments.hpp"
#include "percospec/io.hpp"
#include "percospec/parallel.hpp"
#include "percospec/reports.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace percospec;

namespace {

constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// run specification: every option settable by flag or by --spec file;
// flags override the file
// ---------------------------------------------------------------------------
struct RunSpec {
  std::string command;
  int d = 2;
  long L = 0;
  std::vector<long> L_list;
  std::optional<MeasureSpec> measure;
  int n_realizations = 1;
  std::uint64_t seed = kDefaultSeed;
  std::string grid;  // lo:hi:step
  int n_max = 8;
  std::string variant = "anderson";
  std::string scope = "all";
  std::string normalization = "volume";
  std::string boundary = "free";
  int threads = 0;
  std::string out = "percospec_out";
  // command-specific
  double a = 0.0, b = 1.0, delta = 0.5;
  std::vector<std::string> intervals;
  double threshold = 1e-3;
  double epsilon = 0.1;
  std::vector<double> offsets;
  double shift = 0.0;
  double bulk_cap = 0.05;
  long realization = 0;
  double e_lo = 0.0, e_hi = 0.0;
  bool ipr = false;
  bool dump_matrix = false;
  bool dump_config = false;
  bool omit_deleted = false;
  bool grid_mode = false;
  bool gnuplot = false;
  std::string suite = "fast";
  std::string catalogue_file;

  json to_json() const {
    json j;
    j["command"] = command;
    j["d"] = d;
    if (L > 0) j["L"] = L;
    if (!L_list.empty()) j["L_list"] = L_list;
    if (measure) j["measure"] = measure->to_json();
    j["n_realizations"] = n_realizations;
    j["seed"] = seed;
    if (!grid.empty()) j["grid"] = grid;
    j["n_max"] = n_max;
    j["variant"] = variant;
    j["cluster_scope"] = scope;
    j["normalization"] = normalization;
    j["boundary"] = boundary;
    j["threads"] = threads;
    j["out"] = out;
    j["a"] = a;
    j["b"] = b;
    j["delta"] = delta;
    if (!intervals.empty()) j["intervals"] = intervals;
    j["threshold"] = threshold;
    j["epsilon"] = epsilon;
    if (!offsets.empty()) j["offsets"] = offsets;
    j["shift"] = shift;
    j["bulk_cap"] = bulk_cap;
    j["realization"] = realization;
    if (ipr) {
      j["e_lo"] = e_lo;
      j["e_hi"] = e_hi;
      j["ipr"] = true;
    }
    if (dump_matrix) j["dump_matrix"] = true;
    if (dump_config) {
      j["dump_config"] = true;
      j["omit_deleted"] = omit_deleted;
    }
    if (grid_mode) j["grid_mode"] = true;
    j["gnuplot"] = gnuplot;
    if (command == "verify") j["suite"] = suite;
    if (!catalogue_file.empty()) j["catalogue"] = catalogue_file;
    j["version"] = kVersion;
    return j;
  }
};

std::vector<double> parse_grid(const std::string& s) {
  double lo, hi, step;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
    throw ValidationError("grid: expected lo:hi:step, got \"" + s + "\"");
  return make_grid(lo, hi, step);
}

std::vector<Interval> parse_intervals(const std::vector<std::string>& tokens) {
  std::vector<Interval> out;
  for (const std::string& t : tokens) {
    double lo, hi;
    if (std::sscanf(t.c_str(), "%lf:%lf", &lo, &hi) != 2)
      throw ValidationError("intervals: expected lo:hi, got \"" + t + "\"");
    out.push_back({lo, hi});
  }
  return out;
}

MeasureSpec require_measure(const RunSpec& spec) {
  if (!spec.measure)
    throw ValidationError(
        "measure: required (use --p, --measure <file.json>, --measure-json or "
        "a --spec file)");
  return *spec.measure;
}

std::vector<long> resolve_L_list(const RunSpec& spec) {
  std::vector<long> out = spec.L_list;
  if (out.empty() && spec.L > 0) out.push_back(spec.L);
  if (out.empty()) throw ValidationError("L: required (--L or --L-list)");
  for (long L : out)
    if (L % 2 != 0)
      std::cerr << "warning: L = " << L
                << " is odd; the box definition expects even L (testing "
                   "override)\n";
  return out;
}

long resolve_single_L(const RunSpec& spec) {
  const std::vector<long> all = resolve_L_list(spec);
  if (all.size() != 1)
    throw ValidationError("L: this command takes a single box size");
  return all.front();
}

AnimalCatalog resolve_catalogue(const RunSpec& spec, int threads) {
  if (!spec.catalogue_file.empty()) {
    std::ifstream is(spec.catalogue_file);
    if (!is)
      throw ValidationError("catalogue: cannot open " + spec.catalogue_file);
    json j;
    is >> j;
    return AnimalCatalog::from_json(j);
  }
  return build_catalogue(enumerate_animals(spec.d, spec.n_max), spec.shift,
                         threads);
}

void write_sidecar(const RunSpec& spec) {
  write_json_file(fs::path(spec.out) / "meta.json", spec.to_json());
}

void maybe_gnuplot(const RunSpec& spec, const std::string& csv,
                   const std::string& title, int xc, int yc) {
  if (!spec.gnuplot) return;
  const fs::path p = fs::path(spec.out) / (title + ".gp");
  write_text_file(p, gnuplot_script(csv, title, xc, yc));
}

// ---------------------------------------------------------------------------
// command drivers
// ---------------------------------------------------------------------------

int run_animals(const RunSpec& spec) {
  const auto animals = enumerate_animals(spec.d, spec.n_max);
  write_text_file(fs::path(spec.out) / "animals.csv", animals_csv(animals));
  write_sidecar(spec);
  std::cout << animals.size() << " animals (d=" << spec.d
            << ", n_max=" << spec.n_max << ") -> " << spec.out
            << "/animals.csv\n";
  return 0;
}

int run_catalogue(const RunSpec& spec, int threads) {
  const auto animals = enumerate_animals(spec.d, spec.n_max);
  const AnimalCatalog cat = build_catalogue(animals, spec.shift, threads);
  write_json_file(fs::path(spec.out) / "catalogue.json", cat.to_json());
  write_text_file(fs::path(spec.out) / "animals.csv", animals_csv(animals));
  write_sidecar(spec);
  std::cout << "catalogued " << cat.entries().size() << " eigenvalues from "
            << animals.size() << " animals -> " << spec.out
            << "/catalogue.json\n";
  return 0;
}

int run_ids(const RunSpec& spec, int threads) {
  IdsParams p{.measure = require_measure(spec)};
  p.d = spec.d;
  p.L_list = resolve_L_list(spec);
  p.grid = parse_grid(spec.grid.empty() ? "-4:4:0.1" : spec.grid);
  p.n_realizations = spec.n_realizations;
  p.seed = spec.seed;
  p.variant = variant_from_string(spec.variant);
  p.scope = scope_from_string(spec.scope);
  p.norm = normalization_from_string(spec.normalization);
  p.boundary = boundary_from_string(spec.boundary);
  p.threads = threads;
  const auto curves = estimate_ids(p);
  for (const EmpiricalIDS& ids : curves) {
    const std::string name = "ids_L" + std::to_string(ids.L) + ".csv";
    write_text_file(fs::path(spec.out) / name, ids_csv(ids));
    maybe_gnuplot(spec, name, "ids_L" + std::to_string(ids.L), 1, 2);
    std::cout << spec.out << "/" << name << "\n";
  }
  write_sidecar(spec);
  return 0;
}

int run_jumps(const RunSpec& spec, int threads) {
  const AnimalCatalog cat = resolve_catalogue(spec, threads);
  JumpReport report;
  if (spec.grid_mode) {
    // IDS-grid differencing; the exact-eigenvalue mode below is preferred
    IdsParams ip{.measure = require_measure(spec)};
    ip.d = spec.d;
    ip.L_list = {resolve_single_L(spec)};
    ip.grid = parse_grid(spec.grid.empty() ? "-4:4:0.1" : spec.grid);
    ip.n_realizations = spec.n_realizations;
    ip.seed = spec.seed;
    ip.variant = variant_from_string(spec.variant);
    ip.scope = scope_from_string(spec.scope);
    ip.norm = normalization_from_string(spec.normalization);
    ip.boundary = boundary_from_string(spec.boundary);
    ip.threads = threads;
    const EmpiricalIDS ids = estimate_ids(ip).front();
    report = detect_jumps_from_ids(ids, cat, ip.measure, spec.threshold);
  } else {
    JumpParams p{.measure = require_measure(spec)};
    p.d = spec.d;
    p.L = resolve_single_L(spec);
    p.n_realizations = spec.n_realizations;
    p.seed = spec.seed;
    p.variant = variant_from_string(spec.variant);
    p.scope = scope_from_string(spec.scope);
    p.norm = normalization_from_string(spec.normalization);
    p.threshold = spec.threshold;
    p.boundary = boundary_from_string(spec.boundary);
    p.threads = threads;
    report = detect_jumps(p, cat);
  }
  write_text_file(fs::path(spec.out) / "jumps.csv", jumps_csv(report));
  maybe_gnuplot(spec, "jumps.csv", "jumps", 1, 2);
  write_sidecar(spec);
  std::cout << report.rows.size() << " jumps above "
            << fmt_double(spec.threshold) << " (" << report.uncatalogued
            << " uncatalogued) -> " << spec.out << "/jumps.csv\n";
  return 0;
}

int run_wegner(const RunSpec& spec, int threads) {
  WegnerParams p{.measure = require_measure(spec)};
  p.d = spec.d;
  p.L = resolve_single_L(spec);
  p.a = spec.a;
  p.b = spec.b;
  p.delta = spec.delta;
  p.intervals = parse_intervals(spec.intervals);
  p.n_realizations = spec.n_realizations;
  p.seed = spec.seed;
  p.boundary = boundary_from_string(spec.boundary);
  p.threads = threads;
  const WegnerResult result = wegner_experiment(p);
  write_text_file(fs::path(spec.out) / "wegner.csv", wegner_csv(result));
  maybe_gnuplot(spec, "wegner.csv", "wegner", 1, 6);
  write_sidecar(spec);
  double worst = 0.0;
  bool violated = false;
  for (const WegnerRow& r : result.rows) {
    worst = std::max(worst, r.slack);
    violated = violated || r.violation;
  }
  std::cout << "C = " << fmt_double(result.constant)
            << ", worst slack = " << fmt_double(worst)
            << (violated ? " (VIOLATION)" : "") << " -> " << spec.out
            << "/wegner.csv\n";
  return 0;
}

int run_support(const RunSpec& spec, int threads) {
  SupportParams p{.measure = require_measure(spec)};
  p.d = spec.d;
  p.L_list = resolve_L_list(spec);
  p.n_realizations = spec.n_realizations;
  p.seed = spec.seed;
  p.epsilon = spec.epsilon;
  p.boundary = boundary_from_string(spec.boundary);
  p.threads = threads;
  const SupportResult result = support_check(p);
  write_text_file(fs::path(spec.out) / "support.csv", support_csv(result));
  write_text_file(fs::path(spec.out) / "sigma.csv", sigma_csv(result.sigma));
  maybe_gnuplot(spec, "support.csv", "support", 1, 4);
  write_sidecar(spec);
  std::cout << "predicted support has " << result.sigma.size()
            << " component(s) -> " << spec.out << "/support.csv\n";
  return 0;
}

int run_continuity(const RunSpec& spec, int threads) {
  ContinuityParams p{.measure = require_measure(spec)};
  p.d = spec.d;
  p.L_list = resolve_L_list(spec);
  p.n_realizations = spec.n_realizations;
  p.seed = spec.seed;
  p.boundary = boundary_from_string(spec.boundary);
  p.threads = threads;
  const auto rows = continuity_check(p);
  write_text_file(fs::path(spec.out) / "continuity.csv", continuity_csv(rows));
  maybe_gnuplot(spec, "continuity.csv", "continuity", 1, 3);
  write_sidecar(spec);
  std::cout << "max empirical jump per L -> " << spec.out << "/continuity.csv\n";
  return 0;
}

int run_lifshitz(const RunSpec& spec, int threads) {
  LifshitzParams p{.measure = require_measure(spec)};
  p.d = spec.d;
  p.L = resolve_single_L(spec);
  p.offsets = spec.offsets;
  p.n_realizations = spec.n_realizations;
  p.seed = spec.seed;
  p.bulk_cap = spec.bulk_cap;
  p.norm = normalization_from_string(spec.normalization);
  p.boundary = boundary_from_string(spec.boundary);
  p.threads = threads;
  const LifshitzResult result = lifshitz_probe(p);
  write_text_file(fs::path(spec.out) / "lifshitz.csv", lifshitz_csv(result));
  maybe_gnuplot(spec, "lifshitz.csv", "lifshitz", 1, 2);
  json extra = spec.to_json();
  extra["kappa"] = result.kappa;
  extra["fit_residual"] = result.fit_residual;
  extra["lifshitz_like"] = result.lifshitz_like;
  write_json_file(fs::path(spec.out) / "meta.json", extra);
  std::cout << "kappa = " << fmt_double(result.kappa) << " ("
            << (result.lifshitz_like ? "lifshitz-like" : "non-lifshitz")
            << ", " << result.n_used << " offsets used) -> " << spec.out
            << "/lifshitz.csv\n";
  return 0;
}

int run_spectrum(const RunSpec& spec, int /*threads*/) {
  const Box box(spec.d, resolve_single_L(spec),
                boundary_from_string(spec.boundary));
  const PercolationConfig cfg =
      generate_config(box, require_measure(spec), spec.seed, spec.realization);
  const SparseHamiltonian H = assemble_scoped(
      cfg, variant_from_string(spec.variant), scope_from_string(spec.scope));
  const SpectrumResult s = eigen_sym(H, false);
  write_text_file(fs::path(spec.out) / "spectrum.csv", spectrum_csv(s));
  if (spec.ipr) {
    const auto rows = localization_profile(H, box, spec.e_lo, spec.e_hi);
    write_text_file(fs::path(spec.out) / "localization.csv",
                    localization_csv(rows));
  }
  if (spec.dump_matrix) {
    auto os = open_output(fs::path(spec.out) / "matrix.txt");
    H.export_coordinate(os);
  }
  if (spec.dump_config) {
    const ClusterLabeling labeling = label_clusters(cfg);
    auto os = open_output(fs::path(spec.out) / "config.csv");
    dump_config_csv(os, cfg, &labeling, spec.omit_deleted);
  }
  write_sidecar(spec);
  std::cout << s.eigenvalues.size() << " eigenvalues -> " << spec.out
            << "/spectrum.csv\n";
  return 0;
}

int run_multiplicity(const RunSpec& spec, int threads) {
  const AnimalCatalog cat = resolve_catalogue(spec, threads);
  const MeasureSpec m = require_measure(spec);
  const Box box(spec.d, resolve_single_L(spec),
                boundary_from_string(spec.boundary));
  std::vector<std::vector<MultiplicityRow>> slots(spec.n_realizations);
  parallel_for(spec.n_realizations, threads, [&](long long r) {
    const PercolationConfig cfg = generate_config(box, m, spec.seed, r);
    const ClusterLabeling labeling = label_clusters(cfg);
    slots[r] = multiplicity_check_all(cfg, labeling, cat);
  });
  std::vector<MultiplicityRealizationRow> rows;
  long long violations = 0;
  for (int r = 0; r < spec.n_realizations; ++r)
    for (const MultiplicityRow& row : slots[r]) {
      rows.push_back({r, row});
      violations += row.observed < row.bound;
    }
  write_text_file(fs::path(spec.out) / "multiplicity.csv",
                  multiplicity_csv(rows));
  write_sidecar(spec);
  std::cout << violations << " violations over " << spec.n_realizations
            << " realizations x " << cat.entries().size() << " energies -> "
            << spec.out << "/multiplicity.csv\n";
  return 0;
}

int run_verify(const RunSpec& spec, int threads) {
  using namespace percospec::acceptance;
  if (spec.suite != "fast" && spec.suite != "full")
    throw ValidationError("suite: must be fast or full");
  std::vector<CheckResult> results = spec.suite == "fast"
                                         ? fast_checks(threads)
                                         : full_checks(threads);
  if (!spec.catalogue_file.empty())
    results.push_back(catalogue_file_check(spec.catalogue_file));
  const std::string report = render_report(results);
  write_text_file(fs::path(spec.out) / "report.txt", report);
  write_sidecar(spec);
  std::cout << report;
  return all_passed(results) ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "percospec: spectra, integrated density of states, and eigenvalue "
      "statistics of random operators on site-percolation subgraphs of Z^d"};
  app.require_subcommand(1);

  RunSpec spec;
  std::string spec_file, measure_file, measure_inline;
  double bernoulli_p = -1.0;

  auto add_common = [&](CLI::App* cmd, bool needs_measure) {
    cmd->add_option("--spec", spec_file, "run specification JSON; flags override");
    cmd->add_option("--d", spec.d, "lattice dimension");
    cmd->add_option("--L", spec.L, "box side parameter (even)");
    cmd->add_option("--L-list", spec.L_list, "several box sizes");
    cmd->add_option("--n-realizations", spec.n_realizations,
                    "independent realizations");
    cmd->add_option("--seed", spec.seed, "base seed (default 1729, never time)");
    cmd->add_option("--threads", spec.threads,
                    "worker pool width (0: PERCOSPEC_THREADS or hardware)");
    cmd->add_option("--out", spec.out, "output directory");
    cmd->add_option("--boundary", spec.boundary, "free|periodic");
    if (needs_measure) {
      cmd->add_option("--p", bernoulli_p,
                      "Bernoulli retention shorthand: p delta_0 + (1-p) delta_inf");
      cmd->add_option("--measure", measure_file, "measure JSON file");
      cmd->add_option("--measure-json", measure_inline, "inline measure JSON");
    }
    return cmd;
  };

  CLI::App* animals = add_common(app.add_subcommand("animals",
      "enumerate lattice animals up to translation"), false);
  animals->add_option("--n-max", spec.n_max, "max animal size");

  CLI::App* catalogue = add_common(app.add_subcommand("catalogue",
      "exact animal spectra with integer certificates"), false);
  catalogue->add_option("--n-max", spec.n_max, "max animal size");
  catalogue->add_option("--shift", spec.shift, "constant potential shift");

  CLI::App* ids = add_common(app.add_subcommand("ids",
      "Monte Carlo integrated density of states"), true);
  ids->add_option("--grid", spec.grid, "energy grid lo:hi:step");
  ids->add_option("--variant", spec.variant,
                  "anderson|adjacency|neumann_like|dirichlet_like");
  ids->add_option("--cluster-scope", spec.scope, "all|largest|spanning");
  ids->add_option("--normalization", spec.normalization, "volume|per_site");
  ids->add_flag("--gnuplot", spec.gnuplot, "emit a gnuplot script");

  CLI::App* jumps = add_common(app.add_subcommand("jumps",
      "locate IDS atoms by exact-eigenvalue clustering"), true);
  jumps->add_option("--n-max", spec.n_max, "catalogue truncation");
  jumps->add_option("--threshold", spec.threshold, "minimal reported mass");
  jumps->add_option("--variant", spec.variant, "operator variant");
  jumps->add_option("--cluster-scope", spec.scope, "all|largest|spanning");
  jumps->add_option("--normalization", spec.normalization, "volume|per_site");
  jumps->add_option("--catalogue", spec.catalogue_file,
                    "load a persisted catalogue instead of rebuilding");
  jumps->add_option("--shift", spec.shift, "catalogue shift");
  jumps->add_flag("--grid-mode", spec.grid_mode,
                  "difference an IDS grid instead of clustering eigenvalues");
  jumps->add_option("--grid", spec.grid, "energy grid lo:hi:step (grid mode)");
  jumps->add_flag("--gnuplot", spec.gnuplot, "emit a gnuplot script");

  CLI::App* wegner = add_common(app.add_subcommand("wegner",
      "eigenvalue-count bound experiment"), true);
  wegner->add_option("--a", spec.a, "window parameter a");
  wegner->add_option("--b", spec.b, "window parameter b");
  wegner->add_option("--delta", spec.delta, "interval margin delta");
  wegner->add_option("--intervals", spec.intervals,
                     "test intervals lo:hi [lo:hi ...]");

  CLI::App* support = add_common(app.add_subcommand("support",
      "empirical spectrum against the predicted support"), true);
  support->add_option("--epsilon", spec.epsilon, "support fattening");
  support->add_flag("--gnuplot", spec.gnuplot, "emit a gnuplot script");

  add_common(app.add_subcommand("continuity",
      "largest empirical IDS jump per box size"), true);

  CLI::App* lifshitz = add_common(app.add_subcommand("lifshitz",
      "spectral-edge tail exponent fit"), true);
  lifshitz->add_option("--offsets", spec.offsets, "energy offsets above -2d");
  lifshitz->add_option("--bulk-cap", spec.bulk_cap, "window guard on N");
  lifshitz->add_option("--normalization", spec.normalization, "volume|per_site");

  CLI::App* spectrum = add_common(app.add_subcommand("spectrum",
      "eigenvalues of one realization"), true);
  spectrum->add_option("--realization", spec.realization, "realization index");
  spectrum->add_option("--variant", spec.variant, "operator variant");
  spectrum->add_option("--cluster-scope", spec.scope, "all|largest|spanning");
  spectrum->add_flag("--ipr", spec.ipr, "localization profile for a window");
  spectrum->add_option("--e-lo", spec.e_lo, "window lower edge (with --ipr)");
  spectrum->add_option("--e-hi", spec.e_hi, "window upper edge (with --ipr)");
  spectrum->add_flag("--dump-matrix", spec.dump_matrix,
                     "write the operator in coordinate format");
  spectrum->add_flag("--dump-config", spec.dump_config,
                     "write the sampled configuration as CSV");
  spectrum->add_flag("--omit-deleted", spec.omit_deleted,
                     "skip deleted sites in the configuration dump");

  CLI::App* multiplicity = add_common(app.add_subcommand("multiplicity",
      "finitely-supported-eigenfunction lower bound per realization"), true);
  multiplicity->add_option("--n-max", spec.n_max, "catalogue truncation");
  multiplicity->add_option("--catalogue", spec.catalogue_file,
                           "load a persisted catalogue");
  multiplicity->add_option("--shift", spec.shift, "catalogue shift");

  CLI::App* verify = add_common(app.add_subcommand("verify",
      "run the built-in verification suites"), false);
  verify->add_option("--suite", spec.suite, "fast|full");
  verify->add_option("--catalogue", spec.catalogue_file,
                     "also check a persisted catalogue file");

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();
  spec.command = sub->get_name();

  try {
    // file first, then flags override
    if (!spec_file.empty()) {
      std::ifstream is(spec_file);
      if (!is) throw ValidationError("spec: cannot open " + spec_file);
      json j;
      is >> j;
      RunSpec from_file = spec;
      if (j.contains("d") && !sub->count("--d")) from_file.d = j["d"];
      if (j.contains("L") && !sub->count("--L")) from_file.L = j["L"];
      if (j.contains("L_list") && !sub->count("--L-list"))
        from_file.L_list = j["L_list"].get<std::vector<long>>();
      if (j.contains("measure")) from_file.measure = MeasureSpec::from_json(j["measure"]);
      if (j.contains("n_realizations") && !sub->count("--n-realizations"))
        from_file.n_realizations = j["n_realizations"];
      if (j.contains("seed") && !sub->count("--seed")) from_file.seed = j["seed"];
      if (j.contains("grid") && !sub->count("--grid"))
        from_file.grid = j["grid"].get<std::string>();
      if (j.contains("n_max") && !sub->count("--n-max")) from_file.n_max = j["n_max"];
      if (j.contains("variant") && !sub->count("--variant"))
        from_file.variant = j["variant"].get<std::string>();
      if (j.contains("cluster_scope") && !sub->count("--cluster-scope"))
        from_file.scope = j["cluster_scope"].get<std::string>();
      if (j.contains("normalization") && !sub->count("--normalization"))
        from_file.normalization = j["normalization"].get<std::string>();
      if (j.contains("boundary") && !sub->count("--boundary"))
        from_file.boundary = j["boundary"].get<std::string>();
      if (j.contains("threads") && !sub->count("--threads"))
        from_file.threads = j["threads"];
      if (j.contains("out") && !sub->count("--out"))
        from_file.out = j["out"].get<std::string>();
      if (j.contains("a") && !sub->count("--a")) from_file.a = j["a"];
      if (j.contains("b") && !sub->count("--b")) from_file.b = j["b"];
      if (j.contains("delta") && !sub->count("--delta")) from_file.delta = j["delta"];
      if (j.contains("intervals") && !sub->count("--intervals"))
        from_file.intervals = j["intervals"].get<std::vector<std::string>>();
      if (j.contains("threshold") && !sub->count("--threshold"))
        from_file.threshold = j["threshold"];
      if (j.contains("epsilon") && !sub->count("--epsilon"))
        from_file.epsilon = j["epsilon"];
      if (j.contains("offsets") && !sub->count("--offsets"))
        from_file.offsets = j["offsets"].get<std::vector<double>>();
      if (j.contains("shift") && !sub->count("--shift")) from_file.shift = j["shift"];
      spec = from_file;
    }
    // measure precedence: --p > --measure-json > --measure > spec file
    if (bernoulli_p >= 0.0)
      spec.measure = MeasureSpec::bernoulli(bernoulli_p);
    else if (!measure_inline.empty())
      spec.measure = MeasureSpec::from_json(json::parse(measure_inline));
    else if (!measure_file.empty()) {
      std::ifstream is(measure_file);
      if (!is) throw ValidationError("measure: cannot open " + measure_file);
      json j;
      is >> j;
      spec.measure = MeasureSpec::from_json(j);
    }

    const int threads = resolve_threads(spec.threads);
    if (spec.command == "animals") return run_animals(spec);
    if (spec.command == "catalogue") return run_catalogue(spec, threads);
    if (spec.command == "ids") return run_ids(spec, threads);
    if (spec.command == "jumps") return run_jumps(spec, threads);
    if (spec.command == "wegner") return run_wegner(spec, threads);
    if (spec.command == "support") return run_support(spec, threads);
    if (spec.command == "continuity") return run_continuity(spec, threads);
    if (spec.command == "lifshitz") return run_lifshitz(spec, threads);
    if (spec.command == "spectrum") return run_spectrum(spec, threads);
    if (spec.command == "multiplicity") return run_multiplicity(spec, threads);
    if (spec.command == "verify") return run_verify(spec, threads);
    throw ValidationError("unknown command " + spec.command);
  } catch (const ValidationError& ex) {
    std::cerr << json{{"error", {{"kind", "validation"}, {"message", ex.what()}}}}
                     .dump()
              << "\n";
    return 1;
  } catch (const nlohmann::json::exception& ex) {
    std::cerr << json{{"error", {{"kind", "validation"}, {"message", ex.what()}}}}
                     .dump()
              << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << json{{"error", {{"kind", "runtime"}, {"message", ex.what()}}}}
                     .dump()
              << "\n";
    return 2;
  }
}
