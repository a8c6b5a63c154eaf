#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "prv/datagen.hpp"
#include "prv/error.hpp"
#include "prv/inference.hpp"
#include "prv/measures.hpp"
#include "prv/report.hpp"
#include "prv/reproduce.hpp"
#include "prv/table.hpp"

namespace prv::cli {

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BoundaryCase:
      return kBoundary;
    case ErrorCode::ZeroTotal:
    case ErrorCode::EmptyColumn:
    case ErrorCode::NonPositiveMarginalVariation:
    case ErrorCode::DegenerateRow:
    case ErrorCode::InteriorRequired:
      return kDegenerate;
    default:
      return kInputError;
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PRV_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::BadParameter, std::string("PRV_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

struct FamilyOptions {
  std::string family = "power";
  double lambda = 1.0;
  double omega = 0.0;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--f", family, "Generator family")->check(CLI::IsMember({"power", "omega"}));
    cmd.add_option("--lambda", lambda, "Power-family parameter (> -1)");
    cmd.add_option("--omega", omega, "Omega-family parameter in [0, 1)");
  }
  FSpec make() const { return family == "omega" ? omega_f(omega) : power_f(lambda); }
  double param() const { return family == "omega" ? omega : lambda; }
};

struct InferenceOptions {
  double alpha = 0.05;
  std::string se_method;
  std::int64_t boot_reps = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string epsilon = "exact";

  void add_to(CLI::App& cmd) {
    cmd.add_option("--alpha", alpha, "Significance level; CI level is 1 - alpha")
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--se-method", se_method, "Standard error method")
        ->check(CLI::IsMember({"delta", "delta-numeric", "bootstrap"}));
    cmd.add_option("--boot-reps", boot_reps, "Bootstrap replicates")->check(CLI::PositiveNumber);
    cmd.add_option("--seed", seed, "RNG seed (default: $PRV_SEED or 0)");
    cmd.add_option("--workers", workers, "Worker threads for resampling")->check(CLI::PositiveNumber);
    cmd.add_option("--epsilon-form", epsilon, "Delta-method epsilon term")
        ->check(CLI::IsMember({"exact", "printed"}));
  }
  EpsilonForm epsilon_form() const {
    return epsilon == "printed" ? EpsilonForm::as_printed : EpsilonForm::exact;
  }
};

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------- compute

struct ComputeArgs {
  std::string input;
  std::string named;
  std::string measure = "geoprv";
  FamilyOptions family;
  InferenceOptions inference;
  bool header_row = false;
  bool no_header_row = false;
  bool label_col = false;
  bool no_label_col = false;
  bool drop_empty = false;
  double smooth = 0.0;
  bool json = false;
};

int cmd_compute(const ComputeArgs& a, bool seed_given, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const FSpec f = a.family.make();

  RunReport base;
  std::optional<ContingencyTable> counts;
  std::optional<ProbabilityTable> probs;
  if (!a.named.empty()) {
    base.input.named = a.named;
    if (is_dataset(a.named)) counts = dataset(a.named);
    else probs = fixed_table(a.named);
  } else {
    base.input.path = a.input.empty() ? "-" : a.input;
    std::string text;
    if (a.input.empty() || a.input == "-") {
      text = read_all(std::cin);
    } else {
      std::ifstream file(a.input, std::ios::binary);
      if (!file) throw Error(ErrorCode::InvalidTable, "cannot open '" + a.input + "'");
      text = read_all(file);
    }
    CsvOptions csv;
    if (a.header_row) csv.header_row = true;
    if (a.no_header_row) csv.header_row = false;
    if (a.label_col) csv.label_col = true;
    if (a.no_label_col) csv.label_col = false;
    counts = parse_csv(text, csv);
  }
  if (counts && a.drop_empty) counts = compact(*counts);
  if (counts) {
    probs = from_counts(*counts, a.smooth);
    base.input.n = counts->total();
    base.diagnostics.zero_cells = counts->zero_cells();
  } else {
    base.diagnostics.zero_cells = (probs->matrix().array() == 0.0).count();
  }
  base.input.rows = probs->rows();
  base.input.cols = probs->cols();

  std::vector<MeasureKind> kinds;
  if (a.measure == "both") kinds = {MeasureKind::phi_f, MeasureKind::phi_geo};
  else kinds = {measure_kind_from_string(a.measure)};

  int code = kOk;
  std::vector<RunReport> reports;
  for (const auto kind : kinds) {
    RunReport r = base;
    r.settings.measure = to_string(kind);
    r.settings.family = a.family.family;
    r.settings.param = a.family.param();
    r.settings.alpha = a.inference.alpha;
    r.settings.seed = a.inference.seed;

    const auto point = estimate(kind, *probs, f);
    r.result.value = point.value;
    const bool boundary = kind == MeasureKind::phi_geo && variation_profile(*probs, f).has_complete_row();
    r.diagnostics.boundary = boundary;

    SeMethod method = a.inference.se_method.empty()
                          ? (kind == MeasureKind::phi_geo ? SeMethod::delta_analytic : SeMethod::delta_numeric)
                          : se_method_from_string(a.inference.se_method);
    if (method == SeMethod::delta_analytic && kind == MeasureKind::phi_f) {
      r.diagnostics.warnings.push_back(
          "analytic delta method is not available for prv; using delta-numeric");
      method = SeMethod::delta_numeric;
    }
    r.settings.se_method = to_string(method);
    if (method != SeMethod::bootstrap && !seed_given) r.settings.seed = 0;

    if (boundary) {
      r.diagnostics.warnings.push_back(
          "BoundaryCase: a row has zero conditional variation (geoprv = 1); CI omitted");
      code = kBoundary;
    } else if (!counts) {
      r.diagnostics.warnings.push_back("probability table without counts; SE and CI omitted");
    } else {
      CIConfig cfg;
      cfg.alpha = a.inference.alpha;
      cfg.method = method;
      cfg.boot_reps = a.inference.boot_reps;
      cfg.seed = a.inference.seed;
      cfg.workers = a.inference.workers;
      cfg.epsilon = a.inference.epsilon_form();
      cfg.smoothing = a.smooth;
      try {
        const auto est = confidence_interval(*counts, f, kind, cfg);
        r.result.se = est.se;
        r.result.ci = est.ci;
        r.result.percentile_ci = est.percentile_ci;
        for (const auto& w : est.warnings) r.diagnostics.warnings.push_back(w);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BoundaryCase && e.code() != ErrorCode::DegenerateRow) throw;
        r.diagnostics.boundary = e.code() == ErrorCode::BoundaryCase;
        r.diagnostics.warnings.push_back(e.what());
        code = std::max(code, exit_code_for(e.code()));
      }
    }
    reports.push_back(std::move(r));
  }

  const double elapsed =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  for (auto& r : reports) r.timing_ms = elapsed;

  if (a.json) {
    if (reports.size() == 1) {
      out << to_json(reports.front()).dump(2) << '\n';
    } else {
      auto arr = nlohmann::json::array();
      for (const auto& r : reports) arr.push_back(to_json(r));
      out << arr.dump(2) << '\n';
    }
  } else {
    for (std::size_t k = 0; k < reports.size(); ++k) out << (k ? "\n" : "") << to_text(reports[k]);
  }
  for (const auto& r : reports)
    for (const auto& w : r.diagnostics.warnings) err << "warning: " << w << '\n';
  return code;
}

// -------------------------------------------------------------- reproduce

struct ReproduceArgs {
  bool all = false;
  std::vector<std::string> tables;
  std::string out_dir = "reproduce-out";
  InferenceOptions inference;
};

int cmd_reproduce(const ReproduceArgs& a, std::ostream& out) {
  ReproduceOptions options;
  options.tables = a.tables;
  if (a.all || options.tables.empty()) {
    for (const auto& t : default_reproduce_tables())
      if (std::find(options.tables.begin(), options.tables.end(), t) == options.tables.end())
        options.tables.push_back(t);
  }
  if (!a.inference.se_method.empty()) options.se_method = se_method_from_string(a.inference.se_method);
  options.epsilon = a.inference.epsilon_form();
  options.boot_reps = a.inference.boot_reps;
  options.seed = a.inference.seed;
  options.workers = a.inference.workers;

  const auto tables = reproduce(options);
  std::filesystem::create_directories(a.out_dir);
  std::size_t total = 0;
  std::size_t bad = 0;
  std::ostringstream summary;
  for (const auto& t : tables) {
    const auto path = std::filesystem::path(a.out_dir) / ("table_" + t.id + ".csv");
    std::ofstream(path) << to_csv(t);
    out << to_text(t);
    total += t.values.size();
    bad += t.mismatches();
    summary << t.id << ": " << (t.values.size() - t.mismatches()) << "/" << t.values.size()
            << " matched\n";
  }
  summary << (bad == 0 ? "all matched" : std::to_string(bad) + " of " + std::to_string(total) +
                                             " values outside tolerance")
          << '\n';
  std::ofstream(std::filesystem::path(a.out_dir) / "summary.txt") << summary.str();
  out << '\n' << summary.str();
  return bad == 0 ? kOk : kMismatch;
}

// --------------------------------------------------------------- coverage

struct CoverageArgs {
  double rho = 0.4;
  std::string named;
  std::string cuts = "q4";
  std::int64_t n = 2000;
  std::int64_t reps = 2000;
  FamilyOptions family;
  InferenceOptions inference;
  bool json = false;
};

std::vector<double> parse_cuts(const std::string& spec) {
  if (!spec.empty() && spec.front() == 'q') return quantile_cuts(std::stoi(spec.substr(1)));
  std::vector<double> cuts;
  std::stringstream in(spec);
  std::string cell;
  while (std::getline(in, cell, ',')) cuts.push_back(std::stod(cell));
  return cuts;
}

int cmd_coverage(const CoverageArgs& a, std::ostream& out) {
  const FSpec f = a.family.make();
  std::optional<ProbabilityTable> truth;
  if (!a.named.empty()) {
    truth = fixed_table(a.named);
  } else {
    const auto cuts = parse_cuts(a.cuts);
    truth = bvn_table(BvnSpec{a.rho, cuts, cuts});
  }
  CIConfig cfg;
  cfg.alpha = a.inference.alpha;
  cfg.method = a.inference.se_method.empty() ? SeMethod::delta_analytic
                                             : se_method_from_string(a.inference.se_method);
  cfg.boot_reps = a.inference.boot_reps;
  cfg.seed = a.inference.seed;
  cfg.workers = a.inference.workers;
  cfg.epsilon = a.inference.epsilon_form();
  const auto report = coverage_sim(*truth, f, a.n, a.reps, cfg);

  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  if (a.json) {
    nlohmann::json j = {
        {"settings",
         {{"family", a.family.family},
          {"param", a.family.param()},
          {"n", a.n},
          {"reps", a.reps},
          {"alpha", cfg.alpha},
          {"se_method", to_string(cfg.method)},
          {"seed", cfg.seed}}},
        {"result",
         {{"truth", report.truth},
          {"replicates", report.replicates},
          {"failures", report.failures},
          {"covered", report.covered},
          {"coverage", opt(report.coverage)},
          {"mean_estimate", opt(report.mean_estimate)},
          {"bias", opt(report.bias)},
          {"mean_se", opt(report.mean_se)},
          {"sd_estimate", opt(report.sd_estimate)}}},
    };
    out << j.dump(2) << '\n';
  } else {
    out << std::fixed << std::setprecision(4) << "truth       " << report.truth << '\n'
        << "replicates  " << report.replicates << " (" << report.failures << " failed)\n";
    if (report.coverage) {
      out << "coverage    " << *report.coverage << "  nominal " << 1.0 - cfg.alpha << '\n'
          << "bias        " << std::scientific << std::setprecision(3) << *report.bias << '\n'
          << std::fixed << std::setprecision(4) << "mean se     " << *report.mean_se << '\n';
      if (report.sd_estimate) out << "sd(est)     " << *report.sd_estimate << '\n';
    }
  }
  return kOk;
}

// -------------------------------------------------------------------- gen

struct GenArgs {
  std::optional<double> rho;
  std::string named;
  std::string cuts = "q4";
  std::int64_t sample = 0;
  std::uint64_t seed = 0;
  int precision = 17;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  if (a.named.empty() == !a.rho.has_value())
    throw Error(ErrorCode::BadParameter, "gen needs exactly one of --bvn-rho or --named");
  if (!a.named.empty() && is_dataset(a.named)) {
    if (a.sample > 0) throw Error(ErrorCode::BadParameter, "--sample applies to probability tables");
    out << to_csv(dataset(a.named));
    return kOk;
  }
  const ProbabilityTable p = a.rho ? bvn_table(BvnSpec{*a.rho, parse_cuts(a.cuts), parse_cuts(a.cuts)})
                                   : fixed_table(a.named);
  if (a.sample > 0) out << to_csv(sample_multinomial(p, a.sample, a.seed));
  else out << to_csv(p, a.precision);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"prv: proportional-reduction-in-variation association measures"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Compute a measure with SE and CI for one table");
  auto* input_opt = c->add_option("--input", compute.input, "CSV of counts ('-' for stdin)");
  c->add_option("--named", compute.named, "Built-in table or dataset")->excludes(input_opt);
  c->add_option("--measure", compute.measure, "Measure")->check(CLI::IsMember({"prv", "geoprv", "both"}));
  compute.family.add_to(*c);
  compute.inference.add_to(*c);
  c->add_flag("--header-row", compute.header_row, "First CSV row is a header");
  c->add_flag("--no-header-row", compute.no_header_row, "First CSV row is data");
  c->add_flag("--label-col", compute.label_col, "First CSV column holds row labels");
  c->add_flag("--no-label-col", compute.no_label_col, "First CSV column is data");
  c->add_flag("--drop-empty-cols", compute.drop_empty, "Remove all-zero rows and columns first");
  c->add_option("--smooth", compute.smooth, "Add this pseudo-count to every cell")
      ->check(CLI::NonNegativeNumber);
  c->add_flag("--json", compute.json, "Emit a JSON report");

  ReproduceArgs repro;
  auto* r = app.add_subcommand("reproduce", "Regenerate the published tables and diff them");
  r->add_flag("--all", repro.all, "Tables 2, 5, 6, 8 and 9");
  r->add_option("--table", repro.tables, "Table number (2, 4, 5, 6, 8, 9); repeatable");
  r->add_option("--out", repro.out_dir, "Output directory");
  repro.inference.add_to(*r);

  CoverageArgs cov;
  auto* v = app.add_subcommand("coverage", "Monte Carlo coverage of the geoprv confidence interval");
  auto* rho_opt = v->add_option("--bvn-rho", cov.rho, "Correlation of the generating bivariate normal");
  v->add_option("--named", cov.named, "Built-in probability table instead of a bvn table")->excludes(rho_opt);
  v->add_option("--cuts", cov.cuts, "qK for K equiprobable bins, or explicit cutpoints a,b,c");
  v->add_option("--n", cov.n, "Sample size per replicate")->check(CLI::PositiveNumber);
  v->add_option("--reps", cov.reps, "Replicates")->check(CLI::NonNegativeNumber);
  cov.family.add_to(*v);
  cov.inference.add_to(*v);
  v->add_flag("--json", cov.json, "Emit JSON");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Emit a generated table as CSV");
  auto* grho = g->add_option("--bvn-rho", gen.rho, "Quartile-cut bivariate normal with this correlation");
  g->add_option("--named", gen.named, "Built-in table or dataset")->excludes(grho);
  g->add_option("--cuts", gen.cuts, "qK or explicit cutpoints a,b,c");
  g->add_option("--sample", gen.sample, "Draw a multinomial sample of this size")->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "RNG seed (default: $PRV_SEED or 0)");
  g->add_option("--precision", gen.precision, "Digits for probabilities")->check(CLI::Range(1, 17));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    const auto seed = default_seed();
    compute.inference.seed = repro.inference.seed = cov.inference.seed = gen.seed = seed;
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (c->parsed()) return cmd_compute(compute, c->count("--seed") > 0 || std::getenv("PRV_SEED"), out, err);
    if (r->parsed()) return cmd_reproduce(repro, out);
    if (v->parsed()) return cmd_coverage(cov, out);
    if (g->parsed()) return cmd_gen(gen, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace prv::cli
