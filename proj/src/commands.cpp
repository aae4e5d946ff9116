#include "hyperhardy/commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hyperhardy/config.hpp"
#include "hyperhardy/quad.hpp"
#include "hyperhardy/records.hpp"
#include "hyperhardy/spectral.hpp"
#include "hyperhardy/thresholds.hpp"
#include "hyperhardy/verify.hpp"

namespace hyperhardy {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

fs::path output_dir() {
  const char* env = std::getenv(kOutDirVariable);
  return (env != nullptr && *env != '\0') ? fs::path(env) : fs::path(".");
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + path.string() + "'");
  return f;
}

struct ConstantsArgs {
  int N = 0;
  double lambda = 0.0;
  double c = 1.0;
  bool json = false;
};

struct ThresholdArgs {
  std::string kind = "hardy";
  int N = 0;
  int M = 2;
  std::optional<double> lambda;
  double c = 1.0;
  std::string leading = "squared";
  bool json = false;
};

struct VerifyArgs {
  std::string config;
};

struct WeightsArgs {
  int N = 0;
  std::optional<double> lambda;
  double c = 1.0;
  std::vector<std::string> poles;
  std::string base;
  int samples = 200;
  double extent = 1.0;
  bool compare = false;
  std::string output;
};

struct SpectrumArgs {
  int N = 0;
  std::optional<double> lambda;
  double c = 1.0;
  double epsilon = 0.0;
  double radius = 10.0;
  int grid = 4096;
  bool uniform = false;
  bool json = false;
};

struct ReportArgs {
  std::string file;
};

int cmd_constants(const ConstantsArgs& a, std::ostream& out) {
  const SpectralParams p = SpectralParams::make(a.N, a.lambda, a.c);
  if (a.json) {
    out << constants_record(p) << '\n';
    return kExitOk;
  }
  const HardyConstants k = hardy_constants(p);
  out << "gamma=" << fmt(gamma(p)) << " H=" << fmt(k.H) << " C=" << fmt(k.C) << " D=" << fmt(k.D)
      << " lambda1=" << fmt(p.poincare_constant() * p.c) << '\n';
  return kExitOk;
}

int cmd_threshold(const ThresholdArgs& a, std::ostream& out) {
  ThresholdQuery q;
  q.params = SpectralParams::make(a.N, a.lambda.value_or(a.N - 2.0), a.c);
  q.M = a.M;
  q.kind = threshold_kind_from_string(a.kind);
  if (a.leading == "squared") {
    q.leading = LeadingPower::squared;
  } else if (a.leading == "linear") {
    q.leading = LeadingPower::linear;
  } else {
    throw DomainError("--leading must be 'squared' or 'linear'");
  }
  const ThresholdSolution s = solve_threshold(q);
  if (a.json) {
    out << threshold_record(q, s) << '\n';
  } else {
    out << "d_bar=" << fmt(s.d_bar) << " residual=" << fmt(s.residual) << " iterations=" << s.iterations << '\n';
  }
  return kExitOk;
}

int run_spectrum(const RadialProblem& problem, double epsilon, Expectation expect, const fs::path* report,
                 std::ostream& out) {
  const EigenResult r = bottom_eigenvalue(problem);
  const std::string record = spectrum_record(problem, epsilon, r);
  if (report != nullptr) open_output(*report) << record << '\n';
  bool ok = true;
  if (expect == Expectation::negative) ok = r.bottom_eigenvalue < 0.0;
  if (expect == Expectation::nonnegative) ok = r.bottom_eigenvalue >= -1e-6;
  out << "bottom_eigenvalue=" << fmt(r.bottom_eigenvalue) << " residual=" << fmt(r.residual)
      << " iterations=" << r.iterations << " expect=" << to_string(expect) << (ok ? " ok" : " VIOLATED") << '\n';
  return ok ? kExitOk : kExitFail;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const fs::path cfg_path(a.config);
  const RunConfig cfg = load_config(cfg_path);
  const fs::path report = output_dir() / (cfg.output.empty() ? cfg_path.stem().string() + ".jsonl" : cfg.output);
  if (cfg.mode == RunMode::spectrum) {
    const int code = run_spectrum(cfg.problem, cfg.epsilon, cfg.expect, &report, out);
    out << "report: " << report.string() << '\n';
    return code;
  }
  const FamilySummary summary = verify_family(cfg.spec, cfg.family, cfg.count, cfg.seed);
  std::stringstream records;
  for (std::size_t i = 0; i < summary.reports.size(); ++i) {
    InequalitySpec member = cfg.spec;
    member.quad.seed = cfg.spec.quad.seed + i;
    records << verify_record(member, summary.reports[i], i, to_string(cfg.family)) << '\n';
  }
  open_output(report) << records.str();
  report_table(records, out);
  out << "passed=" << summary.passed << " inconclusive=" << summary.inconclusive << " failed=" << summary.failed
      << " min_margin=" << fmt(summary.min_margin) << " min_relative_margin=" << fmt(summary.min_relative_margin)
      << " worst_member=" << summary.worst << '\n';
  out << "report: " << report.string() << '\n';
  return summary.failed == 0 ? kExitOk : kExitFail;
}

int cmd_weights(const WeightsArgs& a, std::ostream& out) {
  const SpectralParams p = SpectralParams::make(a.N, a.lambda.value_or(a.N - 2.0), a.c);
  const Point base = a.base.empty() ? Point::origin(a.N) : parse_point(a.base, a.N, a.c, Point::origin(a.N));
  std::vector<Point> poles;
  for (const std::string& s : a.poles) poles.push_back(parse_point(s, a.N, a.c, base));
  const PoleConfig cfg = PoleConfig::make(poles);
  std::ostringstream text;
  if (a.compare) {
    text << comparison_record(compare_weights(p, cfg)) << '\n';
  } else {
    const std::vector<WeightRow> rows = weight_line_scan(p, cfg, a.samples, a.extent);
    write_weight_scan(text, rows);
  }
  if (a.output.empty()) {
    out << text.str();
  } else {
    const fs::path path = output_dir() / a.output;
    open_output(path) << text.str();
  }
  return kExitOk;
}

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out) {
  const SpectralParams p = SpectralParams::make(a.N, a.lambda.value_or(a.N - 2.0), a.c);
  RadialProblem problem = RadialProblem::unipolar(p, a.radius, a.grid, a.epsilon);
  problem.graded = !a.uniform;
  if (a.json) {
    out << spectrum_record(problem, a.epsilon, bottom_eigenvalue(problem)) << '\n';
    return kExitOk;
  }
  return run_spectrum(problem, a.epsilon, Expectation::none, nullptr, out);
}

int cmd_report(const ReportArgs& a, std::ostream& out) {
  std::ifstream in(a.file);
  if (!in) throw DomainError("cannot open report file '" + a.file + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::istringstream first(text);
  report_table(first, out);
  return text.find("\"verdict\":\"fail\"") == std::string::npos ? kExitOk : kExitFail;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multipolar Hardy and Poincare-Hardy inequalities on hyperbolic space"};
  app.name(args.empty() ? "hyperhardy" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "Worker threads (results do not depend on it)")
      ->check(CLI::Range(1, 1024));

  ConstantsArgs ca;
  auto* constants = app.add_subcommand("constants", "Spectral constants gamma, H, C, D and lambda_1");
  constants->add_option("--n", ca.N, "Dimension N")->required();
  constants->add_option("--lambda", ca.lambda, "Spectral parameter")->required();
  constants->add_option("--c", ca.c, "Curvature magnitude (curvature -c)");
  constants->add_flag("--json", ca.json, "Emit a JSON record");

  ThresholdArgs ta;
  auto* threshold = app.add_subcommand("threshold", "Minimal pole half-separation");
  threshold->add_option("--kind", ta.kind, "hardy | poincare-hardy | hardy-curved | poincare-hardy-curved");
  threshold->add_option("--n", ta.N, "Dimension N")->required();
  threshold->add_option("--m", ta.M, "Number of poles");
  threshold->add_option("--lambda", ta.lambda, "Spectral parameter (default N-2)");
  threshold->add_option("--c", ta.c, "Curvature magnitude");
  threshold->add_option("--leading", ta.leading, "Power of d in the leading term: squared | linear");
  threshold->add_flag("--json", ta.json, "Emit a JSON record");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Run a configuration file");
  verify_cmd->add_option("config", va.config, "Configuration file")->required();

  WeightsArgs wa;
  auto* weights = app.add_subcommand("weights", "Tabulate the three multipolar weights along the pole line");
  weights->add_option("--n", wa.N, "Dimension N")->required();
  weights->add_option("--lambda", wa.lambda, "Spectral parameter (default N-2)");
  weights->add_option("--c", wa.c, "Curvature magnitude");
  weights->add_option("--pole", wa.poles, "Pole: 'polar r v1 .. vN' or 'raw x0 .. xN' (repeat)")
      ->required()
      ->allow_extra_args(false);
  weights->add_option("--base", wa.base, "Base point of polar pole coordinates");
  weights->add_option("--samples", wa.samples, "Number of samples")->check(CLI::PositiveNumber);
  weights->add_option("--extent", wa.extent, "Extension beyond the two poles")->check(CLI::NonNegativeNumber);
  weights->add_flag("--compare", wa.compare, "Emit near-pole coefficients and far-field values instead");
  weights->add_option("--output", wa.output, "Output file inside the output directory (default stdout)");

  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "Bottom eigenvalue of the radial unipolar problem");
  spectrum->add_option("--n", sa.N, "Dimension N")->required();
  spectrum->add_option("--lambda", sa.lambda, "Spectral parameter (default N-2)");
  spectrum->add_option("--c", sa.c, "Curvature magnitude");
  spectrum->add_option("--epsilon", sa.epsilon, "Potential scaled by 1 + epsilon");
  spectrum->add_option("--radius", sa.radius, "Ball radius");
  spectrum->add_option("--grid", sa.grid, "Number of free nodes");
  spectrum->add_flag("--uniform", sa.uniform, "Uniform instead of graded grid");
  spectrum->add_flag("--json", sa.json, "Emit a JSON record");

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Print a table of verify records");
  report->add_option("file", ra.file, "JSONL report")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("hyperhardy");
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    set_worker_threads(threads);
    if (constants->parsed()) return cmd_constants(ca, out);
    if (threshold->parsed()) return cmd_threshold(ta, out);
    if (verify_cmd->parsed()) return cmd_verify(va, out);
    if (weights->parsed()) return cmd_weights(wa, out);
    if (spectrum->parsed()) return cmd_spectrum(sa, out);
    if (report->parsed()) return cmd_report(ra, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hyperhardy
