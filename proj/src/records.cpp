#include "hyperhardy/records.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hyperhardy/error.hpp"

namespace hyperhardy {

namespace {

using nlohmann::ordered_json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no infinities; they are written as strings.
ordered_json jnum(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

ordered_json estimate(const IntegralEstimate& e) {
  return {{"value", jnum(e.value)}, {"stderr", jnum(e.stderr)}, {"samples", e.samples_used}};
}

ordered_json header(const char* kind, const std::string& hash) {
  ordered_json j;
  j["schema"] = kRecordSchema;
  j["kind"] = kind;
  j["spec_hash"] = hash;
  return j;
}

std::string params_text(const SpectralParams& p) {
  return "N=" + std::to_string(p.N) + " lambda=" + num(p.lambda) + " c=" + num(p.c);
}

std::string dump(const ordered_json& j) { return j.dump(); }

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string canonical_text(const InequalitySpec& spec) {
  std::ostringstream s;
  s << "target=" << to_string(spec.target) << ' ' << params_text(spec.params);
  for (const Point& p : spec.poles) {
    s << " pole=";
    for (double x : p.coords()) s << num(x) << ',';
  }
  if (spec.alpha) {
    s << " alpha=";
    for (double a : *spec.alpha) s << num(a) << ',';
  }
  const QuadratureSpec& q = spec.quad;
  s << " radial_nodes=" << q.radial_nodes << " panels=" << q.panels << " spherical_samples=" << q.spherical_samples
    << " origin_levels=" << q.origin_levels << " seed=" << q.seed;
  return s.str();
}

std::string spec_hash(const InequalitySpec& spec) { return hex64(fnv1a(canonical_text(spec))); }

std::string constants_record(const SpectralParams& params) {
  const HardyConstants k = hardy_constants(params);
  ordered_json j = header("constants", hex64(fnv1a(params_text(params))));
  j["N"] = params.N;
  j["lambda"] = params.lambda;
  j["c"] = params.c;
  j["gamma"] = gamma(params);
  j["H"] = k.H;
  j["C"] = k.C;
  j["D"] = k.D;
  j["lambda1"] = params.poincare_constant() * params.c;
  return dump(j);
}

std::string threshold_record(const ThresholdQuery& query, const ThresholdSolution& solution) {
  const std::string text = std::string("kind=") + to_string(query.kind) + ' ' + params_text(query.params) +
                           " M=" + std::to_string(query.M) +
                           " leading=" + (query.leading == LeadingPower::squared ? "squared" : "linear");
  ordered_json j = header("threshold", hex64(fnv1a(text)));
  j["threshold_kind"] = to_string(query.kind);
  j["N"] = query.params.N;
  j["M"] = query.M;
  j["lambda"] = query.params.lambda;
  j["c"] = query.params.c;
  j["leading"] = query.leading == LeadingPower::squared ? "squared" : "linear";
  j["d_bar"] = solution.d_bar;
  j["residual"] = solution.residual;
  j["iterations"] = solution.iterations;
  return dump(j);
}

std::string verify_record(const InequalitySpec& spec, const VerificationReport& r, std::size_t member,
                          const std::string& family) {
  ordered_json j = header("verify", spec_hash(spec));
  j["target"] = to_string(r.target);
  j["family"] = family;
  j["member"] = member;
  j["N"] = r.N;
  j["lambda"] = r.lambda;
  j["c"] = r.c;
  j["M"] = r.M;
  j["d"] = r.d;
  j["seed"] = r.seed;
  j["constant"] = jnum(r.constant);
  j["dirichlet"] = estimate(r.dirichlet);
  j["mass"] = estimate(r.mass);
  j["lhs"] = estimate(r.lhs);
  j["rhs"] = estimate(r.rhs);
  j["margin"] = jnum(r.margin);
  j["combined_stderr"] = jnum(r.combined_stderr);
  j["scale"] = jnum(r.scale);
  j["relative_margin"] = jnum(r.relative_margin);
  j["verdict"] = to_string(r.verdict);
  return dump(j);
}

std::string spectrum_record(const RadialProblem& problem, double epsilon, const EigenResult& result) {
  const std::string text = params_text(problem.params) + " epsilon=" + num(epsilon) + " R=" +
                           num(problem.outer_radius) + " n=" + std::to_string(problem.grid_size) +
                           " graded=" + (problem.graded ? "1" : "0");
  ordered_json j = header("spectrum", hex64(fnv1a(text)));
  j["N"] = problem.params.N;
  j["lambda"] = problem.params.lambda;
  j["c"] = problem.params.c;
  j["epsilon"] = epsilon;
  j["radius"] = problem.outer_radius;
  j["grid"] = problem.grid_size;
  j["graded"] = problem.graded;
  j["bottom_eigenvalue"] = result.bottom_eigenvalue;
  j["residual"] = result.residual;
  j["iterations"] = result.iterations;
  return dump(j);
}

std::string comparison_record(const WeightComparison& w) {
  const std::string text = "N=" + std::to_string(w.N) + " M=" + std::to_string(w.M) + " lambda=" + num(w.lambda);
  ordered_json j = header("weights", hex64(fnv1a(text)));
  j["N"] = w.N;
  j["M"] = w.M;
  j["lambda"] = w.lambda;
  j["near_pole"] = {{"ours", w.ours},
                    {"ours_expected", w.ours_expected},
                    {"ffk", w.ffk},
                    {"ffk_expected", w.ffk_expected},
                    {"critical", w.critical},
                    {"critical_expected", w.critical_expected}};
  j["far_field"] = {{"distance", w.far_distance},
                    {"ours", w.ours_far},
                    {"ffk", w.ffk_far},
                    {"critical", w.critical_far},
                    {"critical_expected", w.critical_far_expected}};
  return dump(j);
}

std::size_t report_table(std::istream& in, std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-22s %-22s %6s %3s %3s %8s %8s %13s %13s %13s %10s  %s\n", "target", "family",
                "member", "N", "M", "lambda", "c", "lhs", "rhs", "margin", "stderr", "verdict");
  out << buf;
  std::size_t count = 0;
  std::size_t fails = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw DomainError("report line " + std::to_string(line_no) + ": not a JSON object");
    }
    if (!j.is_object() || j.value("kind", "") != "verify") continue;
    try {
      std::snprintf(buf, sizeof buf, "%-22s %-22s %6zu %3d %3d %8.4g %8.4g %13.6e %13.6e %13.6e %10.3e  %s\n",
                    j.at("target").get<std::string>().c_str(), j.at("family").get<std::string>().c_str(),
                    j.at("member").get<std::size_t>(), j.at("N").get<int>(), j.at("M").get<int>(),
                    j.at("lambda").get<double>(), j.at("c").get<double>(), j.at("lhs").at("value").get<double>(),
                    j.at("rhs").at("value").get<double>(), j.at("margin").get<double>(),
                    j.at("combined_stderr").get<double>(), j.at("verdict").get<std::string>().c_str());
    } catch (const std::exception& e) {
      throw DomainError("report line " + std::to_string(line_no) + ": " + e.what());
    }
    out << buf;
    ++count;
    if (j.at("verdict") == "fail") ++fails;
  }
  out << count << " records, " << fails << " fail\n";
  return count;
}

void write_weight_scan(std::ostream& out, std::span<const WeightRow> rows) {
  out << "s\tours\tffk\tcritical\n";
  for (const WeightRow& r : rows) {
    out << num(r.s) << '\t' << num(r.ours) << '\t' << num(r.ffk) << '\t' << num(r.critical) << '\n';
  }
}

}  // namespace hyperhardy
