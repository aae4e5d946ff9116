#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "hyperhardy/commands.hpp"
#include "hyperhardy/config.hpp"

using namespace hyperhardy;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hyperhardy");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("hyperhardy_test_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    ::setenv(kOutDirVariable, d.c_str(), 1);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

double field(const std::string& text, const std::string& key) {
  const auto at = text.find(key + "=");
  REQUIRE(at != std::string::npos);
  return std::stod(text.substr(at + key.size() + 1));
}

}  // namespace

TEST_CASE("constants") {
  scratch();
  Run r = cli({"constants", "--n", "5", "--lambda", "3"});
  CHECK(r.code == kExitOk);
  CHECK(field(r.out, "H") == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(field(r.out, "C") == 0.0);
  CHECK(field(r.out, "D") == doctest::Approx(3.0).epsilon(1e-15));
  r = cli({"constants", "--n", "5", "--lambda", "4"});
  CHECK(r.code == kExitOk);
  CHECK(field(r.out, "H") == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(field(r.out, "C") == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(field(r.out, "D") == 0.0);
  CHECK(field(r.out, "lambda1") == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(cli({"constants", "--n", "3", "--lambda", "0.5"}).code == kExitUsage);
  r = cli({"constants", "--n", "4", "--lambda", "2", "--json"});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("H").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("threshold") {
  scratch();
  Run r = cli({"threshold", "--kind", "hardy", "--n", "3", "--m", "2"});
  CHECK(r.code == kExitOk);
  CHECK(field(r.out, "d_bar") == doctest::Approx(3.25877).epsilon(1e-5));
  CHECK(field(r.out, "residual") <= 1e-10);
  r = cli({"threshold", "--kind", "poincare-hardy", "--n", "4", "--m", "2", "--lambda", "2.24"});
  CHECK(r.code == kExitOk);
  CHECK(field(r.out, "d_bar") > 0.0);
  CHECK(cli({"threshold", "--kind", "poincare-hardy", "--n", "4", "--m", "2", "--lambda", "2.25"}).code == kExitUsage);
  CHECK(cli({"threshold", "--kind", "bogus", "--n", "4"}).code == kExitUsage);
}

TEST_CASE("usage errors") {
  scratch();
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"constants", "--n", "x", "--lambda", "1"}).code == kExitUsage);
  CHECK(cli({"verify", (scratch() / "missing.cfg").string()}).code == kExitUsage);
}

TEST_CASE("corrupt configs name the offending field") {
  scratch();
  const std::vector<std::pair<std::string, std::string>> cases{
      {"schema = 1\nmode = inequality\nn = 3\ntarget = main\npole = polar 4 1 0 0\npole = polar 4 -1 0 0\ncount = many\n",
       "count"},
      {"schema = 1\nn = 3\ntarget = main\npole = polar 4 1 0\npole = polar 4 -1 0 0\n", "pole"},
      {"schema = 1\nn = 3\ntarget = main\nbogus = 1\n", "bogus"},
      {"schema = 1\nn = 3\nn = 4\n", "n"},
      {"schema = 1\nmode = spectrum\nn = 4\ntarget = main\n", "target"},
      {"n = 3\n", "schema"},
  };
  int i = 0;
  for (const auto& [text, key] : cases) {
    const fs::path p = write_file("bad" + std::to_string(i++) + ".cfg", text);
    const Run r = cli({"verify", p.string()});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("'" + key + "'") != std::string::npos);
  }
  std::istringstream in("schema = 1\nn = 3\nlambda = 0.5\ntarget = unipolar\npole = polar 0 1 0 0\n");
  CHECK_THROWS_AS(parse_config(in, "inline"), ConfigError);
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "# two poles\nschema = 1\nmode = inequality\nn = 3\nlambda = 1\nc = 1\n"
      "target = main\npole = polar 4 1 0 0   # right\npole = raw 1 0 0 0\nfamily = random_superpositions\n"
      "count = 3\nseed = 5\n");
  const RunConfig cfg = parse_config(in, "inline");
  CHECK(cfg.mode == RunMode::inequality);
  CHECK(cfg.spec.poles.size() == 2);
  CHECK(cfg.spec.half_separation() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cfg.family == FamilyKind::random_superpositions);
  CHECK(cfg.count == 3);
  CHECK(cfg.seed == 5);
}

TEST_CASE("bundled configurations") {
  scratch();
  const fs::path main_cfg = fs::path(HYPERHARDY_CONFIG_DIR) / "main-theorem-2pole.cfg";
  Run r = cli({"verify", main_cfg.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("failed=0") != std::string::npos);
  const fs::path report = scratch() / "main-theorem-2pole.jsonl";
  REQUIRE(fs::exists(report));
  const std::string first = slurp(report);
  std::istringstream lines(first);
  int records = 0;
  for (std::string line; std::getline(lines, line);) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("spec_hash"));
    CHECK(j.at("verdict").get<std::string>() != "fail");
    ++records;
  }
  CHECK(records == 20);

  r = cli({"--threads", "4", "verify", main_cfg.string()});
  CHECK(r.code == kExitOk);
  CHECK(slurp(report) == first);

  Run rep = cli({"report", report.string()});
  CHECK(rep.code == kExitOk);
  CHECK(rep.out.find("20 records, 0 fail") != std::string::npos);

  r = cli({"verify", (fs::path(HYPERHARDY_CONFIG_DIR) / "criticality-epsilon0.5.cfg").string()});
  CHECK(r.code == kExitOk);
  CHECK(field(r.out, "bottom_eigenvalue") < 0.0);
}

TEST_CASE("the installed executable matches the in-process runner") {
  scratch();
  const std::string cmd = std::string(HYPERHARDY_CLI) + " constants --n 6 --lambda 5 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[256];
  while (std::fgets(buf, sizeof buf, pipe)) text += buf;
  const int status = ::pclose(pipe);
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(text == cli({"constants", "--n", "6", "--lambda", "5"}).out);

  pipe = ::popen((std::string(HYPERHARDY_CLI) + " constants --n 3 --lambda 0.5 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf, sizeof buf, pipe)) {
  }
  CHECK(WEXITSTATUS(::pclose(pipe)) == kExitUsage);
}

TEST_CASE("weights line scan and near-pole fit") {
  scratch();
  const std::vector<std::string> base{"weights", "--n", "4", "--pole", "polar 4 1 0 0 0", "--pole", "polar 4 -1 0 0 0"};
  std::vector<std::string> scan = base;
  scan.insert(scan.end(), {"--samples", "40000", "--extent", "1"});
  const Run r = cli(scan);
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "s\tours\tffk\tcritical");
  std::vector<double> s;
  std::vector<double> y;
  int rows = 0;
  for (std::string line; std::getline(in, line);) {
    ++rows;
    std::istringstream ls(line);
    double si = 0.0;
    double ours = 0.0;
    ls >> si >> ours;
    if (si > 0.0 && si < 0.02) {
      s.push_back(si);
      y.push_back(si * si * ours);
    }
  }
  CHECK(rows == 40000);
  REQUIRE(s.size() >= 10);
  // Least-squares fit y = a + b s + c s^2; a is the near-pole coefficient.
  double m[3][4] = {};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double phi[3] = {1.0, s[i], s[i] * s[i]};
    for (int p = 0; p < 3; ++p) {
      for (int q = 0; q < 3; ++q) m[p][q] += phi[p] * phi[q];
      m[p][3] += phi[p] * y[i];
    }
  }
  for (int p = 0; p < 3; ++p) {
    for (int q = p + 1; q < 3; ++q) {
      const double f = m[q][p] / m[p][p];
      for (int k = p; k < 4; ++k) m[q][k] -= f * m[p][k];
    }
  }
  double coef[3];
  for (int p = 2; p >= 0; --p) {
    double acc = m[p][3];
    for (int k = p + 1; k < 3; ++k) acc -= m[p][k] * coef[k];
    coef[p] = acc / m[p][p];
  }
  std::vector<std::string> cmp = base;
  cmp.push_back("--compare");
  const Run c = cli(cmp);
  REQUIRE(c.code == kExitOk);
  const double ours = nlohmann::json::parse(c.out).at("near_pole").at("ours").get<double>();
  CHECK(coef[0] == doctest::Approx(ours).epsilon(1e-2));

  std::vector<std::string> small = base;
  small.insert(small.end(), {"--samples", "17", "--output", "scan.tsv"});
  CHECK(cli(small).code == kExitOk);
  std::istringstream file(slurp(scratch() / "scan.tsv"));
  int n = 0;
  for (std::string line; std::getline(file, line);) ++n;
  CHECK(n == 18);
}

TEST_CASE("spectrum") {
  scratch();
  const Run r = cli({"spectrum", "--n", "4", "--epsilon", "0.5", "--radius", "20"});
  CHECK(r.code == kExitOk);
  CHECK(field(r.out, "bottom_eigenvalue") < 0.0);
  const Run e = cli({"spectrum", "--n", "4", "--radius", "10"});
  CHECK(e.code == kExitOk);
  CHECK(field(e.out, "bottom_eigenvalue") >= -1e-6);
}
