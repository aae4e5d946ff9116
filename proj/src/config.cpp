#include "hyperhardy/config.hpp"

#include <cerrno>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace hyperhardy {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double to_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("'" + text + "' is not a number");
  }
  if (used != text.size() || !std::isfinite(v)) throw DomainError("'" + text + "' is not a finite number");
  return v;
}

long long to_integer(const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw DomainError("'" + text + "' is not an integer");
  }
  if (used != text.size()) throw DomainError("'" + text + "' is not an integer");
  return v;
}

bool to_bool(const std::string& text) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw DomainError("'" + text + "' is not a boolean");
}

const std::set<std::string>& common_keys() {
  static const std::set<std::string> k{"schema", "mode", "n", "lambda", "c", "seed", "output"};
  return k;
}

const std::set<std::string>& inequality_keys() {
  static const std::set<std::string> k{"target", "base", "pole", "alpha", "family", "count",
                                       "radial_nodes", "panels", "spherical_samples", "origin_levels"};
  return k;
}

const std::set<std::string>& spectrum_keys() {
  static const std::set<std::string> k{"epsilon", "radius", "grid", "graded", "expect"};
  return k;
}

class Reader {
 public:
  Reader(std::map<std::string, Entry> single, std::vector<Entry> poles, std::string source)
      : single_(std::move(single)), poles_(std::move(poles)), source_(std::move(source)) {}

  bool has(const std::string& key) const { return single_.count(key) != 0; }

  template <class F>
  auto get(const std::string& key, F&& convert) const {
    const Entry& e = single_.at(key);
    try {
      return convert(e.value);
    } catch (const DomainError& err) {
      fail(key, e.line, err.what());
    }
  }

  template <class T, class F>
  T get_or(const std::string& key, T fallback, F&& convert) const {
    return has(key) ? static_cast<T>(get(key, convert)) : fallback;
  }

  [[noreturn]] void fail(const std::string& key, int line, const std::string& what) const {
    std::ostringstream msg;
    msg << source_ << ":" << line << ": field '" << key << "': " << what;
    throw ConfigError(msg.str());
  }

  [[noreturn]] void missing(const std::string& key) const {
    throw ConfigError(source_ + ": missing required field '" + key + "'");
  }

  int line(const std::string& key) const { return single_.at(key).line; }
  const std::vector<Entry>& poles() const { return poles_; }

 private:
  std::map<std::string, Entry> single_;
  std::vector<Entry> poles_;
  std::string source_;
};

}  // namespace

const char* to_string(RunMode mode) { return mode == RunMode::inequality ? "inequality" : "spectrum"; }

const char* to_string(Expectation expectation) {
  switch (expectation) {
    case Expectation::none:
      return "none";
    case Expectation::negative:
      return "negative";
    case Expectation::nonnegative:
      return "nonnegative";
  }
  return "?";
}

Point parse_point(const std::string& text, int N, double c, const Point& base) {
  const std::vector<std::string> w = words(text);
  if (w.empty()) throw DomainError("empty point");
  std::vector<double> nums;
  for (std::size_t i = 1; i < w.size(); ++i) nums.push_back(to_double(w[i]));
  const auto n = static_cast<std::size_t>(N);
  if (w[0] == "polar") {
    if (nums.size() != n + 1) throw DomainError("polar point needs a radius and " + std::to_string(N) + " direction entries");
    if (!(nums[0] >= 0.0)) throw DomainError("polar radius must be >= 0");
    const Point local = Point::polar(std::sqrt(c) * nums[0], std::span<const double>(nums).subspan(1));
    return snap_to_origin(Isometry::moving_to_origin(base).apply_inverse(local));
  }
  if (w[0] == "raw") {
    if (nums.size() != n + 1) throw DomainError("raw point needs " + std::to_string(N + 1) + " coordinates");
    return Point::from_ambient(nums);
  }
  throw DomainError("point must start with 'polar' or 'raw'");
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, Entry> single;
  std::vector<Entry> poles;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!common_keys().count(key) && !inequality_keys().count(key) && !spectrum_keys().count(key)) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": unknown field '" + key + "'");
    }
    if (value.empty()) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": field '" + key + "': empty value");
    }
    if (key == "pole") {
      poles.push_back({value, line_no});
      continue;
    }
    if (single.count(key)) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": field '" + key + "': duplicate (first on line " +
                        std::to_string(single[key].line) + ")");
    }
    single[key] = {value, line_no};
  }
  if (in.bad()) throw ConfigError(source + ": read error");

  const Reader r(std::move(single), std::move(poles), source);
  if (!r.has("schema")) r.missing("schema");
  if (r.get("schema", to_integer) != kConfigSchema) {
    r.fail("schema", r.line("schema"), "unsupported schema (expected " + std::to_string(kConfigSchema) + ")");
  }

  RunConfig cfg;
  if (r.has("mode")) {
    cfg.mode = r.get("mode", [](const std::string& v) {
      if (v == "inequality") return RunMode::inequality;
      if (v == "spectrum") return RunMode::spectrum;
      throw DomainError("expected 'inequality' or 'spectrum'");
    });
  }
  const auto& foreign = cfg.mode == RunMode::inequality ? spectrum_keys() : inequality_keys();
  for (const std::string& key : foreign) {
    if (key == "pole" ? !r.poles().empty() : r.has(key)) {
      const int line = key == "pole" ? r.poles().front().line : r.line(key);
      r.fail(key, line, std::string("not valid in mode ") + to_string(cfg.mode));
    }
  }

  if (!r.has("n")) r.missing("n");
  const int N = r.get("n", [](const std::string& v) {
    const long long n = to_integer(v);
    if (n < 3 || n > kMaxDim) throw DomainError("must be in [3, " + std::to_string(kMaxDim) + "]");
    return static_cast<int>(n);
  });
  const double c = r.get_or("c", 1.0, to_double);
  const double lambda = r.get_or("lambda", N - 2.0, to_double);
  SpectralParams params;
  try {
    params = SpectralParams::make(N, lambda, c);
  } catch (const DomainError& e) {
    r.fail(r.has("lambda") ? "lambda" : "c", r.line(r.has("lambda") ? "lambda" : "c"), e.what());
  }
  cfg.seed = r.get_or("seed", std::uint64_t{1}, [](const std::string& v) {
    const long long s = to_integer(v);
    if (s < 0) throw DomainError("must be >= 0");
    return static_cast<std::uint64_t>(s);
  });
  if (r.has("output")) cfg.output = r.get("output", [](const std::string& v) { return v; });

  auto positive_int = [](const std::string& v) {
    const long long n = to_integer(v);
    if (n < 1 || n > 100000000) throw DomainError("must be a positive integer");
    return static_cast<int>(n);
  };

  if (cfg.mode == RunMode::spectrum) {
    cfg.problem.params = params;
    cfg.epsilon = r.get_or("epsilon", 0.0, to_double);
    cfg.problem.outer_radius = r.get_or("radius", 10.0, to_double);
    cfg.problem.grid_size = r.get_or("grid", 4096, positive_int);
    cfg.problem.graded = r.get_or("graded", true, to_bool);
    if (r.has("expect")) {
      cfg.expect = r.get("expect", [](const std::string& v) {
        if (v == "none") return Expectation::none;
        if (v == "negative") return Expectation::negative;
        if (v == "nonnegative") return Expectation::nonnegative;
        throw DomainError("expected 'none', 'negative' or 'nonnegative'");
      });
    }
    const double eps = cfg.epsilon;
    cfg.problem.potential = [params, eps](double rr) { return (1.0 + eps) * radial_potential(params, rr); };
    try {
      cfg.problem.validate();
    } catch (const DomainError& e) {
      throw ConfigError(source + ": " + e.what());
    }
    return cfg;
  }

  InequalitySpec& spec = cfg.spec;
  spec.params = params;
  if (!r.has("target")) r.missing("target");
  spec.target = r.get("target", target_from_string);
  Point base = Point::origin(N);
  if (r.has("base")) {
    base = r.get("base", [N, c](const std::string& v) { return parse_point(v, N, c, Point::origin(N)); });
  }
  if (r.poles().empty()) r.missing("pole");
  for (const Entry& e : r.poles()) {
    try {
      spec.poles.push_back(parse_point(e.value, N, c, base));
    } catch (const DomainError& err) {
      r.fail("pole", e.line, err.what());
    }
  }
  if (r.has("alpha")) {
    spec.alpha = r.get("alpha", [](const std::string& v) {
      std::vector<double> a;
      for (const std::string& w : words(v)) a.push_back(to_double(w));
      return a;
    });
  }
  if (r.has("family")) cfg.family = r.get("family", family_from_string);
  cfg.count = r.get_or("count", 10, positive_int);
  spec.quad.radial_nodes = r.get_or("radial_nodes", spec.quad.radial_nodes, positive_int);
  spec.quad.panels = r.get_or("panels", spec.quad.panels, positive_int);
  spec.quad.spherical_samples = r.get_or("spherical_samples", spec.quad.spherical_samples, positive_int);
  spec.quad.origin_levels = r.get_or("origin_levels", spec.quad.origin_levels, positive_int);
  spec.quad.seed = cfg.seed;
  spec.quad.center = Point::origin(N);
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.filename().string());
}

}  // namespace hyperhardy
