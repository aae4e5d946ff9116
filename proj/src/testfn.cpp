#include "hyperhardy/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "hyperhardy/error.hpp"
#include "hyperhardy/rng.hpp"

namespace hyperhardy {

namespace {

constexpr double kSameCenter = 1e-9;

// Point at unit distance t * d(a, b) from a on the geodesic towards b.
Point along_geodesic(const Point& a, const Point& b, double t) {
  const Isometry iso = Isometry::moving_to_origin(a);
  const Point q = iso.apply(b);
  const double dist = geodesic_distance(a, b);
  return iso.apply_inverse(Point::polar(t * dist, q.spatial()));
}

Point random_direction_point(const Point& base, double dist, const CounterRng& rng, std::uint64_t index) {
  const int n = base.dim();
  std::vector<double> dir(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) dir[static_cast<std::size_t>(k)] = rng.normal(index * 32 + static_cast<std::uint64_t>(k));
  return Isometry::moving_to_origin(base).apply_inverse(Point::polar(dist, dir));
}

}  // namespace

const char* to_string(Profile profile) {
  switch (profile) {
    case Profile::polynomial:
      return "polynomial";
    case Profile::smoothstep:
      return "smoothstep";
    case Profile::shifted_power:
      return "shifted-power";
  }
  return "?";
}

Profile profile_from_string(const std::string& name) {
  for (auto p : {Profile::polynomial, Profile::smoothstep, Profile::shifted_power}) {
    if (name == to_string(p)) return p;
  }
  throw DomainError("unknown profile '" + name + "'");
}

void RadialBump::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("bump radius must be > 0");
  if (profile == Profile::shifted_power) {
    const double lo = -0.5 * (center.dim() - 2.0);
    if (!(exponent > lo) || !std::isfinite(exponent)) {
      throw DomainError("shifted-power exponent must exceed -(N-2)/2");
    }
  }
}

double RadialBump::value(double r) const {
  if (r >= radius) return 0.0;
  const double s = r / radius;
  switch (profile) {
    case Profile::polynomial:
      return (1.0 - s * s) * (1.0 - s * s);
    case Profile::smoothstep:
      return 1.0 - s * s * (3.0 - 2.0 * s);
    case Profile::shifted_power:
      return std::pow(r, exponent) * (1.0 - s * s) * (1.0 - s * s);
  }
  return 0.0;
}

double RadialBump::deriv(double r) const {
  if (r >= radius) return 0.0;
  const double s = r / radius;
  const double q = 1.0 - s * s;
  switch (profile) {
    case Profile::polynomial:
      return -4.0 * s * q / radius;
    case Profile::smoothstep:
      return 6.0 * s * (s - 1.0) / radius;
    case Profile::shifted_power: {
      const double poly = -4.0 * s * q / radius;
      if (exponent == 0.0) return poly;
      return exponent * std::pow(r, exponent - 1.0) * q * q + std::pow(r, exponent) * poly;
    }
  }
  return 0.0;
}

bool RadialBump::singular_at_center() const {
  return profile == Profile::shifted_power && exponent != 0.0 && exponent < 1.0;
}

void Superposition::validate() const {
  for (const Term& t : terms) {
    if (!std::isfinite(t.coef)) throw DomainError("superposition coefficient must be finite");
    t.bump.validate();
    if (t.bump.center.dim() != terms.front().bump.center.dim()) {
      throw DomainError("superposition terms have different dimensions");
    }
  }
}

Superposition Superposition::moved(const Isometry& iso) const {
  Superposition out = *this;
  for (Term& t : out.terms) t.bump.center = snap_to_origin(iso.apply(t.bump.center));
  return out;
}

double value(const Superposition& u, const Point& x, double c) {
  const double sc = std::sqrt(c);
  double v = 0.0;
  for (const auto& t : u.terms) {
    const double r = geodesic_distance(x, t.bump.center) / sc;
    if (r < t.bump.radius) v += t.coef * t.bump.value(r);
  }
  return v;
}

double value_and_gradient(const Superposition& u, const Point& x, double c, std::span<double> grad) {
  const double sc = std::sqrt(c);
  const auto n = static_cast<std::size_t>(x.dim()) + 1;
  std::fill(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
  Point::Storage e{};
  double v = 0.0;
  for (const auto& t : u.terms) {
    const double d1 = geodesic_distance(x, t.bump.center);
    const double r = d1 / sc;
    if (r >= t.bump.radius) continue;
    if (!(r > 0.0)) {
      if (t.bump.singular_at_center()) throw DomainError("gradient singular at a bump center");
      v += t.coef * t.bump.value(0.0);
      continue;
    }
    v += t.coef * t.bump.value(r);
    const double db = t.bump.deriv(r);
    if (db == 0.0) continue;
    grad_dist_ambient(x, t.bump.center, d1, e);
    for (std::size_t i = 0; i < n; ++i) grad[i] += t.coef * db * e[i];
  }
  return v;
}

double grad_norm_sq(const Superposition& u, const Point& x, double c) {
  Point::Storage g{};
  value_and_gradient(u, x, c, g);
  const auto n = static_cast<std::size_t>(x.dim()) + 1;
  return std::max(0.0, minkowski_inner({g.data(), n}, {g.data(), n}));
}

const char* to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::pole_bumps:
      return "pole_bumps";
    case FamilyKind::random_superpositions:
      return "random_superpositions";
    case FamilyKind::near_optimizer:
      return "near_optimizer";
  }
  return "?";
}

FamilyKind family_from_string(const std::string& name) {
  for (auto k : {FamilyKind::pole_bumps, FamilyKind::random_superpositions, FamilyKind::near_optimizer}) {
    if (name == to_string(k)) return k;
  }
  throw DomainError("unknown family '" + name + "'");
}

std::vector<Superposition> sample_family(FamilyKind kind, std::span<const Point> poles, double scale, double c,
                                         int count, std::uint64_t seed) {
  if (count < 1) throw DomainError("family count must be >= 1");
  if (poles.empty()) throw DomainError("family needs at least one pole");
  if (!(scale > 0.0)) throw DomainError("family scale must be > 0");
  const int N = poles.front().dim();
  const double sc = std::sqrt(c);
  const double lo = -0.5 * (N - 2.0);
  std::vector<Superposition> family;
  family.reserve(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) {
    const CounterRng rng(seed, static_cast<std::uint64_t>(m) + 1);
    Superposition u;
    switch (kind) {
      case FamilyKind::pole_bumps:
        for (std::size_t k = 0; k < poles.size(); ++k) {
          Superposition::Term t;
          t.bump.center = poles[k];
          t.bump.radius = scale * (0.4 + 0.6 * rng.uniform(4 * k));
          t.bump.profile = rng.uniform(4 * k + 1) < 0.5 ? Profile::polynomial : Profile::smoothstep;
          t.coef = 0.25 + rng.uniform(4 * k + 2);
          if (rng.uniform(4 * k + 3) < 0.3) t.coef = -t.coef;
          u.terms.push_back(t);
        }
        break;
      case FamilyKind::random_superpositions: {
        const int terms = 1 + static_cast<int>(3.0 * rng.uniform(0));
        for (int j = 0; j < terms; ++j) {
          const std::uint64_t base = 16 * static_cast<std::uint64_t>(j + 1);
          Superposition::Term t;
          const auto i = static_cast<std::size_t>(rng.uniform(base) * static_cast<double>(poles.size()));
          const double place = rng.uniform(base + 1);
          if (place < 0.3 || poles.size() == 1) {
            t.bump.center = poles[i];
            if (poles.size() == 1 && place >= 0.3) {
              t.bump.center = random_direction_point(poles[i], sc * scale * rng.uniform(base + 2), rng, base + 3);
            }
          } else {
            const std::size_t k = (i + 1 + static_cast<std::size_t>(rng.uniform(base + 4) *
                                                                    static_cast<double>(poles.size() - 1))) %
                                  poles.size();
            t.bump.center = along_geodesic(poles[i], poles[k], rng.uniform(base + 5));
          }
          t.bump.radius = scale * (0.3 + 1.2 * rng.uniform(base + 6));
          const double pick = rng.uniform(base + 7);
          if (pick < 0.4) {
            t.bump.profile = Profile::polynomial;
          } else if (pick < 0.8) {
            t.bump.profile = Profile::smoothstep;
          } else {
            t.bump.profile = Profile::shifted_power;
            t.bump.exponent = 0.5 * lo + (0.5 - 0.5 * lo) * rng.uniform(base + 8);
          }
          t.coef = 2.0 * rng.uniform(base + 9) - 1.0;
          u.terms.push_back(t);
        }
        break;
      }
      case FamilyKind::near_optimizer: {
        const double a = lo + 0.1 + (-lo - 0.1) * (m + 1.0) / count;
        for (const Point& p : poles) {
          Superposition::Term t;
          t.bump.center = p;
          t.bump.radius = scale;
          t.bump.profile = Profile::shifted_power;
          t.bump.exponent = a;
          u.terms.push_back(t);
        }
        break;
      }
    }
    u.validate();
    family.push_back(std::move(u));
  }
  return family;
}

std::vector<Superposition> sample_family(FamilyKind kind, const PoleConfig& poles, double c, int count,
                                         std::uint64_t seed) {
  return sample_family(kind, poles.poles(), poles.d(c), c, count, seed);
}

std::vector<Cell> integration_cells(const Superposition& u, std::span<const Point> poles, double c,
                                    double pole_margin, std::span<const double> pole_breakpoints) {
  std::vector<Cell> cells;
  if (u.empty()) return cells;
  const double sc = std::sqrt(c);
  std::vector<bool> is_pole;
  auto add_center = [&](const Point& p, bool pole) -> std::size_t {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (geodesic_distance(cells[i].center, p) < kSameCenter) {
        if (pole) is_pole[i] = true;
        return i;
      }
    }
    Cell cell;
    cell.center = p;
    cells.push_back(cell);
    is_pole.push_back(pole);
    return cells.size() - 1;
  };
  for (const Point& p : poles) {
    for (const auto& t : u.terms) {
      if (geodesic_distance(p, t.bump.center) / sc < t.bump.radius + pole_margin) {
        add_center(p, true);
        break;
      }
    }
  }
  for (const auto& t : u.terms) add_center(t.bump.center, false);

  for (std::size_t i = 0; i < cells.size(); ++i) {
    Cell& cell = cells[i];
    double reach = 0.0;
    for (const auto& t : u.terms) {
      const double off = geodesic_distance(cell.center, t.bump.center) / sc;
      reach = std::max(reach, off + t.bump.radius);
      if (off < kSameCenter) {
        cell.breakpoints.push_back(t.bump.radius);
      } else {
        cell.breakpoints.push_back(std::abs(off - t.bump.radius));
        cell.breakpoints.push_back(off + t.bump.radius);
        cell.breakpoints.push_back(off);
      }
    }
    if (is_pole[i]) cell.breakpoints.insert(cell.breakpoints.end(), pole_breakpoints.begin(), pole_breakpoints.end());
    cell.reach = reach;
  }
  return cells;
}

void serialize(std::ostream& out, std::span<const Superposition> family) {
  out << std::setprecision(17);
  for (const auto& u : family) {
    out << "superposition " << u.terms.size() << '\n';
    for (const auto& t : u.terms) {
      out << "bump " << to_string(t.bump.profile) << ' ' << t.bump.exponent << ' ' << t.coef << ' ' << t.bump.radius
          << ' ' << t.bump.center.dim();
      for (double x : t.bump.center.coords()) out << ' ' << x;
      out << '\n';
    }
  }
}

std::vector<Superposition> parse_family(std::istream& in) {
  std::vector<Superposition> family;
  std::string line;
  int line_no = 0;
  std::size_t pending = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    auto fail = [&](const std::string& what) {
      throw DomainError("test-function fixture line " + std::to_string(line_no) + ": " + what);
    };
    if (tag == "superposition") {
      if (pending != 0) fail("previous superposition is incomplete");
      if (!(ls >> pending)) fail("missing term count");
      family.emplace_back();
    } else if (tag == "bump") {
      if (pending == 0) fail("bump outside a superposition");
      std::string profile;
      Superposition::Term t;
      int dim = 0;
      if (!(ls >> profile >> t.bump.exponent >> t.coef >> t.bump.radius >> dim)) fail("malformed bump");
      if (dim < 1 || dim > kMaxDim) fail("bad dimension");
      std::vector<double> coords(static_cast<std::size_t>(dim) + 1);
      for (double& x : coords) {
        if (!(ls >> x)) fail("missing coordinate");
      }
      t.bump.profile = profile_from_string(profile);
      t.bump.center = Point::from_ambient(coords);
      family.back().terms.push_back(t);
      --pending;
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (pending != 0) throw DomainError("test-function fixture ends inside a superposition");
  for (const auto& u : family) u.validate();
  return family;
}

}  // namespace hyperhardy
