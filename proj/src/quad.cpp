#include "hyperhardy/quad.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "hyperhardy/error.hpp"
#include "hyperhardy/rng.hpp"

namespace hyperhardy {

namespace {

std::atomic<int> g_threads{1};

constexpr double kNonFiniteBudget = 1e-3;

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(g_threads.load()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Pairwise summation of v[first], v[first + stride], ... (fixed blocking).
double pairwise_sum(const std::vector<double>& v, std::size_t first, std::size_t count, std::size_t stride) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += v[first + i * stride];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(v, first, half, stride) + pairwise_sum(v, first + half * stride, count - half, stride);
}

struct CenterJob {
  Point center = Point::origin(3);
  double radius = 1.0;
  std::vector<double> breakpoints;
  std::function<double(double)> radial;
  LocalEvaluator eval;
  std::uint64_t stream = 0;
};

struct Accumulator {
  std::vector<double> value;
  std::vector<double> variance;
  std::uint64_t samples = 0;
  std::uint64_t nonfinite = 0;
};

void run_center(const CenterJob& job, std::size_t K, const QuadratureSpec& spec, const CurvatureModel& cm,
                Accumulator& acc) {
  const int N = job.center.dim();
  const double sc = cm.sqrt_c();
  const Rule1D rule = radial_rule(spec, job.radius, sc, job.breakpoints);
  const std::size_t nodes = rule.nodes.size();
  const auto n_samples = static_cast<std::size_t>(spec.spherical_samples);
  const double omega = sphere_area(N);
  const CounterRng base = CounterRng(spec.seed, 0x51ULL).substream(job.stream);

  std::vector<double> contrib(nodes * K, 0.0);
  std::vector<double> var(nodes * K, 0.0);
  std::vector<std::uint64_t> used(nodes, 0);
  std::vector<std::uint64_t> bad(nodes, 0);

  parallel_for(nodes, [&](std::size_t i) {
    const double r = rule.nodes[i];
    double weight = rule.weights[i] * omega * cm.volume_factor(N, r);
    if (job.radial) {
      const double f = job.radial(r);
      if (!std::isfinite(f)) {
        std::ostringstream msg;
        msg << "non-finite radial factor at r = " << r;
        throw NumericalError(msg.str());
      }
      weight *= f;
    }
    if (weight == 0.0) return;
    const CounterRng rng = base.substream(i);
    std::vector<double> out(K);
    std::vector<double> mean(K, 0.0);
    std::vector<double> m2(K, 0.0);
    std::array<double, kMaxDim> dir{};
    std::uint64_t n_ok = 0;
    for (std::size_t j = 0; j < n_samples; ++j) {
      for (int k = 0; k < N; ++k) dir[static_cast<std::size_t>(k)] = rng.normal(j * static_cast<std::size_t>(N) + k);
      const Point local = Point::polar(sc * r, {dir.data(), static_cast<std::size_t>(N)});
      std::fill(out.begin(), out.end(), 0.0);
      job.eval(local, r, out);
      bool finite = true;
      for (double v : out) finite = finite && std::isfinite(v);
      if (!finite) {
        ++bad[i];
        continue;
      }
      ++n_ok;
      for (std::size_t k = 0; k < K; ++k) {
        const double delta = out[k] - mean[k];
        mean[k] += delta / static_cast<double>(n_ok);
        m2[k] += delta * (out[k] - mean[k]);
      }
    }
    used[i] = n_ok;
    if (n_ok == 0) return;
    for (std::size_t k = 0; k < K; ++k) {
      contrib[i * K + k] = weight * mean[k];
      const double s2 = n_ok > 1 ? m2[k] / static_cast<double>(n_ok - 1) : 0.0;
      var[i * K + k] = weight * weight * s2 / static_cast<double>(n_ok);
    }
  });

  for (std::size_t k = 0; k < K; ++k) {
    acc.value[k] += pairwise_sum(contrib, k, nodes, K);
    acc.variance[k] += pairwise_sum(var, k, nodes, K);
  }
  acc.samples += std::accumulate(used.begin(), used.end(), std::uint64_t{0});
  acc.nonfinite += std::accumulate(bad.begin(), bad.end(), std::uint64_t{0});
}

VectorEstimate finish(const Accumulator& acc) {
  const double total = static_cast<double>(acc.samples + acc.nonfinite);
  if (acc.nonfinite > 0 && static_cast<double>(acc.nonfinite) > kNonFiniteBudget * total) {
    std::ostringstream msg;
    msg << "integrand non-finite at " << acc.nonfinite << " of " << acc.samples + acc.nonfinite << " samples";
    throw NumericalError(msg.str());
  }
  VectorEstimate est;
  est.value = acc.value;
  est.stderr.resize(acc.variance.size());
  for (std::size_t k = 0; k < acc.variance.size(); ++k) est.stderr[k] = std::sqrt(acc.variance[k]);
  est.samples_used = acc.samples;
  return est;
}

Accumulator make_accumulator(std::size_t K) {
  Accumulator acc;
  acc.value.assign(K, 0.0);
  acc.variance.assign(K, 0.0);
  return acc;
}

double becke_step(double mu) {
  mu = std::clamp(mu, -1.0, 1.0);
  for (int i = 0; i < 3; ++i) mu = 1.5 * mu - 0.5 * mu * mu * mu;
  return 0.5 * (1.0 - mu);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (radial_nodes < 8 || radial_nodes > 256) throw DomainError("quadrature: radial_nodes must be in [8, 256]");
  if (panels < 1) throw DomainError("quadrature: panels must be >= 1");
  if (spherical_samples < 64) throw DomainError("quadrature: spherical_samples must be >= 64");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("quadrature: radius must be > 0");
  if (origin_levels < 1 || origin_levels > 10) throw DomainError("quadrature: origin_levels must be in [1, 10]");
}

void set_worker_threads(int n) {
  if (n < 1) throw DomainError("threads must be >= 1");
  g_threads = n;
}

int worker_threads() { return g_threads.load(); }

Rule1D radial_rule(const QuadratureSpec& spec, double radius, double sqrt_c, std::span<const double> breakpoints) {
  if (!(radius > 0.0)) throw DomainError("radial rule: radius must be > 0");
  const int panels = std::max(spec.panels, static_cast<int>(std::ceil(sqrt_c * radius)));
  std::vector<double> cuts;
  for (int p = 1; p < panels; ++p) cuts.push_back(radius * p / panels);
  for (double b : breakpoints) {
    if (b > 0.0 && b < radius) cuts.push_back(b);
  }
  cuts.push_back(radius);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> edges{0.0};
  for (double b : cuts) {
    if (b - edges.back() > 1e-12 * radius) edges.push_back(b);
  }
  edges.back() = radius;

  Rule1D rule = tanh_sinh_origin(edges[1], spec.origin_levels);
  const Rule1D& gl = gauss_legendre(spec.radial_nodes);
  for (std::size_t p = 1; p + 1 < edges.size(); ++p) {
    const double mid = 0.5 * (edges[p] + edges[p + 1]);
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      rule.nodes.push_back(mid + half * gl.nodes[i]);
      rule.weights.push_back(half * gl.weights[i]);
    }
  }
  return rule;
}

IntegralEstimate integrate_radial(const std::function<double(double)>& f, const QuadratureSpec& spec, int dim,
                                  const CurvatureModel& curvature) {
  spec.validate();
  const Rule1D rule = radial_rule(spec, spec.radius, curvature.sqrt_c());
  const double omega = sphere_area(dim);
  std::vector<double> terms(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = rule.nodes[i];
    const double v = f(r);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "integrate_radial: non-finite integrand at r = " << r;
      throw NumericalError(msg.str());
    }
    terms[i] = rule.weights[i] * omega * curvature.volume_factor(dim, r) * v;
  }
  return {pairwise_sum(terms, 0, terms.size(), 1), 0.0, static_cast<std::uint64_t>(terms.size())};
}

FrameBinder global_field(std::function<double(const Point&)> f) {
  return [f = std::move(f)](const Isometry& to_local) -> LocalEvaluator {
    return [f, to_local](const Point& local, double, std::span<double> out) { out[0] = f(to_local.apply_inverse(local)); };
  };
}

IntegralEstimate integrate_ball(const std::function<double(const Point&)>& f, const QuadratureSpec& spec,
                                const CurvatureModel& curvature) {
  spec.validate();
  PoleTerm term;
  term.pole = spec.center;
  term.radius = spec.radius;
  term.cofactor = global_field(f);
  return decompose_by_pole(std::span<const PoleTerm>(&term, 1), spec, curvature);
}

VectorEstimate decompose_by_pole(std::span<const PoleTerm> terms, std::size_t components, const QuadratureSpec& spec,
                                 const CurvatureModel& curvature) {
  spec.validate();
  if (components == 0) throw DomainError("decompose_by_pole: need at least one component");
  Accumulator acc = make_accumulator(components);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const PoleTerm& term = terms[t];
    if (term.pole.dim() != spec.center.dim()) throw DomainError("decompose_by_pole: pole dimension mismatch");
    if (!(term.radius > 0.0)) throw DomainError("decompose_by_pole: term radius must be > 0");
    const double offset = geodesic_distance(term.pole, spec.center) / curvature.sqrt_c();
    if (offset + term.radius > spec.radius * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "decompose_by_pole: term " << t << " support (offset " << offset << " + radius " << term.radius
          << ") exceeds the integration ball radius " << spec.radius;
      throw DomainError(msg.str());
    }
    if (!term.cofactor) throw DomainError("decompose_by_pole: missing cofactor");
    CenterJob job;
    job.center = term.pole;
    job.radius = term.radius;
    job.breakpoints = term.breakpoints;
    job.radial = term.radial;
    job.eval = term.cofactor(Isometry::moving_to_origin(term.pole));
    job.stream = t;
    run_center(job, components, spec, curvature, acc);
  }
  return finish(acc);
}

IntegralEstimate decompose_by_pole(std::span<const PoleTerm> terms, const QuadratureSpec& spec,
                                   const CurvatureModel& curvature) {
  return decompose_by_pole(terms, 1, spec, curvature).component(0);
}

void cell_weights(std::span<const double> dist, std::span<const double> center_dist, std::span<double> weights) {
  const std::size_t K = dist.size();
  if (K == 1) {
    weights[0] = 1.0;
    return;
  }
  double total = 0.0;
  for (std::size_t a = 0; a < K; ++a) {
    double p = 1.0;
    for (std::size_t b = 0; b < K && p > 0.0; ++b) {
      if (b == a) continue;
      p *= becke_step((dist[a] - dist[b]) / center_dist[a * K + b]);
    }
    weights[a] = p;
    total += p;
  }
  for (std::size_t a = 0; a < K; ++a) weights[a] /= total;
}

VectorEstimate integrate_cells(std::span<const Cell> cells, std::size_t components, const FrameBinder& field,
                               const QuadratureSpec& spec, const CurvatureModel& curvature) {
  spec.validate();
  if (cells.empty()) throw DomainError("integrate_cells: no cells");
  const std::size_t K = cells.size();
  std::vector<double> center_dist(K * K, 0.0);
  for (std::size_t a = 0; a < K; ++a) {
    for (std::size_t b = a + 1; b < K; ++b) {
      const double dab = geodesic_distance(cells[a].center, cells[b].center);
      if (!(dab > 0.0)) throw DomainError("integrate_cells: cell centers must be distinct");
      center_dist[a * K + b] = center_dist[b * K + a] = dab;
    }
  }
  const double sc = curvature.sqrt_c();
  Accumulator acc = make_accumulator(components);
  for (std::size_t a = 0; a < K; ++a) {
    const Isometry iso = Isometry::moving_to_origin(cells[a].center);
    std::vector<Point> others;
    others.reserve(K);
    for (const Cell& cell : cells) others.push_back(iso.apply(cell.center));
    CenterJob job;
    job.center = cells[a].center;
    job.radius = cells[a].reach;
    job.breakpoints = cells[a].breakpoints;
    job.stream = a;
    LocalEvaluator inner = field(iso);
    job.eval = [inner, others, center_dist, a, K, sc](const Point& local, double r, std::span<double> out) {
      std::array<double, 64> dist{};
      std::array<double, 64> w{};
      if (K > dist.size()) throw DomainError("integrate_cells: too many cells");
      for (std::size_t b = 0; b < K; ++b) dist[b] = b == a ? sc * r : geodesic_distance(local, others[b]);
      cell_weights({dist.data(), K}, center_dist, {w.data(), K});
      if (w[a] == 0.0) return;
      inner(local, r, out);
      for (double& v : out) v *= w[a];
    };
    run_center(job, components, spec, curvature, acc);
  }
  return finish(acc);
}

}  // namespace hyperhardy
