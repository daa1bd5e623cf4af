#include "rfis/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "rfis/containment.hpp"
#include "rfis/invariance.hpp"

namespace rfis {
namespace {

bool finite(const Point& x) { return x.allFinite(); }

Point rhs(const SystemModel& sys, const DisturbanceSignal& signal, double t,
          const Point& x) {
  Point out(sys.dimension);
  sys.drift(std::span<const double>(x.data(), x.size()),
            std::span<double>(out.data(), out.size()));
  return out + signal.at(t, sys.dimension);
}

// RK4 step; returns false once the state is no longer finite.
bool rk4_step(const SystemModel& sys, const DisturbanceSignal& signal, double t,
              double h, Point& x) {
  const Point k1 = rhs(sys, signal, t, x);
  const Point k2 = rhs(sys, signal, t + h / 2, x + h / 2 * k1);
  const Point k3 = rhs(sys, signal, t + h / 2, x + h / 2 * k2);
  const Point k4 = rhs(sys, signal, t + h, x + h * k3);
  x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  return finite(x);
}

long step_count(double step, double horizon) {
  if (!(step > 0.0) || !(horizon >= 0.0)) {
    throw ValidationError("simulation", "step must be > 0 and horizon >= 0");
  }
  return std::lround(std::ceil(horizon / step - 1e-9));
}

long to_long(const std::string& s, const std::string& field) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(field, "not an integer: '" + s + "'");
}

TrajectoryOutcome simulate_one(const BoundaryComplex& c, const SystemModel& sys,
                               const Point& seed, const DisturbanceSignal& signal,
                               const SimulationConfig& cfg, double tol) {
  TrajectoryOutcome out;
  const long steps = step_count(cfg.step, cfg.horizon);
  Point x = seed;
  RayHit hit = locate(x, c);
  out.max_excess = hit.radial_excess;
  int hint = hit.simplex;
  double t = 0.0;
  for (long k = 0; k < steps; ++k) {
    const double h = std::min(cfg.step, cfg.horizon - t);
    if (!rk4_step(sys, signal, t, h, x)) {
      out.blew_up = true;
      break;
    }
    t += h;
    hit = locate(x, c, hint);
    if (hit.simplex >= 0) hint = hit.simplex;
    out.max_excess = std::max(out.max_excess, hit.radial_excess);
    if (hit.radial_excess > tol) {
      out.escaped = true;
      out.escape_time = t;
      break;
    }
  }
  return out;
}

FalsificationReport falsify_impl(const BoundaryComplex& c, const SystemModel& sys,
                                 const SimulationConfig& cfg, bool parallel) {
  if (sys.dimension != c.dimension()) {
    throw Error(ErrorCode::kDegenerateInput, "system and complex dimensions differ");
  }
  FalsificationReport report;
  report.penetration_tol =
      cfg.penetration_tol >= 0.0 ? cfg.penetration_tol : 1e-6 * complex_diameter(c);
  const std::vector<Point> seeds = seed_points(c, cfg.seeds);
  std::vector<DisturbanceSignal> signals = cfg.signals;
  if (signals.empty()) signals.push_back(DisturbanceSignal::zero(sys.dimension));
  for (const auto& sig : signals) {
    validate_signal(sig, sys.noise, sys.dimension, cfg.horizon);
  }

  const long pairs = static_cast<long>(seeds.size() * signals.size());
  const long n_signals = static_cast<long>(signals.size());
  report.outcomes.resize(pairs);
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long p = 0; p < pairs; ++p) {
    try {
      const int seed_index = static_cast<int>(p / n_signals);
      const int signal_index = static_cast<int>(p % n_signals);
      TrajectoryOutcome o = simulate_one(c, sys, seeds[seed_index], signals[signal_index],
                                         cfg, report.penetration_tol);
      o.seed_index = seed_index;
      o.signal_index = signal_index;
      report.outcomes[p] = o;
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  report.n_trajectories = pairs;
  for (const auto& o : report.outcomes) {
    report.n_escapes += o.escaped;
    report.n_blowups += o.blew_up;
    report.worst_penetration = std::max(report.worst_penetration, o.max_excess);
  }
  return report;
}

}  // namespace

TrajectoryRecord integrate(const SystemModel& sys, const Point& seed,
                           const DisturbanceSignal& signal, double step,
                           double horizon, int record_stride) {
  if (seed.size() != sys.dimension) {
    throw Error(ErrorCode::kDegenerateInput, "seed dimension mismatch");
  }
  record_stride = std::max(1, record_stride);
  const long steps = step_count(step, horizon);
  TrajectoryRecord rec;
  Point x = seed;
  double t = 0.0;
  rec.samples.push_back({t, x});
  for (long k = 1; k <= steps; ++k) {
    const double h = std::min(step, horizon - t);
    if (!rk4_step(sys, signal, t, h, x)) {
      rec.blew_up = true;
      break;
    }
    t += h;
    if (k % record_stride == 0 || k == steps) rec.samples.push_back({t, x});
  }
  return rec;
}

SeedRule SeedRule::parse(std::string_view spec_view) {
  const std::string spec(spec_view);
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  SeedRule rule;
  if (parts.size() == 1 && parts[0] == "vertices") return rule;
  if (parts.size() == 2 && parts[0] == "lattice") {
    rule.kind = Kind::kLattice;
    rule.level = static_cast<int>(to_long(parts[1], "seeds"));
    if (rule.level < 0) throw ValidationError("seeds", "lattice level must be >= 0");
    return rule;
  }
  if (parts.size() == 3 && parts[0] == "random") {
    rule.kind = Kind::kRandom;
    rule.count = to_long(parts[1], "seeds");
    rule.rng_seed = static_cast<std::uint64_t>(to_long(parts[2], "seeds"));
    if (rule.count <= 0) throw ValidationError("seeds", "random count must be > 0");
    return rule;
  }
  throw ValidationError("seeds", "unknown seed rule '" + spec + "'");
}

std::vector<Point> seed_points(const BoundaryComplex& c, const SeedRule& rule) {
  using Kind = SeedRule::Kind;
  switch (rule.kind) {
    case Kind::kExplicit:
      for (const Point& p : rule.explicit_points) {
        if (p.size() != c.dimension()) {
          throw ValidationError("seeds", "explicit seed has the wrong dimension");
        }
      }
      return rule.explicit_points;
    case Kind::kVertices:
      return {c.vertices().begin(), c.vertices().end()};
    case Kind::kLattice: {
      const TestLattice lattice(c.dimension(), rule.level);
      // Shared faces produce repeated points; dedupe on rounded coordinates.
      std::map<std::vector<long long>, Point> unique;
      const double scale = 1e9 / std::max(1.0, complex_diameter(c));
      for (int s = 0; s < c.num_simplices(); ++s) {
        const Eigen::MatrixXd pts = lattice.level(rule.level) * c.simplex_matrix(s);
        for (Eigen::Index r = 0; r < pts.rows(); ++r) {
          std::vector<long long> key(pts.cols());
          for (Eigen::Index k = 0; k < pts.cols(); ++k) {
            key[k] = std::llround(pts(r, k) * scale);
          }
          unique.emplace(std::move(key), pts.row(r).transpose());
        }
      }
      std::vector<Point> out;
      out.reserve(unique.size());
      for (auto& [key, p] : unique) out.push_back(std::move(p));
      return out;
    }
    case Kind::kRandom: {
      std::vector<double> areas(c.num_simplices());
      for (int s = 0; s < c.num_simplices(); ++s) {
        areas[s] = raw_normal(c.simplex_matrix(s)).norm();
      }
      std::mt19937_64 rng(rule.rng_seed);
      std::discrete_distribution<int> pick(areas.begin(), areas.end());
      std::exponential_distribution<double> expo(1.0);
      std::vector<Point> out;
      out.reserve(rule.count);
      for (long k = 0; k < rule.count; ++k) {
        const Eigen::MatrixXd rows = c.simplex_matrix(pick(rng));
        // Flat Dirichlet weights give a uniform point on the simplex.
        Eigen::RowVectorXd w(rows.rows());
        for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = expo(rng);
        w /= w.sum();
        out.push_back((w * rows).transpose());
      }
      return out;
    }
  }
  return {};
}

double complex_diameter(const BoundaryComplex& c) {
  double best = 0.0;
  const auto& v = c.vertices();
  for (size_t i = 0; i < v.size(); ++i) {
    for (size_t j = i + 1; j < v.size(); ++j) best = std::max(best, (v[i] - v[j]).norm());
  }
  return best;
}

FalsificationReport falsify(const BoundaryComplex& c, const SystemModel& sys,
                            const SimulationConfig& cfg) {
  return falsify_impl(c, sys, cfg, true);
}

FalsificationReport falsify_serial(const BoundaryComplex& c, const SystemModel& sys,
                                   const SimulationConfig& cfg) {
  return falsify_impl(c, sys, cfg, false);
}

}  // namespace rfis
