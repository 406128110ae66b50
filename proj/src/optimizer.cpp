#include "trapzopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "trapzopt/errors.hpp"

namespace trapzopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum Stream : std::uint64_t { kInitPosition = 0, kCognitive = 1, kSocial = 2 };

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double safe_eval(const Objective& objective, std::span<const double> x) {
  try {
    const double f = objective(x);
    return std::isnan(f) ? kInf : f;
  } catch (...) {
    return kInf;
  }
}

std::size_t worker_count(const PsoConfig& cfg, std::size_t jobs) {
  std::size_t n = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  return std::clamp<std::size_t>(n, 1, std::max<std::size_t>(jobs, 1));
}

Trajectory plan_unchecked(const std::vector<JointConfig>& waypoints, const std::vector<SegmentParams>& params) {
  std::vector<Segment> segments;
  segments.reserve(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    segments.push_back(plan_segment(waypoints[i], waypoints[i + 1], params[i].v, params[i].a));
  }
  return Trajectory(std::move(segments));
}

}  // namespace

void PsoConfig::validate(std::size_t dim) const {
  if (dim < 1) throw BadConfig("PSO dimension must be at least 1");
  if (swarm_size < 2) throw BadConfig("swarm_size must be at least 2");
  if (max_iters < 1) throw BadConfig("max_iters must be at least 1");
  if (!(w >= 0.0 && w < 1.0)) throw BadConfig("inertia weight w must lie in [0, 1)");
  if (!(c1 >= 0.0) || !(c2 >= 0.0) || (c1 == 0.0 && c2 == 0.0)) {
    throw BadConfig("c1 and c2 must be non-negative and not both zero");
  }
  if (!(stall_tol >= 0.0)) throw BadConfig("stall_tol must be non-negative");
  if (bounds.size() != dim) {
    std::ostringstream msg;
    msg << "expected " << dim << " bounds, got " << bounds.size();
    throw BadConfig(msg.str());
  }
  for (std::size_t j = 0; j < dim; ++j) {
    if (!std::isfinite(bounds[j].lo) || !std::isfinite(bounds[j].hi) || bounds[j].lo > bounds[j].hi) {
      throw BadConfig("bounds for dimension " + std::to_string(j) + " must satisfy lo <= hi");
    }
  }
}

double counter_uniform(std::uint64_t seed, std::uint64_t iter, std::uint64_t particle, std::uint64_t dim,
                       std::uint64_t stream) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ iter);
  h = splitmix64(h ^ particle);
  h = splitmix64(h ^ dim);
  h = splitmix64(h ^ stream);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

SwarmState initialize(const PsoConfig& cfg, std::size_t dim) {
  cfg.validate(dim);
  SwarmState state;
  state.seed = cfg.seed;
  state.gbest_f = kInf;
  state.particles.resize(cfg.swarm_size);
  for (std::size_t i = 0; i < cfg.swarm_size; ++i) {
    Particle& p = state.particles[i];
    p.x.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      const auto [lo, hi] = cfg.bounds[j];
      p.x[j] = lo + (hi - lo) * counter_uniform(cfg.seed, 0, i, j, kInitPosition);
    }
    p.vel.assign(dim, 0.0);
    p.pbest_x = p.x;
    p.pbest_f = kInf;
  }
  state.gbest_x = state.particles.front().x;
  return state;
}

void evaluate(SwarmState& state, const PsoConfig& cfg, const Objective& objective) {
  const std::size_t n = state.particles.size();
  std::vector<double> f(n, kInf);
  const std::size_t workers = worker_count(cfg, n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) f[i] = safe_eval(objective, state.particles[i].x);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) f[i] = safe_eval(objective, state.particles[i].x);
      });
    }
  }

  // Sequential reduction in particle order keeps ties deterministic.
  for (std::size_t i = 0; i < n; ++i) {
    Particle& p = state.particles[i];
    if (f[i] < p.pbest_f) {
      p.pbest_f = f[i];
      p.pbest_x = p.x;
    }
    if (p.pbest_f < state.gbest_f) {
      state.gbest_f = p.pbest_f;
      state.gbest_x = p.pbest_x;
    }
  }
}

void step(SwarmState& state, const PsoConfig& cfg, const Objective& objective) {
  ++state.iter;
  const std::size_t dim = state.gbest_x.size();
  for (std::size_t i = 0; i < state.particles.size(); ++i) {
    Particle& p = state.particles[i];
    for (std::size_t j = 0; j < dim; ++j) {
      const double r1 = counter_uniform(state.seed, state.iter, i, j, kCognitive);
      const double r2 = counter_uniform(state.seed, state.iter, i, j, kSocial);
      const auto [lo, hi] = cfg.bounds[j];
      const double vmax = 0.5 * (hi - lo);
      double vel = cfg.w * p.vel[j] + cfg.c1 * r1 * (p.pbest_x[j] - p.x[j]) + cfg.c2 * r2 * (state.gbest_x[j] - p.x[j]);
      vel = std::clamp(vel, -vmax, vmax);
      p.vel[j] = vel;
      p.x[j] = std::clamp(p.x[j] + vel, lo, hi);
    }
  }
  evaluate(state, cfg, objective);
}

PsoResult run(const PsoConfig& cfg, std::size_t dim, const Objective& objective) {
  SwarmState state = initialize(cfg, dim);
  evaluate(state, cfg, objective);
  PsoResult result;
  result.history.push_back(state.gbest_f);
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    step(state, cfg, objective);
    result.history.push_back(state.gbest_f);
    const std::size_t len = result.history.size();
    if (cfg.stall_iters > 0 && len > cfg.stall_iters) {
      const double before = result.history[len - 1 - cfg.stall_iters];
      const double gain = before - result.history.back();
      // inf - inf is NaN, which counts as no progress.
      if (!(gain > cfg.stall_tol * std::abs(before))) break;
    }
  }
  result.best_x = state.gbest_x;
  result.best_f = state.gbest_f;
  return result;
}

std::vector<SegmentParams> repair(std::span<const double> x) {
  std::vector<SegmentParams> params(x.size() / 2);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double v = x[2 * i];
    params[i] = {v, std::max(x[2 * i + 1], v * v)};
  }
  return params;
}

TrajectoryFitness::TrajectoryFitness(std::vector<JointConfig> waypoints, JointLimits limits, Bounds v_bounds,
                                     Bounds a_bounds)
    : waypoints_(std::move(waypoints)), limits_(std::move(limits)) {
  if (waypoints_.size() < 2) throw EmptyTrajectory("need at least 2 waypoints");
  std::vector<double> centre;
  for (std::size_t i = 0; i + 1 < waypoints_.size(); ++i) {
    centre.push_back(0.5 * (v_bounds.lo + v_bounds.hi));
    centre.push_back(0.5 * (a_bounds.lo + a_bounds.hi));
  }
  // Reference objectives ignore joint limits; only the profile must exist.
  const Trajectory ref = plan_unchecked(waypoints_, repair(centre));
  s1_ref_ = energy(ref);
  s2_ref_ = cycle_time(ref);
}

double TrajectoryFitness::of_params(const std::vector<SegmentParams>& params) const {
  try {
    const Trajectory traj = plan_trajectory(waypoints_, params, limits_);
    return fitness(energy(traj) / s1_ref_, cycle_time(traj) / s2_ref_);
  } catch (const DomainError&) {
    return kInf;
  }
}

double TrajectoryFitness::operator()(std::span<const double> x) const { return of_params(repair(x)); }

ObjectiveReport TrajectoryFitness::report(const std::vector<SegmentParams>& params) const {
  ObjectiveReport rep = evaluate_objectives(plan_trajectory(waypoints_, params, limits_));
  rep.s1_norm = normalize(std::span<const double>(&rep.s1, 1), Reference{s1_ref_}).front();
  rep.s2_norm = normalize(std::span<const double>(&rep.s2, 1), Reference{s2_ref_}).front();
  rep.ff = fitness(rep.s1_norm, rep.s2_norm);
  std::ostringstream desc;
  desc.precision(9);
  desc << "reference (search-box centre): S1_ref = " << s1_ref_ << ", S2_ref = " << s2_ref_;
  rep.normalization = desc.str();
  return rep;
}

TrajectoryOptimum optimize_trajectory(const std::vector<JointConfig>& waypoints, const JointLimits& limits,
                                      const TrajectoryPsoConfig& cfg) {
  const WaypointReport range = validate_waypoints(limits, waypoints);
  if (!range.ok()) throw LimitViolation(range.describe());
  limits.validate();
  if (!(cfg.v_bounds.lo > 0.0) || !(cfg.a_bounds.lo > 0.0)) {
    throw BadConfig("v and a lower bounds must be positive");
  }
  const std::size_t segments = waypoints.size() - 1;
  for (std::size_t i = 0; i < segments; ++i) {
    if ((waypoints[i + 1] - waypoints[i]).cwiseAbs().maxCoeff() < kDuplicateWaypointTol) {
      throw ZeroLengthSegment("segment " + std::to_string(i + 1) + ": endpoints coincide");
    }
  }

  PsoConfig pso = cfg.pso;
  pso.bounds.clear();
  for (std::size_t i = 0; i < segments; ++i) {
    pso.bounds.push_back(cfg.v_bounds);
    pso.bounds.push_back(cfg.a_bounds);
  }
  pso.validate(2 * segments);

  const TrajectoryFitness objective(waypoints, limits, cfg.v_bounds, cfg.a_bounds);
  const PsoResult best = run(pso, 2 * segments, std::cref(objective));
  if (!std::isfinite(best.best_f)) {
    throw NoFeasiblePoint("no particle found (v, a) parameters satisfying the joint limits");
  }

  TrajectoryOptimum out;
  out.params = repair(best.best_x);
  out.report = objective.report(out.params);
  out.history = best.history;

  // Audit grid: the same (v, a) on every segment.
  const std::size_t k = std::max<std::size_t>(cfg.audit_grid, 2);
  double sum = 0.0;
  out.audit_best = kInf;
  out.audit_worst = -kInf;
  for (std::size_t iv = 0; iv < k; ++iv) {
    const double v = cfg.v_bounds.lo + (cfg.v_bounds.hi - cfg.v_bounds.lo) * static_cast<double>(iv) / (k - 1);
    for (std::size_t ia = 0; ia < k; ++ia) {
      const double a = cfg.a_bounds.lo + (cfg.a_bounds.hi - cfg.a_bounds.lo) * static_cast<double>(ia) / (k - 1);
      std::vector<double> x;
      for (std::size_t s = 0; s < segments; ++s) {
        x.push_back(v);
        x.push_back(a);
      }
      const double f = objective(x);
      if (!std::isfinite(f)) continue;
      ++out.audit_points;
      sum += f;
      out.audit_best = std::min(out.audit_best, f);
      out.audit_worst = std::max(out.audit_worst, f);
    }
  }
  if (out.audit_points > 0) {
    out.audit_mean = sum / static_cast<double>(out.audit_points);
    const double ff = out.report.ff;
    if (ff <= out.audit_worst) out.report.f_worst = improvement(out.audit_worst, ff);
    if (ff <= out.audit_mean) out.report.f_average = improvement(out.audit_mean, ff);
  }
  return out;
}

}  // namespace trapzopt
