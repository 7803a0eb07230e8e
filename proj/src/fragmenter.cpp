#include "fragtree/fragmenter.hpp"

#include <algorithm>
#include <cmath>

namespace fragtree {

double FragmenterPath::evaluate(double t) const {
  if (!(t >= 0.0 && t <= horizon)) throw DomainError("path evaluated outside [0, horizon]");
  double log_m = 0.0;
  for (const auto& j : jumps) {
    if (j.time > t) break;
    log_m += log_factor(j);
  }
  return std::exp(log_m);
}

void FragmenterPath::append(const std::vector<JumpPoint>& more, double new_horizon) {
  for (const auto& j : more) {
    jumps.push_back(j);
    log_stopped_mass += log_factor(j);
  }
  stopped_mass = std::exp(log_stopped_mass);
  horizon = std::max(horizon, new_horizon);
}

FragmenterPath make_path(const std::vector<std::pair<double, double>>& jumps, double horizon) {
  FragmenterPath path;
  std::vector<JumpPoint> points;
  double last = 0.0;
  for (auto [t, factor] : jumps) {
    if (!(t > last || (points.empty() && t >= 0.0))) throw DomainError("jump times must increase");
    if (!(factor >= 0.0 && factor < 1.0)) throw DomainError("jump factor outside [0,1)");
    if (t > horizon) throw DomainError("jump beyond the horizon");
    points.push_back({t, factor, 1.0 - factor});
    last = t;
  }
  path.append(points, horizon);
  return path;
}

double path_integral(const FragmenterPath& path, double rho, double t) {
  double end = std::min(t, path.horizon);
  double log_m = 0.0, last = 0.0, total = 0.0;
  for (const auto& j : path.jumps) {
    if (j.time > end) break;
    total += std::exp(rho * log_m) * (j.time - last);
    last = j.time;
    log_m += log_factor(j);
  }
  total += std::exp(rho * log_m) * (end - last);
  return total;
}

Fragmenter::Fragmenter(const SplittingDensity& f, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw DomainError("truncation epsilon must lie in [0,1)");
  SplittingDensity f_eps = epsilon > 0.0 ? restrict_below(f, 1.0 - epsilon) : f;
  TruncationPolicy policy{epsilon, 0.0};
  if (epsilon > 0.0) policy = make_truncation(f, epsilon);
  state_ = std::make_shared<const State>(State{f, f_eps, policy, FactorSampler(f_eps)});
}

FragmenterPath Fragmenter::simulate(double horizon, Rng& rng) const {
  FragmenterPath path;
  path.epsilon = state_->policy.epsilon;
  extend(path, horizon, rng);
  return path;
}

void Fragmenter::extend(FragmenterPath& path, double new_horizon, Rng& rng) const {
  if (!(new_horizon > path.horizon)) return;
  path.append(sample_points(state_->sampler, path.horizon, new_horizon, rng), new_horizon);
}

ExponentialFunctional Fragmenter::exponential_functional(FragmenterPath& path, double rho,
                                                         double tail_rate, Rng& rng,
                                                         const FunctionalOptions& opts) const {
  if (!(rho > 0.0)) throw DomainError("exponential functional requires rho > 0");
  if (!(tail_rate > 0.0)) throw DomainError("tail correction requires a positive exponent");
  double log_m = 0.0, last = 0.0, body = 0.0;
  std::size_t i = 0;
  double chunk = intensity() > 0.0 ? 64.0 / intensity() : 0.0;
  for (;;) {
    for (; i < path.jumps.size(); ++i) {
      const auto& j = path.jumps[i];
      body += std::exp(rho * log_m) * (j.time - last);
      last = j.time;
      log_m += log_factor(j);
    }
    double level = std::exp(rho * log_m);
    double pending = level * (path.horizon - last);
    if (level / tail_rate < opts.tail_tol) {
      return {body + pending, level / tail_rate, path.horizon};
    }
    if (path.jumps.size() >= opts.jump_budget || chunk == 0.0) {
      throw BudgetError("exponential functional did not reach the tail threshold within " +
                            std::to_string(opts.jump_budget) + " jumps",
                        body + pending);
    }
    extend(path, path.horizon + chunk, rng);
  }
}

FragmenterPath time_change_self_similar(const FragmenterPath& path, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("self-similar time change requires alpha > 0");
  FragmenterPath out;
  out.epsilon = path.epsilon;
  double log_m = 0.0, last = 0.0, clock = 0.0;
  std::vector<JumpPoint> jumps;
  jumps.reserve(path.jumps.size());
  for (const auto& j : path.jumps) {
    clock += std::exp(alpha * log_m) * (j.time - last);
    last = j.time;
    log_m += log_factor(j);
    jumps.push_back({clock, j.factor, j.gap});
  }
  clock += std::exp(alpha * log_m) * (path.horizon - last);
  out.append(jumps, clock);
  return out;
}

}  // namespace fragtree
