#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fragtree/pointproc.hpp"

namespace fragtree {

/// M_t = prod_{s <= t} F_s on [0, horizon].
struct FragmenterPath {
  std::vector<JumpPoint> jumps;
  double horizon = 0.0;
  double epsilon = 0.0;
  double stopped_mass = 1.0;
  double log_stopped_mass = 0.0;

  /// Right-continuous evaluation; throws DomainError for t outside [0, horizon].
  double evaluate(double t) const;

  /// Append time-sorted jumps beyond the current horizon and move the horizon.
  void append(const std::vector<JumpPoint>& more, double new_horizon);
};

/// A path assembled from explicit (time, factor) pairs; factor 0 is allowed.
FragmenterPath make_path(const std::vector<std::pair<double, double>>& jumps, double horizon);

/// log F computed from whichever of F, 1-F is accurate.
inline double log_factor(const JumpPoint& j) {
  return j.gap < 0.5 ? std::log1p(-j.gap) : std::log(j.factor);
}

/// int_0^{min(t, horizon)} M_s^rho ds as an exact step sum.
double path_integral(const FragmenterPath& path, double rho, double t);

class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, double partial)
      : std::runtime_error(what), partial_(partial) {}
  double partial() const { return partial_; }

 private:
  double partial_;
};

struct FunctionalOptions {
  double tail_tol = 1e-6;
  std::size_t jump_budget = 1000000;
};

struct ExponentialFunctional {
  double body = 0.0;     // int_0^T M^rho
  double tail = 0.0;     // M_T^rho / Phi(rho)
  double horizon = 0.0;  // T
  double value() const { return body + tail; }
};

/// A fragmenter model: the density f, its truncation f_eps = f 1{u <= 1-eps}
/// that is actually simulated, and a factor sampler for f_eps.  eps = 0 means
/// f itself is simulated and must have finite intensity.
class Fragmenter {
 public:
  Fragmenter(const SplittingDensity& f, double epsilon);

  const SplittingDensity& density() const { return state_->f; }
  const SplittingDensity& simulated() const { return state_->f_eps; }
  const TruncationPolicy& policy() const { return state_->policy; }
  double intensity() const { return state_->sampler.mass(); }

  double exponent(double rho) const { return laplace_exponent(state_->f, rho); }
  double truncated_exponent(double rho) const { return laplace_exponent(state_->f_eps, rho); }

  FragmenterPath simulate(double horizon, Rng& rng) const;
  void extend(FragmenterPath& path, double new_horizon, Rng& rng) const;

  /// int_0^inf M^rho, extending the path until M_T^rho / tail_rate < tail_tol
  /// and adding M_T^rho / tail_rate for the rest.  tail_rate is the exponent
  /// of the simulated process at rho.
  ExponentialFunctional exponential_functional(FragmenterPath& path, double rho,
                                               double tail_rate, Rng& rng,
                                               const FunctionalOptions& opts = {}) const;

 private:
  struct State {
    SplittingDensity f;
    SplittingDensity f_eps;
    TruncationPolicy policy;
    FactorSampler sampler;
  };
  std::shared_ptr<const State> state_;
};

/// Jump times s_k mapped to int_0^{s_k} M^alpha; horizon mapped likewise.
FragmenterPath time_change_self_similar(const FragmenterPath& path, double alpha);

}  // namespace fragtree
