#pragma once

#include <optional>
#include <vector>

#include "fragtree/density.hpp"
#include "fragtree/rng.hpp"

namespace fragtree {

/// A point (s, F_s) of the jump process.  `gap` is 1 - factor, kept separately
/// so that mass decrements of factors near 1 are exact.
struct JumpPoint {
  double time = 0.0;
  double factor = 0.0;
  double gap = 1.0;
};

/// Jumps with factor above 1 - epsilon are not simulated.  bias_bound is
/// int_{1-eps}^1 (-log u) u f(u) du, the discarded log-mass per unit time.
struct TruncationPolicy {
  double epsilon = 1e-3;
  double bias_bound = 0.0;
};

TruncationPolicy make_truncation(const SplittingDensity& f, double epsilon);

/// Inverse-CDF sampler for factors with density proportional to u f(u).
/// The CDF is tabulated at knots of the quadrature coordinate of each smooth
/// piece and interpolated by a monotone cubic Hermite spline.
class FactorSampler {
 public:
  explicit FactorSampler(const SplittingDensity& f, int knots = 4096);

  /// int u f(u) du; zero for a degenerate density.
  double mass() const { return mass_; }
  bool degenerate() const { return !(mass_ > 0.0); }

  UnitPoint sample(Rng& rng) const;

  /// Largest deviation of the normalized spline CDF from quadrature at the
  /// midpoints between knots.
  double midpoint_error() const;

 private:
  struct Piece {
    UnitPiece map;
    std::vector<double> t;    // knots
    std::vector<double> cdf;  // cumulative mass at knots (unnormalized, within piece)
    std::vector<double> slope;
    std::vector<std::size_t> guide;
  };
  double spline(const Piece& p, std::size_t i, double s) const;
  double spline_slope(const Piece& p, std::size_t i, double s) const;

  SplittingDensity f_;
  std::vector<Piece> pieces_;
  std::vector<double> offsets_;  // cumulative mass before each piece
  double mass_ = 0.0;
};

/// Poisson points on [t0, t1) with intensity ds u f(u) du, time-sorted.
std::vector<JumpPoint> sample_points(const FactorSampler& sampler, double t0, double t1, Rng& rng);

struct PointSample {
  std::vector<JumpPoint> points;
  bool degenerate = false;
};

/// Points on [0, horizon) for the density f restricted to factors <= 1 - eps.
/// Builds a FactorSampler on every call; reuse a sampler for repeated draws.
PointSample sample_points(const SplittingDensity& f, double horizon, const TruncationPolicy& policy,
                          Rng& rng);

struct Mark {
  double time;
  std::size_t index;
};

/// Earliest point whose independent Bernoulli(p(F)) mark is set.
std::optional<Mark> first_marked_time(const std::vector<JumpPoint>& points,
                                      const SwitchingFunction& p, Rng& rng);

/// prod over points with time <= t of (1 - p(F)).
double conditional_survival(const std::vector<JumpPoint>& points, const SwitchingFunction& p,
                            double t);

}  // namespace fragtree
