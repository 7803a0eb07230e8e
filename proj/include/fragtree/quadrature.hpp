#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fragtree {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_panels = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Raised when adaptive quadrature cannot meet its tolerance; carries the
/// best estimate and the residual error estimate at the point of failure.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double value, double residual)
      : std::runtime_error(what), value_(value), residual_(residual) {}
  double value() const { return value_; }
  double residual() const { return residual_; }

 private:
  double value_;
  double residual_;
};

/// Globally adaptive 21-point Gauss-Kronrod on [a, b] (bisect the panel with
/// the largest error estimate until the total meets the tolerance).
QuadratureResult integrate_adaptive(const std::function<double(double)>& g, double a, double b,
                                    const QuadratureOptions& opts = {});

/// A point of (0,1) carried together with its exact complement v = 1 - u.
/// Near u = 1 the complement is generated directly so that v keeps full
/// relative precision.
struct UnitPoint {
  double u;
  double v;
};

/// One panel of the unit interval in a coordinate t in [0,1] for which the
/// integrand is smooth.  Pieces never straddle 1/2: the left half is
/// parameterized in u, the right half in v = 1 - u.  u is increasing in t.
struct UnitPiece {
  enum class Map { Linear, PowerAtZero, PowerAtOne, LogLeft, LogRight };
  double lo = 0.0;  // in u
  double hi = 0.0;  // in u
  Map map = Map::Linear;
  double power = 1.0;

  UnitPoint point(double t) const;
  /// du/dt at t.
  double jacobian(double t) const;
};

/// Declared endpoint behavior of a density, f(u) ~ u^{-at_zero} near 0 and
/// f(u) ~ (1-u)^{-at_one} near 1.  Used only to pick substitutions.  When
/// at_one >= 1 the integrand is assumed to carry one vanishing factor (1-u)
/// near 1, as every convergent functional of such a density does.
struct EndpointExponents {
  double at_zero = 0.0;
  double at_one = 0.0;
};

/// Split [lo, hi] (subset of [0,1]) at 1/2 and at the given breakpoints and
/// choose a coordinate map per piece.
std::vector<UnitPiece> unit_pieces(double lo, double hi, const std::vector<double>& breakpoints,
                                   EndpointExponents exps);

/// Integrate h(u, 1-u) over [lo, hi] using unit_pieces.  h is expected to
/// behave like u f(u) near 0 for a density f with the given exponents.
QuadratureResult integrate_unit(const std::function<double(UnitPoint)>& h, double lo, double hi,
                                const std::vector<double>& breakpoints, EndpointExponents exps,
                                const QuadratureOptions& opts = {});

}  // namespace fragtree
