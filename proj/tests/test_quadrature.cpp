#include <cmath>

#include "doctest.h"
#include "fragtree/quadrature.hpp"

using namespace fragtree;

namespace {
double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}
}  // namespace

TEST_CASE("adaptive rule integrates smooth functions") {
  auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate_adaptive([](double) { return 3.0; }, 1.0, 1.0).value == 0.0);
}

TEST_CASE("Beta integrals with integrable endpoint singularities") {
  for (double a : {0.5, 0.8, 1.0, 2.5}) {
    for (double b : {0.5, 0.7, 1.0, 3.0}) {
      // Exponents describe f where the integrand is u f.
      EndpointExponents e{2.0 - a, std::max(0.0, 1.0 - b)};
      auto r = integrate_unit(
          [a, b](UnitPoint x) { return std::pow(x.u, a - 1.0) * std::pow(x.v, b - 1.0); }, 0.0,
          1.0, {}, e);
      CAPTURE(a);
      CAPTURE(b);
      CHECK(r.value == doctest::Approx(beta_fn(a, b)).epsilon(1e-10));
    }
  }
}

TEST_CASE("breakpoints and sub-intervals") {
  auto h = [](UnitPoint x) { return x.u < 0.3 ? 1.0 : 2.0; };
  auto r = integrate_unit(h, 0.1, 0.9, {0.3}, {});
  CHECK(r.value == doctest::Approx(0.2 + 1.2).epsilon(1e-12));
}

TEST_CASE("unit points carry an accurate complement") {
  auto pieces = unit_pieces(0.0, 1.0, {}, EndpointExponents{1.5, 1.5});
  REQUIRE(!pieces.empty());
  for (const auto& p : pieces) {
    for (double t : {1e-9, 1e-4, 0.3, 0.7, 1.0 - 1e-9}) {
      UnitPoint x = p.point(t);
      CHECK(x.u >= p.lo);
      CHECK(x.u <= p.hi);
      CHECK(std::abs(x.u + x.v - 1.0) < 1e-15);
      CHECK(x.v > 0.0);
    }
  }
  // Pieces never straddle 1/2.
  for (const auto& p : pieces) CHECK((p.hi <= 0.5 || p.lo >= 0.5));
}

TEST_CASE("failure carries the best estimate") {
  QuadratureOptions opts;
  opts.max_panels = 3;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-15;
  bool thrown = false;
  try {
    integrate_adaptive([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); }, 0.0, 1.0, opts);
  } catch (const QuadratureError& e) {
    thrown = true;
    CHECK(std::isfinite(e.value()));
    CHECK(e.residual() > 0.0);
  }
  CHECK(thrown);
}
