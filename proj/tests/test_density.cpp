#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "fragtree/density.hpp"

using namespace fragtree;

namespace {

double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// Brownian: Phi(rho) = sqrt(2) Gamma(rho + 1/2) / Gamma(rho).
double brownian_phi(double rho) { return std::sqrt(2.0) * std::tgamma(rho + 0.5) / std::tgamma(rho); }

// u^{-a-1}(1-u)^{-b-1}: Phi(rho) = B(1-a, -b) - B(1-a+rho, -b), continued in the second argument.
double beta_phi(double a, double b, double rho) {
  double g = std::tgamma(-b);
  return g * (std::tgamma(1 - a) / std::tgamma(1 - a - b) -
              std::tgamma(1 - a + rho) / std::tgamma(1 - a + rho - b));
}

std::vector<double> grid(int n = 1000) {
  std::vector<double> us;
  for (int i = 1; i < n; ++i) us.push_back(static_cast<double>(i) / n);
  return us;
}

SplittingDensity half_indicator() {
  return SplittingDensity("2 on (0,1/2)", [](UnitPoint x) { return x.u < 0.5 ? 2.0 : 0.0; },
                          EndpointExponents{}, 0.0, 0.5);
}

}  // namespace

TEST_CASE("Brownian exponent against the Gamma closed form") {
  auto f = brownian_density();
  CHECK(laplace_exponent(f, 0.0) == 0.0);
  CHECK(laplace_exponent(f, 1.0) == doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-10));
  CHECK(laplace_exponent(f, 2.0) == doctest::Approx(1.5 * std::sqrt(M_PI / 2)).epsilon(1e-10));
  for (double rho : {0.1, 0.25, 0.5, 1.5, 3.0, 5.0, 10.0}) {
    CAPTURE(rho);
    CHECK(laplace_exponent(f, rho) == doctest::Approx(brownian_phi(rho)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(laplace_exponent(f, -0.5), DomainError);
}

TEST_CASE("asymmetric Beta family against continued Beta functions") {
  double a = 0.3, b = 0.6;
  auto f = beta_density(a, b);
  for (double rho : {0.5, 1.0, 2.0, 4.0}) {
    CAPTURE(rho);
    CHECK(laplace_exponent(f, rho) == doctest::Approx(beta_phi(a, b, rho)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(beta_density(1.2, 0.5), DomainError);
}

TEST_CASE("Phi is nondecreasing and concave") {
  for (auto f : {brownian_density(), beta_density(0.3, 0.6), beta_density(-0.5, 0.2)}) {
    std::vector<double> v;
    for (int i = 0; i <= 40; ++i) v.push_back(laplace_exponent(f, 0.25 * i));
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1]);
    for (std::size_t i = 1; i + 1 < v.size(); ++i) CHECK(v[i + 1] - 2 * v[i] + v[i - 1] <= 1e-9);
  }
}

TEST_CASE("phi_second") {
  auto f = brownian_density();
  CHECK(phi_second(f, 0.0) == doctest::Approx(laplace_exponent(f, 1.0)).epsilon(1e-10));
  CHECK(phi_second(f, 1.0) ==
        doctest::Approx(beta_fn(1.5, 0.5) / std::sqrt(2 * M_PI)).epsilon(1e-10));
  // Symmetric f: Phi(rho+1, rho+1) = Phi(rho+1) - Phi*(rho) = Phi(rho+1) - Phi(rho).
  for (double rho : {0.5, 1.0, 2.0}) {
    CHECK(phi_second(f, rho) ==
          doctest::Approx(laplace_exponent(f, rho + 1) - laplace_exponent(f, rho)).epsilon(1e-9));
  }
}

TEST_CASE("symmetrization") {
  auto f = brownian_density();
  auto fs = symmetrize(f);
  for (double u : grid()) CHECK(fs(u) == doctest::Approx(f(u)).epsilon(1e-12));

  auto h = half_indicator();
  auto hs = symmetrize(h);
  for (double u : grid()) {
    double want = u < 0.5 ? 2 * u : u > 0.5 ? 2 * (1 - u) : 0.0;
    CHECK(hs(u) == doctest::Approx(want).epsilon(1e-12));
  }

  for (auto g : {beta_density(0.3, 0.6), h, beta_density(-0.5, 0.2)}) {
    auto gs = symmetrize(g);
    auto gss = symmetrize(gs);
    for (double u : grid()) {
      CHECK(std::abs(gs(u) - gs(1 - u)) <= 1e-10 * std::max(1.0, gs(u)));
      CHECK(gss(u) == doctest::Approx(gs(u)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Phi* two routes agree") {
  for (auto f : {beta_density(0.3, 0.6), beta_density(-0.5, 0.2), half_indicator()}) {
    for (double rho : {0.5, 1.0, 2.0, 3.5}) {
      CAPTURE(rho);
      double a = symmetrized_exponent(f, rho);
      double b = laplace_exponent(symmetrize(f), rho);
      CHECK(std::abs(a - b) < 1e-8);
    }
    CHECK(std::abs(symmetrized_exponent(f, 1e-9)) < 1e-7);
  }
  auto f = brownian_density();
  for (double rho : {0.5, 1.0, 2.0}) {
    CHECK(symmetrized_exponent(f, rho) == doctest::Approx(laplace_exponent(f, rho)).epsilon(1e-9));
  }
}

TEST_CASE("switching duals") {
  auto f = beta_density(0.3, 0.6);
  SUBCASE("no switching") {
    auto d = switch_dual(f, SwitchingFunction::never());
    for (double u : grid(200)) {
      CHECK(d.density(u) == doctest::Approx(f(u)).epsilon(1e-12));
      CHECK(d.switching(u) == 0.0);
    }
    CHECK(switch_rate(f, SwitchingFunction::never()) == 0.0);
  }
  SUBCASE("size-biased switching gives the symmetrization") {
    auto p = SwitchingFunction::size_biased();
    auto d = switch_dual(f, p);
    auto fs = symmetrize(f);
    for (double u : grid(200)) {
      CHECK(d.density(u) == doctest::Approx(fs(u)).epsilon(1e-12));
      CHECK(d.switching(u) == doctest::Approx((1 - u) * f(1 - u) / fs(u)).epsilon(1e-12));
    }
    CHECK(switch_rate(f, p) == doctest::Approx(laplace_exponent(f, 1.0)).epsilon(1e-10));
    CHECK(switch_rate(brownian_density(), p) ==
          doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-10));
  }
  SUBCASE("switch if the other block is bigger") {
    auto d = switch_dual(f, SwitchingFunction::bigger_block());
    for (double u : grid(200)) {
      if (u < 0.5) {
        CHECK(d.density(u) == 0.0);
        CHECK(d.switching(u) == 0.0);
      } else if (u > 0.5) {
        CHECK(u * d.density(u) == doctest::Approx(u * f(u) + (1 - u) * f(1 - u)).epsilon(1e-12));
      }
    }
  }
  SUBCASE("switch rate must be finite") {
    // u^2 p(u) f(u) is not integrable at 1 when p does not vanish there.
    CHECK_THROWS(switch_rate(f, SwitchingFunction::constant(0.3)));
  }
  SUBCASE("round trip and equal rates") {
    SwitchingFunction damped("0.3(1-u)", [](UnitPoint x) { return 0.3 * x.v; }, {}, 0.0, 1.0);
    for (auto p : {SwitchingFunction::size_biased(), SwitchingFunction::bigger_block(), damped}) {
      CAPTURE(p.label());
      auto d = switch_dual(f, p);
      auto back = switch_dual(d.density, d.switching);
      for (double u : grid(200)) {
        if (u == 0.5) continue;
        CHECK(back.density(u) == doctest::Approx(f(u)).epsilon(1e-10));
        CHECK(back.switching(u) == doctest::Approx(p(u)).epsilon(1e-10));
      }
      CHECK(switch_rate(d.density, d.switching) ==
            doctest::Approx(switch_rate(f, p)).epsilon(1e-9));
    }
  }
}

TEST_CASE("kappa block weights") {
  auto f = brownian_density();
  CHECK(kappa_block_weight(f, 1, 1) == doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-10));
  CHECK(kappa_block_weight(f, 2, 1) ==
        doctest::Approx(beta_fn(1.5, 0.5) / std::sqrt(2 * M_PI)).epsilon(1e-10));
  auto g = beta_density(0.3, 0.6);
  CHECK(kappa_block_weight(g, 1, 1) == doctest::Approx(laplace_exponent(g, 1.0)).epsilon(1e-10));
  // Direct Beta reduction: int u^{n1-1}(1-u)^{n2} u^{-a}(1-u)^{-b-1} = B(n1-a, n2-b).
  CHECK(kappa_block_weight(g, 3, 2) == doctest::Approx(beta_fn(3 - 0.3, 2 - 0.6)).epsilon(1e-10));
  CHECK_THROWS(kappa_block_weight(g, 0, 1));
}

TEST_CASE("switching functions stay in [0,1]") {
  for (auto p : {SwitchingFunction::never(), SwitchingFunction::always(),
                 SwitchingFunction::size_biased(), SwitchingFunction::bigger_block(),
                 SwitchingFunction::constant(0.25)}) {
    for (double u : grid(100)) {
      CHECK(p(u) >= 0.0);
      CHECK(p(u) <= 1.0);
    }
  }
  CHECK_THROWS_AS(SwitchingFunction::constant(1.5), DomainError);
}

TEST_CASE("registry and tabulated densities") {
  CHECK(parse_density("brownian").label() == brownian_density().label());
  auto g = parse_density(" beta(0.3, 0.6) ");
  CHECK(laplace_exponent(g, 1.0) == doctest::Approx(beta_phi(0.3, 0.6, 1.0)).epsilon(1e-9));
  CHECK_THROWS_AS(parse_density("gamma(1)"), DomainError);
  CHECK_THROWS_AS(parse_switching("sometimes"), DomainError);
  CHECK(parse_switching("const(0.5)")(0.2) == 0.5);

  // Tabulate the Brownian density and compare exponents.
  std::string path = "tab_density_test.txt";
  {
    std::ofstream out(path);
    out << "# Brownian on a grid\nlabel = tabbed\nat_zero = 1.5\nat_one = 1.5\n";
    for (int i = 1; i < 400; ++i) {
      double u = i / 400.0;
      out << u << " " << brownian_density()(u) << "\n";
    }
  }
  auto t = parse_density("file:" + path);
  CHECK(t.label() == "tabbed");
  CHECK(laplace_exponent(t, 1.0) == doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-4));
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_tabulated_density("no/such/file"), DomainError);
}
