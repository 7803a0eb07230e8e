#include <cmath>

#include "doctest.h"
#include "fragtree/rng.hpp"
#include "fragtree/stats.hpp"

using namespace fragtree;

TEST_CASE("running moments match two-pass formulas") {
  std::vector<double> xs = {1.5, -2.0, 3.25, 0.0, 7.0, 2.0};
  RunningStats st;
  for (double x : xs) st.add(x);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  CHECK(st.mean() == doctest::Approx(mean).epsilon(1e-14));
  CHECK(st.variance() == doctest::Approx(ss / (xs.size() - 1)).epsilon(1e-14));
  CHECK(st.se() == doctest::Approx(std::sqrt(ss / (xs.size() - 1) / xs.size())).epsilon(1e-14));
}

TEST_CASE("Kolmogorov distribution tail") {
  CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(2e-3));
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(10.0) < 1e-80);
}

TEST_CASE("KS tests separate matching and shifted samples") {
  Rng rng(7);
  std::vector<double> a, b, c;
  for (int i = 0; i < 5000; ++i) {
    a.push_back(uniform01(rng));
    b.push_back(uniform01(rng));
    c.push_back(std::pow(uniform01(rng), 1.2));
  }
  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_one_sample(a, uniform).p_value > 0.01);
  CHECK(ks_one_sample(c, uniform).p_value < 1e-6);
  CHECK(ks_two_sample(a, b).p_value > 0.01);
  CHECK(ks_two_sample(a, c).p_value < 1e-6);
  // Statistic of a tiny hand-checked sample.
  auto r = ks_one_sample({0.1, 0.4, 0.7}, uniform);
  CHECK(r.statistic == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("chi-square against hand computations") {
  auto g = chi_square_gof({10, 20, 30}, {20, 20, 20});
  CHECK(g.statistic == doctest::Approx(10.0));
  CHECK(g.df == 2.0);
  CHECK(g.p_value == doctest::Approx(std::exp(-5.0)).epsilon(1e-10));
  CHECK(chi_square_gof({1, 0}, {0, 1}).p_value == 0.0);

  auto t = chi_square_table({{10, 20}, {20, 10}});
  CHECK(t.statistic == doctest::Approx(20.0 / 3.0));
  CHECK(t.df == 1.0);
  CHECK(t.p_value == doctest::Approx(std::erfc(std::sqrt(10.0 / 3.0))).epsilon(1e-10));
}

TEST_CASE("correlation and z-scores") {
  std::vector<double> x = {1, 2, 3, 4}, y = {2, 4, 6, 8}, z = {4, 3, 2, 1};
  CHECK(correlation(x, y) == doctest::Approx(1.0));
  CHECK(correlation(x, z) == doctest::Approx(-1.0));
  CHECK(z_score(1.5, 0.5, 1.0) == doctest::Approx(1.0));
  CHECK(z_score(1.0, 0.0, 1.0) == 0.0);
}
