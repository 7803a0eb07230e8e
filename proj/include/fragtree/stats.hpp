#pragma once

#include <cstddef>
#include <cmath>
#include <functional>
#include <vector>

namespace fragtree {

/// Welford accumulator.  Feed values in a fixed order for reproducible output.
class RunningStats {
 public:
  void add(double x) {
    ++n_;
    double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double se() const { return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double df = 0.0;
};

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

TestResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Pearson goodness of fit; cells with zero expectation must have zero counts.
TestResult chi_square_gof(const std::vector<double>& observed, const std::vector<double>& expected);

/// Pearson test of homogeneity/independence for an r x c table of counts.
TestResult chi_square_table(const std::vector<std::vector<double>>& table);

double correlation(const std::vector<double>& x, const std::vector<double>& y);

/// (estimate - reference) / se, with se = 0 mapped to 0 when they agree.
double z_score(double estimate, double se, double reference);

}  // namespace fragtree
