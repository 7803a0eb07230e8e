#pragma once

#include <map>
#include <string>
#include <vector>

#include "fragtree/beads.hpp"
#include "fragtree/stats.hpp"

namespace fragtree {

/// sqrt(2 Gamma_k), k = 1..n, for Gamma_k partial sums of standard exponentials.
std::vector<double> line_breaking_lengths(int n, Rng& rng);

/// 2^{rho/2} Gamma(n + rho/2) / Gamma(n).
double line_breaking_moment(int n, double rho);

struct PDSample {
  double alpha = 0.0;
  double theta = 0.0;
  std::vector<double> atoms;  // decreasing
  double residual = 0.0;
};

/// First k sticks W_j prod_{i<j}(1 - W_i), W_j ~ Beta(1 - alpha, theta + j alpha), ranked.
PDSample pd_sample(double alpha, double theta, int k_atoms, Rng& rng);

/// E S_{alpha,theta}^rho = Gamma(theta/alpha + rho + 1) Gamma(theta + 1)
///                         / (Gamma(theta + rho alpha + 1) Gamma(theta/alpha + 1)).
double pd_diversity_moment(double alpha, double theta, double rho);

struct DiversityEstimate {
  double value = 0.0;
  double dispersion = 0.0;  // interquartile range of the window values times sqrt(pi)
};

/// sqrt(pi) times the median of k P_k^{1/2} over the last quartile of ranks.
DiversityEstimate diversity_estimate(std::vector<double> atoms);

/// Relative gap between Gamma(2n+rho)Gamma(n+1/2)/(Gamma(n+rho/2+1/2)Gamma(2n))
/// and 2^rho Gamma(n+rho/2)/Gamma(n).
double gamma_identity_gap(int n, double rho);

/// 1 x 3 x ... x (2n-3).
long long shape_count(int n);

/// Leaf-labelled topology; children ordered by smallest label.
std::string shape_code(const BeadTree& tree);

struct ShapeCensus {
  int n = 0;
  std::map<std::string, long long> counts;
  TestResult chi2;
};

ShapeCensus shape_census(const std::vector<BeadTree>& trees);
/// Same from precomputed shape codes of trees with n leaves.
ShapeCensus shape_census(const std::vector<std::string>& codes, int n);

/// Edge lengths over the total length, in depth-first order (root edge first,
/// subtrees by smallest label).
std::vector<double> relative_segments(const BeadTree& tree);

struct SegmentReport {
  int n = 0;
  std::vector<TestResult> marginals;  // KS against Beta(1, 2n-2) per coordinate
  TestResult shape_independence;      // shape x first-segment quartile
};

SegmentReport segment_length_test(const std::vector<BeadTree>& trees);
SegmentReport segment_length_test(const std::vector<std::vector<double>>& segments,
                                  const std::vector<std::string>& shapes, int n);

/// Masses of the spine beads falling in `windows` equal parts of [0, length].
std::vector<double> spine_mass_increments(const BeadTree& tree, int windows);

}  // namespace fragtree
