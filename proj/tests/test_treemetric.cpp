#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fragtree/stats.hpp"
#include "fragtree/treemetric.hpp"

using namespace fragtree;

namespace {

std::shared_ptr<const GrowthModel> brownian_model() {
  static auto model =
      std::make_shared<const GrowthModel>(Fragmenter(brownian_density(), 1e-3), 0.5);
  return model;
}

std::vector<BeadTree> chain_of(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BeadTree> chain{BeadTree::start(brownian_model(), rng, seed)};
  while (chain.back().leaves() < n) chain.push_back(chain.back().grow(rng));
  return chain;
}

// Line breaking: segment k has length C_k - C_{k-1}, C_k = sqrt(2 Gamma_k), and
// is glued at a uniform point of the tree built so far.  Returns the height of
// the tallest subtree grown between `k` and `n` segments, above R_k.
double line_breaking_hausdorff(int k, int n, Rng& rng) {
  std::vector<double> cut{0.0}, len, pos;
  std::vector<int> parent;
  double gamma = 0.0;
  for (int j = 0; j < n; ++j) {
    gamma += standard_exponential(rng);
    cut.push_back(std::sqrt(2 * gamma));
    len.push_back(cut[j + 1] - cut[j]);
    if (j == 0) {
      parent.push_back(-1);
      pos.push_back(0.0);
      continue;
    }
    double x = uniform01(rng) * cut[j];
    int s = static_cast<int>(std::upper_bound(cut.begin(), cut.begin() + j + 1, x) - cut.begin()) - 1;
    parent.push_back(s);
    pos.push_back(x - cut[s]);
  }
  std::vector<double> h(len);
  double worst = 0.0;
  for (int j = n - 1; j >= k; --j) {
    if (parent[j] >= k) {
      h[parent[j]] = std::max(h[parent[j]], pos[j] + h[j]);
    } else {
      worst = std::max(worst, h[j]);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("Hausdorff increments match line breaking") {
  // Truncation bias in lengths grows with n; 1e-5 keeps it well below KS resolution.
  auto model = std::make_shared<const GrowthModel>(Fragmenter(brownian_density(), 1e-5), 0.5);
  std::vector<double> beads, lines;
  for (int i = 0; i < 600; ++i) {
    Rng rng = make_rng(1, "bead-hausdorff", i);
    BeadTree t = BeadTree::start(model, rng, i);
    while (t.leaves() < 16) t = t.grow(rng);
    BeadTree half = t;
    while (t.leaves() < 32) t = t.grow(rng);
    beads.push_back(nested_hausdorff(half, t));
    Rng r2 = make_rng(1, "line-breaking-hausdorff", i);
    lines.push_back(line_breaking_hausdorff(16, 32, r2));
  }
  CHECK(ks_two_sample(beads, lines).p_value > 0.01);
}

TEST_CASE("distances along one chain") {
  auto chain = chain_of(12, 1);
  const auto& last = chain.back();
  CHECK(nested_hausdorff(last, last) == 0.0);
  CHECK(ghp_bound_nested(last, last) == 0.0);
  CHECK(nested_hausdorff(chain[0], chain[1]) == doctest::Approx(chain[1].strand(1).string.length));
  double prev = INFINITY;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    double h = nested_hausdorff(chain[k], last);
    CHECK(h <= prev);
    CHECK(ghp_bound_nested(chain[k], last) >= h);
    prev = h;
    if (k > 0) CHECK(chain[k].total_length() > chain[k - 1].total_length());
  }
  Rng other(99);
  BeadTree stranger = BeadTree::start(brownian_model(), other, 5);
  CHECK_THROWS_AS(nested_hausdorff(stranger, last), DomainError);
  CHECK_THROWS_AS(nested_hausdorff(last, chain[0]), DomainError);
}

TEST_CASE("leaf measure distance") {
  auto chain = chain_of(10, 2);
  // One leaf: all mass travels to the tip.
  const auto& s = chain[0].strand(0).string;
  double w1 = 0.0;
  for (const auto& b : s.beads) w1 += b.mass * (s.length - b.position);
  CHECK(leaf_wasserstein(chain[0]) == doctest::Approx(w1).epsilon(1e-12));
  for (const auto& t : chain) {
    double w = leaf_wasserstein(t);
    CHECK(w >= 0.0);
    CHECK(w <= t.total_length());
    CHECK(leaf_measure_gap(t) <= 1.0);
    CHECK(leaf_measure_gap(t) == doctest::Approx(std::min(1.0, std::sqrt(w))));
  }
}

TEST_CASE("Hausdorff distance to the final tree decreases with k") {
  int wins = 0, chains = 200;
  for (int i = 0; i < chains; ++i) {
    auto chain = chain_of(64, 1000 + i);
    double h8 = nested_hausdorff(chain[7], chain[63]);
    double h32 = nested_hausdorff(chain[31], chain[63]);
    wins += h32 < h8;
  }
  CHECK(wins >= 0.95 * chains);
}

TEST_CASE("convergence report") {
  auto chain = chain_of(4, 3);
  auto single = convergence_report({chain.back()});
  REQUIRE(single.steps.size() == 1);
  CHECK(single.steps[0].hausdorff_bound == 0.0);
  CHECK(single.steps[0].ghp_bound == 0.0);
  CHECK(single.steps[0].n == 4);
  CHECK(convergence_report({}).steps.empty());

  auto report = convergence_report(chain);
  REQUIRE(report.steps.size() == 4);
  CHECK(report.steps[0].largest_atom >= report.steps[3].largest_atom);
  CHECK(convergence_csv_header() ==
        "replicate,n,hausdorff_bound,ghp_bound,largest_atom,total_length,leaf_gap\n");
  std::istringstream rows(convergence_csv_rows(9, report));
  std::string line;
  int count = 0;
  while (std::getline(rows, line)) {
    ++count;
    CHECK(line.rfind("9,", 0) == 0);
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
  CHECK(count == 4);
}
