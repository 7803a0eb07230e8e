#include "fragtree/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace fragtree {

std::vector<double> line_breaking_lengths(int n, Rng& rng) {
  if (n < 1) throw DomainError("line breaking needs n >= 1");
  std::vector<double> out;
  double gamma = 0.0;
  for (int k = 0; k < n; ++k) {
    gamma += standard_exponential(rng);
    out.push_back(std::sqrt(2.0 * gamma));
  }
  return out;
}

double line_breaking_moment(int n, double rho) {
  return std::pow(2.0, rho / 2) * std::exp(std::lgamma(n + rho / 2) - std::lgamma(n));
}

PDSample pd_sample(double alpha, double theta, int k_atoms, Rng& rng) {
  if (!(alpha >= 0.0 && alpha < 1.0) || !(theta > -alpha) || k_atoms < 1) {
    throw DomainError("PD(alpha, theta) needs 0 <= alpha < 1, theta > -alpha, k >= 1");
  }
  PDSample out{alpha, theta, {}, 1.0};
  double rest = 1.0;
  for (int j = 1; j <= k_atoms; ++j) {
    double w = beta_variate(rng, 1.0 - alpha, theta + j * alpha);
    out.atoms.push_back(rest * w);
    rest *= 1.0 - w;
  }
  out.residual = rest;
  std::sort(out.atoms.begin(), out.atoms.end(), std::greater<>());
  return out;
}

double pd_diversity_moment(double alpha, double theta, double rho) {
  return std::exp(std::lgamma(theta / alpha + rho + 1) + std::lgamma(theta + 1) -
                  std::lgamma(theta + rho * alpha + 1) - std::lgamma(theta / alpha + 1));
}

DiversityEstimate diversity_estimate(std::vector<double> atoms) {
  if (atoms.size() < 50) throw DomainError("diversity estimate needs at least 50 atoms");
  std::sort(atoms.begin(), atoms.end(), std::greater<>());
  std::size_t n = atoms.size();
  std::vector<double> window;
  for (std::size_t k = n - n / 4; k <= n; ++k) {
    window.push_back(static_cast<double>(k) * std::sqrt(atoms[k - 1]));
  }
  std::sort(window.begin(), window.end());
  auto quantile = [&](double q) { return window[static_cast<std::size_t>(q * (window.size() - 1))]; };
  double root_pi = std::sqrt(std::numbers::pi);
  return {root_pi * quantile(0.5), root_pi * (quantile(0.75) - quantile(0.25))};
}

double gamma_identity_gap(int n, double rho) {
  double lhs = std::lgamma(2 * n + rho) + std::lgamma(n + 0.5) - std::lgamma(n + rho / 2 + 0.5) -
               std::lgamma(2 * n);
  double rhs = rho * std::log(2.0) + std::lgamma(n + rho / 2) - std::lgamma(n);
  return std::abs(std::expm1(lhs - rhs));
}

long long shape_count(int n) {
  long long c = 1;
  for (int k = 3; k <= 2 * n - 3; k += 2) c *= k;
  return c;
}

namespace {

struct Coded {
  std::string code;
  int min_label;
};

Coded encode(const TreeGraph& g, int node) {
  const auto& nd = g.nodes[node];
  if (nd.children.empty()) return {std::to_string(nd.leaf), nd.leaf};
  if (nd.children.size() == 1) return encode(g, nd.children[0]);
  std::vector<Coded> parts;
  for (int c : nd.children) parts.push_back(encode(g, c));
  std::sort(parts.begin(), parts.end(),
            [](const Coded& a, const Coded& b) { return a.min_label < b.min_label; });
  std::string code = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) code += (i ? "," : "") + parts[i].code;
  code += ")";
  return {code, parts.front().min_label};
}

int min_label(const TreeGraph& g, int node, std::vector<int>& memo) {
  if (memo[node] > 0) return memo[node];
  const auto& nd = g.nodes[node];
  int best = nd.leaf > 0 ? nd.leaf : 1 << 30;
  for (int c : nd.children) best = std::min(best, min_label(g, c, memo));
  return memo[node] = best;
}

void depth_first(const TreeGraph& g, int node, std::vector<int>& memo, std::vector<double>& out) {
  if (node != 0) out.push_back(g.nodes[node].edge_length);
  std::vector<int> kids = g.nodes[node].children;
  std::sort(kids.begin(), kids.end(),
            [&](int a, int b) { return min_label(g, a, memo) < min_label(g, b, memo); });
  for (int c : kids) depth_first(g, c, memo, out);
}

void require_equal_leaves(const std::vector<BeadTree>& trees) {
  if (trees.empty()) throw DomainError("no trees given");
  for (const auto& t : trees) {
    if (t.leaves() != trees.front().leaves()) throw DomainError("trees have different leaf counts");
  }
}

}  // namespace

std::string shape_code(const BeadTree& tree) { return encode(tree_graph(tree), 0).code; }

ShapeCensus shape_census(const std::vector<std::string>& codes, int n) {
  if (codes.empty()) throw DomainError("shape census needs at least one tree");
  if (n > 6) throw DomainError("shape census supports at most 6 leaves");
  ShapeCensus census;
  census.n = n;
  for (const auto& c : codes) ++census.counts[c];
  long long shapes = shape_count(n);
  std::vector<double> observed, expected;
  double each = static_cast<double>(codes.size()) / static_cast<double>(shapes);
  for (const auto& [code, count] : census.counts) {
    observed.push_back(static_cast<double>(count));
    expected.push_back(each);
  }
  // Shapes never seen enter as empty cells.
  observed.resize(static_cast<std::size_t>(shapes), 0.0);
  expected.resize(static_cast<std::size_t>(shapes), each);
  census.chi2 = chi_square_gof(observed, expected);
  return census;
}

ShapeCensus shape_census(const std::vector<BeadTree>& trees) {
  require_equal_leaves(trees);
  std::vector<std::string> codes;
  for (const auto& t : trees) codes.push_back(shape_code(t));
  return shape_census(codes, static_cast<int>(trees.front().leaves()));
}

std::vector<double> relative_segments(const BeadTree& tree) {
  TreeGraph g = tree_graph(tree);
  std::vector<int> memo(g.nodes.size(), 0);
  std::vector<double> out;
  depth_first(g, 0, memo, out);
  double total = 0.0;
  for (double x : out) total += x;
  for (double& x : out) x /= total;
  return out;
}

SegmentReport segment_length_test(const std::vector<std::vector<double>>& segments,
                                  const std::vector<std::string>& shapes, int n) {
  if (segments.empty() || segments.size() != shapes.size()) {
    throw DomainError("segment test needs one shape per segment vector");
  }
  SegmentReport report;
  report.n = n;
  std::size_t coords = 2 * static_cast<std::size_t>(n) - 1;
  std::vector<std::vector<double>> columns(coords);
  for (const auto& seg : segments) {
    if (seg.size() != coords) throw DomainError("segment vectors must have 2n-1 entries");
    for (std::size_t i = 0; i < coords; ++i) columns[i].push_back(seg[i]);
  }
  if (n == 1) {
    report.marginals.push_back({0.0, 1.0, 0.0});
    return report;
  }
  double b = 2.0 * n - 2.0;
  auto cdf = [b](double x) { return x <= 0 ? 0.0 : x >= 1 ? 1.0 : -std::expm1(b * std::log1p(-x)); };
  for (auto& col : columns) report.marginals.push_back(ks_one_sample(col, cdf));

  std::map<std::string, std::size_t> index;
  for (const auto& s : shapes) index.emplace(s, index.size());
  std::vector<std::vector<double>> table(index.size(), std::vector<double>(4, 0.0));
  for (std::size_t r = 0; r < shapes.size(); ++r) {
    double u = cdf(columns[0][r]);
    std::size_t q = std::min<std::size_t>(3, static_cast<std::size_t>(u * 4));
    table[index[shapes[r]]][q] += 1.0;
  }
  report.shape_independence = index.size() > 1 ? chi_square_table(table) : TestResult{};
  return report;
}

SegmentReport segment_length_test(const std::vector<BeadTree>& trees) {
  require_equal_leaves(trees);
  std::vector<std::vector<double>> segments;
  std::vector<std::string> shapes;
  for (const auto& t : trees) {
    segments.push_back(relative_segments(t));
    shapes.push_back(shape_code(t));
  }
  return segment_length_test(segments, shapes, static_cast<int>(trees.front().leaves()));
}

std::vector<double> spine_mass_increments(const BeadTree& tree, int windows) {
  const Strand& spine = tree.strand(0);
  std::vector<double> out(windows, 0.0);
  double length = spine.string.length;
  for (const auto& b : spine.string.beads) {
    double mass = b.mass;
    if (b.child >= 0) mass = tree.strand(b.child).mass;
    int w = std::min(windows - 1, static_cast<int>(b.position / length * windows));
    out[w] += mass;
  }
  return out;
}

}  // namespace fragtree
