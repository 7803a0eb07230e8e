#include "fragtree/treemetric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fragtree/format.hpp"

namespace fragtree {

namespace {

void check_chain(const BeadTree& tree_k, const BeadTree& tree_n) {
  if (tree_k.chain_id() != tree_n.chain_id() || tree_k.leaves() > tree_n.leaves()) {
    throw DomainError("trees are not states of one growth chain");
  }
  for (std::size_t s = 0; s < tree_k.leaves(); ++s) {
    if (tree_k.strand(s).mass != tree_n.strand(s).mass ||
        tree_k.strand(s).parent != tree_n.strand(s).parent) {
      throw DomainError("trees are not states of one growth chain");
    }
  }
}

// Height of the subtree hanging from each strand's attachment point.
std::vector<double> subtree_heights(const BeadTree& tree) {
  std::size_t n = tree.leaves();
  std::vector<double> h(n, 0.0);
  for (std::size_t s = n; s-- > 0;) {
    const Strand& st = tree.strand(s);
    h[s] = std::max(h[s], st.string.length);
    if (st.parent >= 0) h[st.parent] = std::max(h[st.parent], st.attach + h[s]);
  }
  return h;
}

}  // namespace

double nested_hausdorff(const BeadTree& tree_k, const BeadTree& tree_n) {
  check_chain(tree_k, tree_n);
  std::size_t k = tree_k.leaves();
  auto h = subtree_heights(tree_n);
  double worst = 0.0;
  for (std::size_t s = k; s < tree_n.leaves(); ++s) {
    if (tree_n.strand(s).parent < static_cast<int>(k)) worst = std::max(worst, h[s]);
  }
  return worst;
}

double ghp_bound_nested(const BeadTree& tree_k, const BeadTree& tree_n) {
  double hausdorff = nested_hausdorff(tree_k, tree_n);
  std::size_t k = tree_k.leaves();
  // Distance from each strand's base to the point of R_k it projects to.
  std::vector<double> lift(tree_n.leaves(), 0.0);
  double transport = 0.0;
  for (std::size_t s = k; s < tree_n.leaves(); ++s) {
    const Strand& st = tree_n.strand(s);
    if (st.parent >= static_cast<int>(k)) lift[s] = lift[st.parent] + st.attach;
    for (const auto& b : st.string.beads) {
      if (b.mass > 0.0) transport = std::max(transport, lift[s] + b.position);
    }
  }
  return std::max(hausdorff, transport);
}

double leaf_wasserstein(const BeadTree& tree) {
  std::size_t n = tree.leaves();
  double leaf_mass = 1.0 / static_cast<double>(n);
  std::vector<double> excess(n, 0.0);  // nu - mu of the subtree above each strand base
  double w1 = 0.0;
  for (std::size_t s = n; s-- > 0;) {
    const Strand& st = tree.strand(s);
    double d = leaf_mass;
    double prev = st.string.length;
    for (auto it = st.string.beads.rbegin(); it != st.string.beads.rend(); ++it) {
      w1 += std::abs(d) * (prev - it->position);
      prev = it->position;
      d -= it->mass;
      if (it->child >= 0) d += excess[it->child];
    }
    w1 += std::abs(d) * prev;
    excess[s] = d;
  }
  return w1;
}

double leaf_measure_gap(const BeadTree& tree) {
  return std::min(1.0, std::sqrt(leaf_wasserstein(tree)));
}

ConvergenceReport convergence_report(const std::vector<BeadTree>& chain) {
  ConvergenceReport report;
  if (chain.empty()) return report;
  const BeadTree& last = chain.back();
  for (const auto& tree : chain) {
    report.steps.push_back({tree.leaves(), nested_hausdorff(tree, last),
                            ghp_bound_nested(tree, last), tree.largest_atom(),
                            tree.total_length(), leaf_measure_gap(tree)});
  }
  return report;
}

std::string convergence_csv_header() {
  return "replicate,n,hausdorff_bound,ghp_bound,largest_atom,total_length,leaf_gap\n";
}

std::string convergence_csv_rows(std::uint64_t replicate, const ConvergenceReport& report) {
  std::ostringstream os;
  for (const auto& r : report.steps) {
    os << replicate << ',' << r.n << ',' << fmt(r.hausdorff_bound) << ',' << fmt(r.ghp_bound)
       << ',' << fmt(r.largest_atom) << ',' << fmt(r.total_length) << ',' << fmt(r.leaf_gap)
       << '\n';
  }
  return os.str();
}

}  // namespace fragtree
