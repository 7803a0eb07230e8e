#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fragtree/beads.hpp"

namespace fragtree {

/// Hausdorff distance between the step-k tree and the step-n tree of one
/// chain, both embedded in the latter: the largest height of a subtree pruned
/// when going from n back to k, measured from its attachment point.
double nested_hausdorff(const BeadTree& tree_k, const BeadTree& tree_n);

/// Upper bound on the GHP distance between (R_k, mu_k) and (R_n, mu_n):
/// max of the Hausdorff distance and the largest distance an atom of mu_n
/// travels under the projection onto R_k.
double ghp_bound_nested(const BeadTree& tree_k, const BeadTree& tree_n);

/// Exact Wasserstein-1 distance on the tree between the uniform measure on
/// the leaves and mu_n.
double leaf_wasserstein(const BeadTree& tree);

/// min(1, sqrt(W1)): a bound on the Prohorov distance between the two.
double leaf_measure_gap(const BeadTree& tree);

struct ConvergenceRow {
  std::size_t n;
  double hausdorff_bound;
  double ghp_bound;
  double largest_atom;
  double total_length;
  double leaf_gap;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> steps;
};

/// One row per checkpoint; distances are against the last tree of the chain.
/// `chain` holds the trees at the checkpoints (in increasing size).
ConvergenceReport convergence_report(const std::vector<BeadTree>& chain);

std::string convergence_csv_header();
std::string convergence_csv_rows(std::uint64_t replicate, const ConvergenceReport& report);

}  // namespace fragtree
