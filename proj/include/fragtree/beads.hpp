#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fragtree/fragmenter.hpp"

namespace fragtree {

struct Bead {
  double position = 0.0;
  double mass = 0.0;
  bool tail = false;  // residual mass m M_T parked at the far end
  int child = -1;     // strand attached here once the bead has been split
};

/// [0, length] with one bead per jump of M and a tail pseudo-bead at length.
struct StringOfBeads {
  double length = 0.0;
  double total_mass = 0.0;
  double tail_mass = 0.0;
  std::vector<Bead> beads;
};

/// Beads at m^alpha int_0^t M^alpha with masses m (M_{t-} - M_t); the length
/// adds the tail correction m^alpha M_T^alpha / tail_rate.
StringOfBeads string_of_beads(const FragmenterPath& path, double alpha, double m,
                              double tail_rate);

/// Fixed ingredients of a bead splitting process.
struct GrowthModel {
  Fragmenter fragmenter;
  double alpha;
  double tail_rate;  // exponent of the simulated fragmenter at alpha
  FunctionalOptions options;

  GrowthModel(Fragmenter fr, double alpha, FunctionalOptions opts = {});
};

/// One string of the tree: attached at bead `parent_bead` of strand `parent`.
struct Strand {
  int parent = -1;
  std::size_t parent_bead = 0;
  double attach = 0.0;  // distance from the parent strand's base
  double mass = 0.0;    // m
  FragmenterPath path;
  StringOfBeads string;
  double live_mass = 0.0;  // sum of unsplit bead masses
};

struct GenerationEntry {
  std::size_t step;
  int strand;
  std::size_t bead;
  double mass;
};

/// Rooted binary R-tree grown by size-biased bead splitting.  Strand i ends at
/// leaf i + 1.  Values are immutable; grow() shares unchanged strands.
class BeadTree {
 public:
  static BeadTree start(std::shared_ptr<const GrowthModel> model, Rng& rng,
                        std::uint64_t chain_id = 0);

  /// Pick a bead from mu_n and attach a fresh string of its mass there.
  BeadTree grow(Rng& rng) const;

  struct Selection {
    int strand;
    std::size_t bead;
  };
  /// Bead picked with probability proportional to its mass.  A picked tail
  /// bead extends its strand first, so the tree may change.
  Selection select(Rng& rng);

  /// Attach a given path at a given bead (no randomness beyond the path).
  BeadTree attach(Selection at, FragmenterPath path) const;

  std::size_t leaves() const { return strands_.size(); }
  std::uint64_t chain_id() const { return chain_id_; }
  const Strand& strand(std::size_t i) const { return *strands_[i]; }
  const std::vector<GenerationEntry>& log() const { return log_; }
  const GrowthModel& model() const { return *model_; }

  double total_length() const;
  double total_mass() const;
  double largest_atom() const;
  /// Masses of all unsplit beads (including tails).
  std::vector<double> atoms() const;

 private:
  std::shared_ptr<const GrowthModel> model_;
  std::vector<std::shared_ptr<const Strand>> strands_;
  std::vector<GenerationEntry> log_;
  std::uint64_t chain_id_ = 0;
};

/// Distance from the root to the point at `position` on strand `strand`.
double depth(const BeadTree& tree, int strand, double position);

/// Largest |mass difference| between mu_k and the projection of mu_n onto the
/// step-k tree (pruned subtrees collapsed onto their attachment beads).
double projection_gap(const BeadTree& tree_k, const BeadTree& tree_n);

struct Composition {
  std::vector<int> parts;
  int n = 0;
  bool operator==(const Composition&) const = default;
  std::string str() const;
};

/// Leaves 2..n grouped by the spine bead where their path leaves [[0, Sigma_1]],
/// blocks ordered by distance from the root.
std::vector<std::vector<int>> spinal_blocks(const BeadTree& tree);
Composition spinal_composition(const BeadTree& tree);
/// Composition of the blocks after removing leaf `label`.
Composition delete_leaf(std::vector<std::vector<int>> blocks, int label);

/// Node/edge view: nodes are the root, junctions and leaves.
struct TreeGraph {
  struct Node {
    int parent = -1;
    double edge_length = 0.0;
    int leaf = 0;  // label, 0 for root and junctions
    std::vector<int> children;
  };
  struct Atom {
    int edge;  // id of the node below the edge
    double offset;
    double mass;
    bool tail;
  };
  std::vector<Node> nodes;
  std::vector<Atom> atoms;
  std::vector<int> leaf_nodes;  // node id of leaf i + 1
};

TreeGraph tree_graph(const BeadTree& tree);

/// JSON dump with stable field order.
std::string dump_tree_json(const BeadTree& tree);

}  // namespace fragtree
