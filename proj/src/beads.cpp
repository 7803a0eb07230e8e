#include "fragtree/beads.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"

namespace fragtree {

StringOfBeads string_of_beads(const FragmenterPath& path, double alpha, double m,
                              double tail_rate) {
  if (!(alpha > 0.0) || !(m > 0.0)) throw DomainError("string of beads needs alpha > 0, m > 0");
  if (!(tail_rate > 0.0)) throw DomainError("string of beads needs a positive tail rate");
  StringOfBeads out;
  double scale = std::pow(m, alpha);
  double log_m = 0.0, last = 0.0, body = 0.0;
  out.beads.reserve(path.jumps.size() + 1);
  for (const auto& j : path.jumps) {
    body += std::exp(alpha * log_m) * (j.time - last);
    last = j.time;
    double mass = m * std::exp(log_m) * j.gap;
    out.beads.push_back({scale * body, mass, false, -1});
    out.total_mass += mass;
    log_m += log_factor(j);
  }
  double level = std::exp(alpha * log_m);
  body += level * (path.horizon - last);
  out.length = scale * (body + level / tail_rate);
  out.tail_mass = m * std::exp(log_m);
  out.total_mass += out.tail_mass;
  out.beads.push_back({out.length, out.tail_mass, true, -1});
  return out;
}

GrowthModel::GrowthModel(Fragmenter fr, double alpha_, FunctionalOptions opts)
    : fragmenter(std::move(fr)), alpha(alpha_), tail_rate(0.0), options(opts) {
  if (!(alpha > 0.0)) throw DomainError("bead splitting requires alpha > 0");
  tail_rate = laplace_exponent(fragmenter.simulated(), alpha);
}

namespace {

double live_mass(const StringOfBeads& s) {
  double total = 0.0;
  for (const auto& b : s.beads) total += b.mass;
  return total;
}

std::shared_ptr<Strand> fresh_strand(const GrowthModel& model, double m, Rng& rng) {
  auto st = std::make_shared<Strand>();
  st->mass = m;
  st->path = model.fragmenter.simulate(0.0, rng);
  model.fragmenter.exponential_functional(st->path, model.alpha, model.tail_rate, rng,
                                          model.options);
  st->string = string_of_beads(st->path, model.alpha, m, model.tail_rate);
  st->live_mass = live_mass(st->string);
  return st;
}

// Index of the first positive-mass bead in [from, end) at which the running
// mass exceeds target; falls back to the last positive bead.
std::size_t pick_bead(const std::vector<Bead>& beads, std::size_t from, double target) {
  double run = 0.0;
  std::size_t last_positive = beads.size();
  for (std::size_t i = from; i < beads.size(); ++i) {
    if (!(beads[i].mass > 0.0)) continue;
    last_positive = i;
    run += beads[i].mass;
    if (run > target) return i;
  }
  return last_positive;
}

}  // namespace

BeadTree BeadTree::start(std::shared_ptr<const GrowthModel> model, Rng& rng,
                         std::uint64_t chain_id) {
  BeadTree tree;
  tree.model_ = std::move(model);
  tree.chain_id_ = chain_id;
  tree.strands_.push_back(fresh_strand(*tree.model_, 1.0, rng));
  return tree;
}

BeadTree::Selection BeadTree::select(Rng& rng) {
  double total = 0.0;
  for (const auto& s : strands_) total += s->live_mass;
  if (!(total > 0.0)) throw DomainError("bead tree has no atoms to select");
  double target = uniform01(rng) * total;
  std::size_t k = 0;
  double before = 0.0;
  for (; k + 1 < strands_.size(); ++k) {
    if (before + strands_[k]->live_mass > target) break;
    before += strands_[k]->live_mass;
  }
  std::size_t bead = pick_bead(strands_[k]->string.beads, 0, target - before);
  if (bead >= strands_[k]->string.beads.size()) {
    throw DomainError("bead selection fell on a strand without atoms");
  }

  // A tail bead stands for the unsimulated rest of the strand: extend the
  // path and pick again among the beads that replace it.
  while (strands_[k]->string.beads[bead].tail) {
    auto st = std::make_shared<Strand>(*strands_[k]);
    std::size_t old_tail = bead;
    const auto& model = *model_;
    double level = std::exp(model.alpha * st->path.log_stopped_mass) / model.tail_rate;
    FunctionalOptions opts = model.options;
    opts.tail_tol = std::min(opts.tail_tol, level) * 1e-3;
    opts.jump_budget = st->path.jumps.size() + model.options.jump_budget;
    model.fragmenter.exponential_functional(st->path, model.alpha, model.tail_rate, rng, opts);
    StringOfBeads rebuilt = string_of_beads(st->path, model.alpha, st->mass, model.tail_rate);
    for (std::size_t i = 0; i < old_tail; ++i) rebuilt.beads[i] = st->string.beads[i];
    st->string = std::move(rebuilt);
    st->live_mass = live_mass(st->string);
    strands_[k] = st;
    double sub = 0.0;
    for (std::size_t i = old_tail; i < st->string.beads.size(); ++i) sub += st->string.beads[i].mass;
    bead = pick_bead(st->string.beads, old_tail, uniform01(rng) * sub);
  }
  return {static_cast<int>(k), bead};
}

BeadTree BeadTree::attach(Selection at, FragmenterPath path) const {
  BeadTree next = *this;
  auto parent = std::make_shared<Strand>(*strands_[at.strand]);
  Bead& bead = parent->string.beads.at(at.bead);
  if (!(bead.mass > 0.0) || bead.child >= 0) throw DomainError("bead already split");
  double m = bead.mass;
  int id = static_cast<int>(strands_.size());
  bead.mass = 0.0;
  bead.child = id;
  parent->live_mass = live_mass(parent->string);

  auto st = std::make_shared<Strand>();
  st->parent = at.strand;
  st->parent_bead = at.bead;
  st->attach = bead.position;
  st->mass = m;
  st->path = std::move(path);
  st->string = string_of_beads(st->path, model_->alpha, m, model_->tail_rate);
  st->live_mass = live_mass(st->string);

  next.strands_[at.strand] = parent;
  next.strands_.push_back(st);
  next.log_.push_back({strands_.size(), at.strand, at.bead, m});
  return next;
}

BeadTree BeadTree::grow(Rng& rng) const {
  BeadTree work = *this;
  Selection at = work.select(rng);
  FragmenterPath path = model_->fragmenter.simulate(0.0, rng);
  model_->fragmenter.exponential_functional(path, model_->alpha, model_->tail_rate, rng,
                                            model_->options);
  return work.attach(at, std::move(path));
}

double BeadTree::total_length() const {
  double total = 0.0;
  for (const auto& s : strands_) total += s->string.length;
  return total;
}

double BeadTree::total_mass() const {
  double total = 0.0;
  for (const auto& s : strands_) total += s->live_mass;
  return total;
}

double BeadTree::largest_atom() const {
  double best = 0.0;
  for (const auto& s : strands_) {
    for (const auto& b : s->string.beads) best = std::max(best, b.mass);
  }
  return best;
}

std::vector<double> BeadTree::atoms() const {
  std::vector<double> out;
  for (const auto& s : strands_) {
    for (const auto& b : s->string.beads) {
      if (b.mass > 0.0) out.push_back(b.mass);
    }
  }
  return out;
}

double depth(const BeadTree& tree, int strand, double position) {
  double d = position;
  for (int s = strand; tree.strand(s).parent >= 0; s = tree.strand(s).parent) {
    d += tree.strand(s).attach;
  }
  return d;
}

double projection_gap(const BeadTree& tree_k, const BeadTree& tree_n) {
  std::size_t k = tree_k.leaves(), n = tree_n.leaves();
  if (tree_k.chain_id() != tree_n.chain_id() || k > n) {
    throw DomainError("trees are not states of one growth chain");
  }
  for (std::size_t s = 0; s < k; ++s) {
    if (tree_k.strand(s).mass != tree_n.strand(s).mass ||
        tree_k.strand(s).parent != tree_n.strand(s).parent) {
      throw DomainError("trees are not states of one growth chain");
    }
  }
  std::vector<double> subtree(n, 0.0);
  for (std::size_t s = n; s-- > 0;) {
    const Strand& st = tree_n.strand(s);
    subtree[s] += st.live_mass;
    if (st.parent >= 0) subtree[st.parent] += subtree[s];
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < k; ++s) {
    const auto& now = tree_n.strand(s).string.beads;
    const auto& then = tree_k.strand(s).string.beads;
    std::vector<double> projected(now.size());
    for (std::size_t i = 0; i < now.size(); ++i) {
      projected[i] = now[i].mass;
      if (now[i].child >= static_cast<int>(k)) projected[i] += subtree[now[i].child];
    }
    // Beads created by extending a tail fold back onto that tail.
    for (std::size_t i = 0; i < then.size(); ++i) {
      double value = projected[i];
      if (i + 1 == then.size()) {
        for (std::size_t j = i + 1; j < now.size(); ++j) value += projected[j];
      }
      worst = std::max(worst, std::abs(value - then[i].mass));
    }
  }
  return worst;
}

std::string Composition::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "+" : "") << parts[i];
  return os.str();
}

std::vector<std::vector<int>> spinal_blocks(const BeadTree& tree) {
  std::map<std::size_t, std::vector<int>> by_bead;
  for (std::size_t s = 1; s < tree.leaves(); ++s) {
    std::size_t at = s;
    while (tree.strand(at).parent != 0) at = static_cast<std::size_t>(tree.strand(at).parent);
    by_bead[tree.strand(at).parent_bead].push_back(static_cast<int>(s) + 1);
  }
  std::vector<std::vector<int>> blocks;
  for (auto& [bead, labels] : by_bead) blocks.push_back(std::move(labels));
  return blocks;
}

namespace {
Composition from_blocks(const std::vector<std::vector<int>>& blocks) {
  Composition c;
  for (const auto& b : blocks) {
    if (b.empty()) continue;
    c.parts.push_back(static_cast<int>(b.size()));
    c.n += static_cast<int>(b.size());
  }
  return c;
}
}  // namespace

Composition spinal_composition(const BeadTree& tree) {
  if (tree.leaves() < 2) throw DomainError("spinal composition needs at least two leaves");
  return from_blocks(spinal_blocks(tree));
}

Composition delete_leaf(std::vector<std::vector<int>> blocks, int label) {
  for (auto& b : blocks) b.erase(std::remove(b.begin(), b.end(), label), b.end());
  return from_blocks(blocks);
}

TreeGraph tree_graph(const BeadTree& tree) {
  TreeGraph g;
  g.nodes.push_back({});
  std::vector<int> start(tree.leaves(), 0);
  g.leaf_nodes.resize(tree.leaves());
  for (std::size_t s = 0; s < tree.leaves(); ++s) {
    const Strand& st = tree.strand(s);
    int prev = start[s];
    double prev_pos = 0.0;
    std::vector<TreeGraph::Atom> pending;
    auto close_edge = [&](double pos, int leaf) {
      int id = static_cast<int>(g.nodes.size());
      TreeGraph::Node node;
      node.parent = prev;
      node.edge_length = pos - prev_pos;
      node.leaf = leaf;
      g.nodes.push_back(node);
      g.nodes[prev].children.push_back(id);
      for (auto& a : pending) {
        a.edge = id;
        a.offset -= prev_pos;
        g.atoms.push_back(a);
      }
      pending.clear();
      prev = id;
      prev_pos = pos;
      return id;
    };
    for (const auto& b : st.string.beads) {
      if (b.child >= 0) {
        start[b.child] = close_edge(b.position, 0);
      } else if (b.mass > 0.0) {
        pending.push_back({-1, b.position, b.mass, b.tail});
      }
    }
    g.leaf_nodes[s] = close_edge(st.string.length, static_cast<int>(s) + 1);
  }
  return g;
}

std::string dump_tree_json(const BeadTree& tree) {
  using nlohmann::ordered_json;
  TreeGraph g = tree_graph(tree);
  ordered_json out;
  out["chain"] = tree.chain_id();
  out["leaf_count"] = tree.leaves();
  out["alpha"] = tree.model().alpha;
  out["total_length"] = tree.total_length();
  ordered_json nodes = ordered_json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    nodes.push_back({{"id", i}, {"parent", g.nodes[i].parent}, {"edge_length", g.nodes[i].edge_length}});
  }
  out["nodes"] = std::move(nodes);
  ordered_json atoms = ordered_json::array();
  for (const auto& a : g.atoms) {
    atoms.push_back({{"edge", a.edge}, {"offset", a.offset}, {"mass", a.mass}, {"tail", a.tail}});
  }
  out["atoms"] = std::move(atoms);
  ordered_json leaves = ordered_json::array();
  for (std::size_t i = 0; i < g.leaf_nodes.size(); ++i) {
    leaves.push_back({{"label", i + 1}, {"node", g.leaf_nodes[i]}});
  }
  out["leaves"] = std::move(leaves);
  ordered_json log = ordered_json::array();
  for (const auto& e : tree.log()) {
    log.push_back({{"step", e.step}, {"strand", e.strand}, {"bead", e.bead}, {"mass", e.mass}});
  }
  out["log"] = std::move(log);
  return out.dump();
}

}  // namespace fragtree
