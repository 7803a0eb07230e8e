#include "fragtree/suites.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "fragtree/beads.hpp"
#include "fragtree/bifurcator.hpp"
#include "fragtree/brownian.hpp"
#include "fragtree/format.hpp"
#include "fragtree/fragmenter.hpp"
#include "fragtree/parallel.hpp"
#include "fragtree/rng.hpp"
#include "fragtree/treemetric.hpp"
#include "json.hpp"

namespace fragtree {

namespace {

FunctionalOptions functional_options(const ExperimentConfig& c) {
  FunctionalOptions opts;
  opts.tail_tol = c.tail_tol;
  opts.jump_budget = c.jump_budget;
  return opts;
}

std::shared_ptr<const GrowthModel> growth_model(const ExperimentConfig& c) {
  return std::make_shared<const GrowthModel>(Fragmenter(parse_density(c.density), c.epsilon),
                                             c.alpha, functional_options(c));
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

// Identity bookkeeping: analytic values are registered in the same order as
// the per-replicate values are pushed.
struct Spec {
  std::string name;
  double param, analytic, full;
};

std::vector<MomentRow> summarize(const std::vector<Spec>& specs,
                                 const std::vector<std::vector<double>>& values) {
  std::vector<MomentRow> rows;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    RunningStats st;
    for (const auto& v : values) st.add(v[k]);
    MomentRow r;
    r.identity = specs[k].name;
    r.param = specs[k].param;
    r.analytic = specs[k].analytic;
    r.analytic_untruncated = specs[k].full;
    r.mean = st.mean();
    r.se = st.se();
    r.z = z_score(r.mean, r.se, r.analytic);
    rows.push_back(r);
  }
  return rows;
}

double pow_from_log(double log_x, double rho) { return std::exp(rho * log_x); }

}  // namespace

PairMoments pair_moments(const SplittingDensity& f, const SwitchingFunction& p, double rho) {
  PairMoments m;
  m.rate = f.integrate([&](UnitPoint x) { return p(x); });
  if (!(m.rate > 0.0)) throw DomainError("switching never happens: phi = 0");
  double kept0 = f.integrate([&](UnitPoint x) { return (1.0 - p(x)) * one_minus_pow(x, rho); });
  double u_rho = f.integrate([&](UnitPoint x) { return p(x) * std::pow(x.u, rho); }) / m.rate;
  double v_rho = f.integrate([&](UnitPoint x) { return p(x) * std::pow(x.v, rho); }) / m.rate;
  m.before = m.rate / (m.rate + kept0);
  m.after = m.before * u_rho;
  m.switched = m.before * v_rho;
  m.ratio = u_rho;
  m.L0 = 1.0 / (m.rate + kept0);
  double phi = laplace_exponent(f, rho);
  m.Lsigma = m.after / phi;
  m.Lstar = m.switched / laplace_exponent(switch_dual(f, p).density, rho);
  m.total = 1.0 / phi;
  m.total_second = 2.0 / (phi * laplace_exponent(f, 2.0 * rho));
  return m;
}

MomentSuite run_moments(const ExperimentConfig& c) {
  MomentSuite suite;
  if (c.replicates == 0) return suite;
  SplittingDensity f = parse_density(c.density);
  SwitchingFunction p = parse_switching(c.switching);
  Fragmenter frag(f, c.epsilon);
  const SplittingDensity& f_eps = frag.simulated();
  bool need_pair = c.has_part("junction") || c.has_part("lengths");
  std::unique_ptr<Bifurcator> bif;
  if (need_pair) bif = std::make_unique<Bifurcator>(f, p, c.epsilon);
  FunctionalOptions opts = functional_options(c);

  std::vector<Spec> specs;
  if (c.has_part("mellin")) {
    for (double r : c.rho) {
      specs.push_back({"mellin_M1", r, std::exp(-frag.truncated_exponent(r)),
                       std::exp(-frag.exponent(r))});
    }
  }
  std::vector<PairMoments> trunc_m, full_m;
  PairMoments trunc1, full1;
  if (need_pair) {
    for (double r : c.rho) {
      trunc_m.push_back(pair_moments(f_eps, p, r));
      full_m.push_back(pair_moments(f, p, r));
    }
    trunc1 = pair_moments(f_eps, p, 1.0);
    full1 = pair_moments(f, p, 1.0);
  }
  if (c.has_part("junction")) {
    specs.push_back({"tau_mean", 0.0, 1.0 / trunc1.rate, 1.0 / full1.rate});
    for (std::size_t k = 0; k < c.rho.size(); ++k) {
      double r = c.rho[k];
      const auto &a = trunc_m[k], &b = full_m[k];
      specs.push_back({"junction_before", r, a.before, b.before});
      specs.push_back({"junction_after", r, a.after, b.after});
      specs.push_back({"junction_switched", r, a.switched, b.switched});
      specs.push_back({"junction_ratio", r, a.ratio, b.ratio});
    }
    specs.push_back({"junction_complement", 1.0, 1.0 - trunc1.before, 1.0 - full1.before});
    specs.push_back({"complement_minus_after", 1.0, 1.0 - trunc1.before - trunc1.after,
                     1.0 - full1.before - full1.after});
  }
  if (c.has_part("lengths")) {
    for (std::size_t k = 0; k < c.rho.size(); ++k) {
      double r = c.rho[k];
      const auto &a = trunc_m[k], &b = full_m[k];
      specs.push_back({"length_L0", r, a.L0, b.L0});
      specs.push_back({"length_Lsigma", r, a.Lsigma, b.Lsigma});
      specs.push_back({"length_Lstar", r, a.Lstar, b.Lstar});
      specs.push_back({"length_L0sigma", r, a.total, b.total});
      specs.push_back({"length_L0sigma_second", r, a.total_second, b.total_second});
    }
  }

  struct Replicate {
    std::vector<double> values;
    double tau = 0.0, log_before = 0.0, log_ratio = 0.0;
  };
  auto reps = parallel_map<Replicate>(c.replicates, c.workers, [&](std::size_t i) {
    Rng rng = make_rng(c.seed, "moments", i);
    Replicate out;
    if (c.has_part("mellin")) {
      FragmenterPath path = frag.simulate(1.0, rng);
      double m = path.evaluate(1.0);
      for (double r : c.rho) out.values.push_back(std::pow(m, r));
    }
    if (!need_pair) return out;
    BifurcatorPair pair = bif->simulate(rng);
    double lb = pair.log_mass_before();
    double lu = std::log(pair.U);
    double lv = std::log(pair.U_gap);
    out.tau = pair.tau;
    out.log_before = lb;
    out.log_ratio = lu;
    if (c.has_part("junction")) {
      out.values.push_back(pair.tau);
      for (double r : c.rho) {
        out.values.push_back(pow_from_log(lb, r));
        out.values.push_back(pow_from_log(lb + lu, r));
        out.values.push_back(pow_from_log(lb + lv, r));
        out.values.push_back(pow_from_log(lu, r));
      }
      JunctionTriple t = junction_triple(pair);
      out.values.push_back(t.below);
      out.values.push_back(t.below - t.kept);
    }
    if (c.has_part("lengths")) {
      for (double r : c.rho) {
        Lengths L = bif->sample_lengths(pair, bif->tail_rates(r), rng, opts);
        double total = L.L0 + L.Lsigma;
        out.values.push_back(L.L0);
        out.values.push_back(L.Lsigma);
        out.values.push_back(L.Lstar);
        out.values.push_back(total);
        out.values.push_back(total * total);
      }
    }
    return out;
  });

  std::vector<std::vector<double>> values;
  values.reserve(reps.size());
  for (auto& r : reps) values.push_back(std::move(r.values));
  suite.rows = summarize(specs, values);

  if (c.has_part("junction")) {
    std::vector<double> taus, lb, lr;
    for (const auto& r : reps) {
      taus.push_back(r.tau);
      lb.push_back(r.log_before);
      lr.push_back(r.log_ratio);
    }
    double rate = bif->switch_rate();
    suite.tests.push_back(
        {"tau_exponential_ks", rate,
         ks_one_sample(taus, [rate](double t) { return t <= 0 ? 0.0 : -std::expm1(-rate * t); })});
    if (reps.size() > 3) {
      double r = correlation(lb, lr);
      double z = r * std::sqrt(static_cast<double>(reps.size()) - 3.0);
      suite.tests.push_back({"log_before_log_ratio_correlation", 0.0,
                             TestResult{r, std::erfc(std::abs(z) / std::sqrt(2.0)), 0.0}});
    }
  }
  return suite;
}

CompositionCheck composition_consistency(const ExperimentConfig& c) {
  CompositionCheck check;
  auto model = growth_model(c);
  auto grow_to = [&](Rng& rng, std::uint64_t id, std::size_t n) {
    BeadTree t = BeadTree::start(model, rng, id);
    while (t.leaves() < n) t = t.grow(rng);
    return t;
  };
  auto direct = parallel_map<std::string>(c.replicates, c.workers, [&](std::size_t i) {
    Rng rng = make_rng(c.seed, "composition-direct", i);
    return spinal_composition(grow_to(rng, i, 4)).str();
  });
  auto deleted = parallel_map<std::string>(c.replicates, c.workers, [&](std::size_t i) {
    Rng rng = make_rng(c.seed, "composition-deleted", i);
    BeadTree t = grow_to(rng, i, 5);
    int label = 2 + static_cast<int>(uniform01(rng) * 4.0);
    return delete_leaf(spinal_blocks(t), std::min(label, 5)).str();
  });
  for (const auto& s : direct) ++check.counts[s][0];
  for (const auto& s : deleted) ++check.counts[s][1];
  std::vector<std::vector<double>> table;
  for (const auto& [code, n] : check.counts) {
    table.push_back({static_cast<double>(n[0]), static_cast<double>(n[1])});
  }
  check.homogeneity = table.size() > 1 ? chi_square_table(table) : TestResult{};
  return check;
}

BrownianSuite run_brownian_suite(const ExperimentConfig& c, bool with_composition) {
  BrownianSuite suite;
  if (c.replicates == 0) return suite;
  auto model = growth_model(c);
  int n_max = c.leaves;
  int shape_max = std::min(n_max, 6);

  struct Chain {
    std::vector<double> lengths;
    std::vector<std::string> shapes;                 // index n - 1
    std::vector<std::vector<double>> segments;       // index n - 1
  };
  auto chains = parallel_map<Chain>(c.replicates, c.workers, [&](std::size_t i) {
    Rng rng = make_rng(c.seed, "brownian", i);
    Chain out;
    BeadTree t = BeadTree::start(model, rng, i);
    for (int n = 1;; ++n) {
      out.lengths.push_back(t.total_length());
      out.shapes.push_back(n <= shape_max ? shape_code(t) : std::string());
      out.segments.push_back(relative_segments(t));
      if (n == n_max) break;
      t = t.grow(rng);
    }
    return out;
  });

  std::vector<Spec> specs;
  std::vector<std::vector<double>> values(chains.size());
  for (int n = 1; n <= n_max; ++n) {
    double m1 = line_breaking_moment(n, 1.0), m2 = line_breaking_moment(n, 2.0);
    specs.push_back({"length_mean", static_cast<double>(n), m1, m1});
    specs.push_back({"length_second", static_cast<double>(n), m2, m2});
    for (std::size_t i = 0; i < chains.size(); ++i) {
      double x = chains[i].lengths[n - 1];
      values[i].push_back(x);
      values[i].push_back(x * x);
    }
  }
  suite.moments = summarize(specs, values);

  std::vector<double> first;
  for (const auto& ch : chains) first.push_back(ch.lengths[0]);
  suite.tests.push_back({"rayleigh_ks", 1.0, ks_one_sample(first, [](double x) {
                           return x <= 0 ? 0.0 : -std::expm1(-0.5 * x * x);
                         })});
  for (int n = 3; n <= shape_max; ++n) {
    std::vector<std::string> codes;
    for (const auto& ch : chains) codes.push_back(ch.shapes[n - 1]);
    suite.tests.push_back({"shape_uniform_chi2", static_cast<double>(n),
                           shape_census(codes, n).chi2});
  }
  for (int n = 2; n <= n_max; ++n) {
    std::vector<std::vector<double>> segs;
    std::vector<std::string> codes;
    for (const auto& ch : chains) {
      segs.push_back(ch.segments[n - 1]);
      codes.push_back(n <= shape_max ? ch.shapes[n - 1] : std::string("*"));
    }
    SegmentReport rep = segment_length_test(segs, codes, n);
    suite.tests.push_back({"first_segment_beta_ks", static_cast<double>(n), rep.marginals[0]});
    if (n >= 3 && n <= shape_max) {
      suite.tests.push_back({"segment_shape_independence", static_cast<double>(n),
                             rep.shape_independence});
    }
  }
  if (with_composition) {
    suite.tests.push_back({"composition_consistency", 3.0, composition_consistency(c).homogeneity});
  }
  return suite;
}

GrowthSuite run_growth(const ExperimentConfig& c) {
  GrowthSuite suite;
  suite.convergence_csv = convergence_csv_header();
  suite.summary_csv = "n,median_largest_atom,median_total_length,median_ghp_bound,median_leaf_gap\n";
  if (c.replicates == 0) return suite;
  auto model = growth_model(c);

  struct Chain {
    ConvergenceReport report;
    std::vector<std::pair<std::string, std::string>> dumps;
  };
  auto chains = parallel_map<Chain>(c.replicates, c.workers, [&](std::size_t i) {
    Rng rng = make_rng(c.seed, "grow", i);
    Chain out;
    std::vector<BeadTree> snapshots;
    BeadTree t = BeadTree::start(model, rng, i);
    for (auto k : c.checkpoints) {
      while (t.leaves() < k) t = t.grow(rng);
      snapshots.push_back(t);
      if (i < c.dump_replicates) {
        out.dumps.emplace_back("tree_r" + std::to_string(i) + "_n" + std::to_string(k) + ".json",
                               dump_tree_json(t));
      }
    }
    out.report = convergence_report(snapshots);
    return out;
  });

  for (std::size_t i = 0; i < chains.size(); ++i) {
    suite.convergence_csv += convergence_csv_rows(i, chains[i].report);
    for (auto& d : chains[i].dumps) suite.dumps.push_back(std::move(d));
  }
  std::ostringstream os;
  for (std::size_t k = 0; k < c.checkpoints.size(); ++k) {
    std::vector<double> atom, len, ghp, gap;
    for (const auto& ch : chains) {
      const auto& row = ch.report.steps[k];
      atom.push_back(row.largest_atom);
      len.push_back(row.total_length);
      ghp.push_back(row.ghp_bound);
      gap.push_back(row.leaf_gap);
    }
    suite.median_largest_atom.push_back(median(atom));
    os << c.checkpoints[k] << ',' << fmt(median(atom)) << ',' << fmt(median(len)) << ','
       << fmt(median(ghp)) << ',' << fmt(median(gap)) << '\n';
  }
  suite.summary_csv += os.str();
  return suite;
}

std::string run_bifurcate(const ExperimentConfig& c) {
  if (c.replicates == 0) return {};
  Bifurcator bif(parse_density(c.density), parse_switching(c.switching), c.epsilon);
  FunctionalOptions opts = functional_options(c);
  auto lines = parallel_map<std::string>(c.replicates, c.workers, [&](std::size_t i) {
    Rng rng = make_rng(c.seed, "bifurcate", i);
    BifurcatorPair pair = bif.simulate(rng);
    JunctionTriple t = junction_triple(pair);
    nlohmann::ordered_json j;
    j["replicate"] = i;
    j["tau"] = pair.tau;
    j["U"] = pair.U;
    j["mass_before"] = pair.mass_before();
    j["junction"] = {{"below", t.below}, {"switched", t.switched}, {"kept", t.kept}};
    j["jumps_before_tau"] = pair.common.jumps.size();
    auto lengths = nlohmann::ordered_json::array();
    for (double r : c.rho) {
      Lengths L = bif.sample_lengths(pair, bif.tail_rates(r), rng, opts);
      lengths.push_back({{"rho", r}, {"L0", L.L0}, {"Lsigma", L.Lsigma}, {"Lstar", L.Lstar}});
    }
    j["lengths"] = lengths;
    return j.dump() + "\n";
  });
  std::string out;
  for (auto& l : lines) out += l;
  return out;
}

std::string moment_csv(const std::vector<MomentRow>& rows, const std::string& param_name) {
  std::ostringstream os;
  os << "identity," << param_name << ",analytic,analytic_untruncated,mc_mean,se,z\n";
  for (const auto& r : rows) {
    os << r.identity << ',' << fmt(r.param) << ',' << fmt(r.analytic) << ','
       << fmt(r.analytic_untruncated) << ',' << fmt(r.mean) << ',' << fmt(r.se) << ',' << fmt(r.z)
       << '\n';
  }
  return os.str();
}

std::string test_csv(const std::vector<TestRow>& rows, const std::string& param_name) {
  std::ostringstream os;
  os << "test," << param_name << ",statistic,p_value,df\n";
  for (const auto& r : rows) {
    os << r.test << ',' << fmt(r.param) << ',' << fmt(r.result.statistic) << ','
       << fmt(r.result.p_value) << ',' << fmt(r.result.df) << '\n';
  }
  return os.str();
}

}  // namespace fragtree
