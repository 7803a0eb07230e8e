#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "fragtree/config.hpp"
#include "fragtree/density.hpp"
#include "fragtree/stats.hpp"

namespace fragtree {

/// Monte Carlo mean against a closed form.  `param` is rho for fragmenter
/// identities and the leaf count for tree identities.
struct MomentRow {
  std::string identity;
  double param = 0.0;
  double analytic = 0.0;               // exponents of the simulated density
  double analytic_untruncated = 0.0;   // exponents of the density as given
  double mean = 0.0;
  double se = 0.0;
  double z = 0.0;
};

struct TestRow {
  std::string test;
  double param = 0.0;
  TestResult result;
};

/// Closed forms for one (density, switching) pair, any switching function:
/// with phi = int p u f and Phi0 the exponent of (1-p) f,
/// E M_{tau-}^rho = phi / (phi + Phi0(rho)), and so on.
struct PairMoments {
  double rate = 0.0;  // phi
  double before = 0.0;
  double after = 0.0;
  double switched = 0.0;
  double ratio = 0.0;
  double L0 = 0.0;
  double Lsigma = 0.0;
  double Lstar = 0.0;
  double total = 0.0;
  double total_second = 0.0;
};

PairMoments pair_moments(const SplittingDensity& f, const SwitchingFunction& p, double rho);

struct MomentSuite {
  std::vector<MomentRow> rows;
  std::vector<TestRow> tests;
};

/// One fragmenter path / bifurcator per replicate; parts select which
/// identities are evaluated.
MomentSuite run_moments(const ExperimentConfig& config);

struct BrownianSuite {
  std::vector<MomentRow> moments;  // param = n
  std::vector<TestRow> tests;
};

/// Chains grown to config.leaves leaves; total length moments, Rayleigh law,
/// shape census (3 to 6 leaves), segment lengths, and optionally the
/// composition consistency test.
BrownianSuite run_brownian_suite(const ExperimentConfig& config, bool with_composition = true);

struct CompositionCheck {
  std::map<std::string, std::array<long long, 2>> counts;  // direct, by deletion
  TestResult homogeneity;
};

/// C_3 read off chains stopped at 4 leaves, against C_3 obtained from chains
/// stopped at 5 leaves by deleting a uniform leaf among 2..5.  Two independent
/// sets of `config.replicates` chains.
CompositionCheck composition_consistency(const ExperimentConfig& config);

struct GrowthSuite {
  std::string convergence_csv;
  std::string summary_csv;
  std::vector<std::pair<std::string, std::string>> dumps;  // file name, JSON
  std::vector<double> median_largest_atom;                 // per checkpoint
};

GrowthSuite run_growth(const ExperimentConfig& config);

/// One JSON object per line and replicate.
std::string run_bifurcate(const ExperimentConfig& config);

std::string moment_csv(const std::vector<MomentRow>& rows, const std::string& param_name);
std::string test_csv(const std::vector<TestRow>& rows, const std::string& param_name);

}  // namespace fragtree
