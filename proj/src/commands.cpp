#include "fragtree/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "fragtree/bifurcator.hpp"
#include "fragtree/density.hpp"
#include "fragtree/format.hpp"
#include "fragtree/fragmenter.hpp"
#include "fragtree/pointproc.hpp"
#include "fragtree/quadrature.hpp"
#include "fragtree/suites.hpp"

namespace fragtree {

namespace {

constexpr double kSignificance = 0.01;

void write_file(const ExperimentConfig& c, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(c.out);
  std::ofstream out(std::filesystem::path(c.out) / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (std::filesystem::path(c.out) / name).string());
  out << body;
}

int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const QuadratureError& e) {
    log << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const BudgetError& e) {
    log << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kNumericalError;
  }
}

int judge(std::ostream& log, const std::vector<MomentRow>& rows, const std::vector<TestRow>& tests,
          double z_threshold) {
  int failures = 0;
  for (const auto& r : rows) {
    if (std::abs(r.z) > z_threshold) {
      log << "  |z| > " << fmt(z_threshold) << ": " << r.identity << " at " << fmt(r.param)
          << " (z = " << fmt(r.z) << ")\n";
      ++failures;
    }
  }
  for (const auto& t : tests) {
    if (t.result.p_value < kSignificance) {
      log << "  p < " << fmt(kSignificance) << ": " << t.test << " at " << fmt(t.param)
          << " (p = " << fmt(t.result.p_value) << ")\n";
      ++failures;
    }
  }
  log << rows.size() << " identities, " << tests.size() << " tests, " << failures
      << " failures\n";
  return failures ? kStatisticalFailure : kSuccess;
}

}  // namespace

int cmd_moments(const ExperimentConfig& c, std::ostream& log) {
  return guarded(log, [&] {
    MomentSuite s = run_moments(c);
    write_file(c, "moments.csv", moment_csv(s.rows, "rho"));
    write_file(c, "moment_tests.csv", test_csv(s.tests, "param"));
    return judge(log, s.rows, s.tests, c.z_threshold);
  });
}

int cmd_grow(const ExperimentConfig& c, std::ostream& log) {
  return guarded(log, [&] {
    GrowthSuite s = run_growth(c);
    write_file(c, "convergence.csv", s.convergence_csv);
    write_file(c, "convergence_summary.csv", s.summary_csv);
    for (const auto& [name, json] : s.dumps) write_file(c, name, json);
    log << c.replicates << " chains, " << s.dumps.size() << " tree dumps\n";
    return static_cast<int>(kSuccess);
  });
}

int cmd_brownian_suite(const ExperimentConfig& c, std::ostream& log) {
  return guarded(log, [&] {
    BrownianSuite s = run_brownian_suite(c);
    write_file(c, "brownian_moments.csv", moment_csv(s.moments, "n"));
    write_file(c, "brownian_tests.csv", test_csv(s.tests, "n"));
    return judge(log, s.moments, s.tests, c.z_threshold);
  });
}

int cmd_bifurcate(const ExperimentConfig& c, std::ostream& log) {
  return guarded(log, [&] {
    write_file(c, "bifurcators.jsonl", run_bifurcate(c));
    log << c.replicates << " bifurcators\n";
    return static_cast<int>(kSuccess);
  });
}

int cmd_check_density(const ExperimentConfig& c, std::ostream& log) {
  return guarded(log, [&] {
    SplittingDensity f = parse_density(c.density);
    SwitchingFunction p = parse_switching(c.switching);
    SplittingDensity f_eps = restrict_below(f, 1.0 - c.epsilon);
    std::ostringstream os;
    os << "quantity,rho,value\n";
    auto row = [&](const std::string& q, double rho, double v) {
      os << q << ',' << fmt(rho) << ',' << fmt(v) << '\n';
    };
    for (double r : c.rho) {
      row("exponent", r, laplace_exponent(f, r));
      row("exponent_truncated", r, laplace_exponent(f_eps, r));
      row("exponent_symmetrized", r, symmetrized_exponent(f, r));
      row("exponent_symmetrized_direct", r, laplace_exponent(symmetrize(f), r));
    }
    double phi = switch_rate(f, p);
    SwitchedPair dual = switch_dual(f, p);
    row("switch_rate", 0.0, phi);
    row("switch_rate_dual", 0.0, switch_rate(dual.density, dual.switching));
    row("intensity_truncated", 0.0, intensity_mass(f_eps));
    row("truncation_bias_bound", 0.0, make_truncation(f, c.epsilon).bias_bound);
    row("sampler_midpoint_error", 0.0, FactorSampler(f_eps).midpoint_error());
    write_file(c, "density.csv", os.str());
    log << os.str();
    return static_cast<int>(kSuccess);
  });
}

int run_command(const std::string& name, const ExperimentConfig& c, std::ostream& log) {
  if (name == "moments") return cmd_moments(c, log);
  if (name == "grow") return cmd_grow(c, log);
  if (name == "brownian-suite") return cmd_brownian_suite(c, log);
  if (name == "bifurcate") return cmd_bifurcate(c, log);
  if (name == "check-density") return cmd_check_density(c, log);
  log << "config error: unknown command '" << name << "'\n";
  return kConfigError;
}

}  // namespace fragtree
