#include "fragtree/density.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fragtree {

namespace {

UnitPoint mirror(UnitPoint x) { return {x.v, x.u}; }

std::vector<double> merged_breakpoints(std::initializer_list<const std::vector<double>*> sets,
                                       std::initializer_list<double> extra, bool mirrored) {
  std::vector<double> out;
  auto add = [&](double b) {
    if (b > 0.0 && b < 1.0) {
      out.push_back(b);
      if (mirrored) out.push_back(1.0 - b);
    }
  };
  for (const auto* s : sets) {
    for (double b : *s) add(b);
  }
  for (double b : extra) add(b);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_arguments(const std::string& spec, const std::string& name) {
  auto open = spec.find('(');
  auto close = spec.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open ||
      trim(spec.substr(close + 1)) != "") {
    throw DomainError("malformed " + name + " specification '" + spec + "'");
  }
  std::vector<double> args;
  std::stringstream ss(spec.substr(open + 1, close - open - 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw DomainError("non-numeric argument '" + item + "' in '" + spec + "'");
    }
    args.push_back(value);
  }
  return args;
}

}  // namespace

// ---------------------------------------------------------------------------

SplittingDensity::SplittingDensity(std::string label, Eval eval, EndpointExponents exponents,
                                   double support_lo, double support_hi,
                                   std::vector<double> breakpoints) {
  if (!(support_lo >= 0.0 && support_hi <= 1.0 && support_lo < support_hi)) {
    throw DomainError("invalid support for density '" + label + "'");
  }
  auto state = std::make_shared<State>();
  state->label = std::move(label);
  state->eval = std::move(eval);
  state->exponents = exponents;
  state->lo = support_lo;
  state->hi = support_hi;
  std::sort(breakpoints.begin(), breakpoints.end());
  state->breakpoints = std::move(breakpoints);
  state_ = state;

  constexpr int kGrid = 1000;
  for (int i = 0; i < kGrid; ++i) {
    double u = (i + 0.5) / kGrid;
    double value = (*this)(u);
    if (!(value >= 0.0) || std::isinf(value)) {
      throw DomainError("density '" + state->label + "' is negative or non-finite at u = " +
                        format_number(u));
    }
  }
  try {
    state->phi_one = integrate([](UnitPoint x) { return x.v; });
  } catch (const QuadratureError& e) {
    throw DomainError("density '" + state->label +
                      "' violates int u(1-u) f(u) du < inf: " + e.what());
  }
}

double SplittingDensity::operator()(UnitPoint x) const {
  if (x.u < state_->lo || x.u > state_->hi) return 0.0;
  return state_->eval(x);
}

double SplittingDensity::integrate(const std::function<double(UnitPoint)>& weight,
                                   const QuadratureOptions& opts) const {
  auto h = [&](UnitPoint x) {
    double w = weight(x);
    if (w == 0.0) return 0.0;
    return w * x.u * (*this)(x);
  };
  return integrate_unit(h, state_->lo, state_->hi, state_->breakpoints, state_->exponents, opts)
      .value;
}

// ---------------------------------------------------------------------------

SwitchingFunction::SwitchingFunction(std::string label, Eval eval, std::vector<double> breakpoints,
                                     double order_at_zero, double order_at_one) {
  auto state = std::make_shared<State>();
  state->label = std::move(label);
  state->eval = std::move(eval);
  state->breakpoints = std::move(breakpoints);
  state->q0 = order_at_zero;
  state->q1 = order_at_one;
  state_ = state;
  constexpr int kGrid = 1000;
  for (int i = 0; i < kGrid; ++i) {
    double u = (i + 0.5) / kGrid;
    double p = (*this)(u);
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DomainError("switching function '" + state_->label + "' leaves [0,1] at u = " +
                        format_number(u));
    }
  }
}

SwitchingFunction SwitchingFunction::never() {
  return SwitchingFunction("none", [](UnitPoint) { return 0.0; });
}

SwitchingFunction SwitchingFunction::always() {
  return SwitchingFunction("always", [](UnitPoint) { return 1.0; });
}

SwitchingFunction SwitchingFunction::size_biased() {
  return SwitchingFunction("size_biased", [](UnitPoint x) { return x.v; }, {}, 0.0, 1.0);
}

SwitchingFunction SwitchingFunction::bigger_block() {
  return SwitchingFunction("bigger_block", [](UnitPoint x) { return x.u < 0.5 ? 1.0 : 0.0; },
                           {0.5}, 0.0, 8.0);
}

SwitchingFunction SwitchingFunction::constant(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw DomainError("constant switching probability outside [0,1]");
  return SwitchingFunction("const(" + format_number(c) + ")", [c](UnitPoint) { return c; });
}

// ---------------------------------------------------------------------------

double one_minus_pow(UnitPoint x, double rho) {
  double log_u = x.v < 0.5 ? std::log1p(-x.v) : std::log(x.u);
  return -std::expm1(rho * log_u);
}

double laplace_exponent(const SplittingDensity& f, double rho, const QuadratureOptions& opts) {
  if (!(rho >= 0.0)) throw DomainError("Laplace exponent requires rho >= 0");
  if (rho == 0.0) return 0.0;
  return f.integrate([rho](UnitPoint x) { return one_minus_pow(x, rho); }, opts);
}

double phi_second(const SplittingDensity& f, double rho, const QuadratureOptions& opts) {
  if (!(rho >= 0.0)) throw DomainError("phi_second requires rho >= 0");
  return f.integrate([rho](UnitPoint x) { return std::pow(x.v, rho + 1.0); }, opts);
}

SplittingDensity symmetrize(const SplittingDensity& f) {
  EndpointExponents e = f.exponents();
  double s = std::max(e.at_zero - 1.0, e.at_one);
  double lo = std::min(f.support_lo(), 1.0 - f.support_hi());
  double hi = std::max(f.support_hi(), 1.0 - f.support_lo());
  auto bps = merged_breakpoints({&f.breakpoints()}, {f.support_lo(), f.support_hi()}, true);
  return SplittingDensity(
      f.label() + "*", [f](UnitPoint x) { return x.u * f(x) + x.v * f(mirror(x)); }, {s, s}, lo,
      hi, bps);
}

double symmetrized_exponent(const SplittingDensity& f, double rho, const QuadratureOptions& opts) {
  if (!(rho >= 0.0)) throw DomainError("symmetrized exponent requires rho > 0");
  return laplace_exponent(f, rho + 1.0, opts) - phi_second(f, rho, opts);
}

SwitchedPair switch_dual(const SplittingDensity& f, const SwitchingFunction& p) {
  double pcond = 0.0;
  try {
    pcond = f.integrate([&p](UnitPoint x) { return x.u * p(x); });
  } catch (const QuadratureError& e) {
    throw DomainError("switching '" + p.label() + "' of '" + f.label() +
                      "' violates int u^2 p(u) f(u) du < inf: " + e.what());
  }
  (void)pcond;

  // u f^(u) = (1 - p(u)) u f(u) + p(1-u) (1-u) f(1-u)
  auto kept = [f, p](UnitPoint x) { return (1.0 - p(x)) * x.u * f(x); };
  auto switched = [f, p](UnitPoint x) {
    UnitPoint m = mirror(x);
    double pm = p(m);
    return pm == 0.0 ? 0.0 : pm * x.v * f(m);
  };

  EndpointExponents e = f.exponents();
  EndpointExponents hat{std::max(e.at_zero, e.at_one + 1.0 - p.order_at_one()),
                        std::max(e.at_one, e.at_zero - 1.0 - p.order_at_zero())};
  double lo = std::min(f.support_lo(), 1.0 - f.support_hi());
  double hi = std::max(f.support_hi(), 1.0 - f.support_lo());
  auto bps = merged_breakpoints({&f.breakpoints(), &p.breakpoints()},
                                {f.support_lo(), f.support_hi()}, true);

  SplittingDensity f_hat(
      f.label() + "^[" + p.label() + "]",
      [kept, switched](UnitPoint x) { return (kept(x) + switched(x)) / x.u; }, hat, lo, hi, bps);

  SwitchingFunction p_hat(
      p.label() + "^[" + f.label() + "]",
      [kept, switched](UnitPoint x) {
        double s = switched(x);
        if (s == 0.0) return 0.0;
        double total = kept(x) + s;
        if (!(total > 0.0)) return 0.0;
        return std::min(1.0, s / total);
      },
      bps, p.order_at_one(), p.order_at_zero());
  return {f_hat, p_hat};
}

double switch_rate(const SplittingDensity& f, const SwitchingFunction& p,
                   const QuadratureOptions& opts) {
  double phi = 0.0;
  try {
    phi = f.integrate([&p](UnitPoint x) { return p(x); }, opts);
  } catch (const QuadratureError& e) {
    throw DomainError("switch rate of '" + p.label() + "' on '" + f.label() +
                      "' is not finite: " + e.what());
  }
  SwitchedPair dual = switch_dual(f, p);
  double phi_hat = dual.density.integrate([&](UnitPoint x) { return dual.switching(x); }, opts);
  double tol = 1e-8 * std::max(1.0, std::abs(phi));
  if (std::abs(phi - phi_hat) > tol) {
    throw QuadratureError("switch rate disagrees with the dual rate", phi, phi - phi_hat);
  }
  return phi;
}

double kappa_block_weight(const SplittingDensity& f, int n1, int n2,
                          const QuadratureOptions& opts) {
  if (n1 < 1 || n2 < 1) throw DomainError("kappa block sizes must be >= 1");
  return f.integrate(
      [n1, n2](UnitPoint x) { return std::pow(x.u, n1 - 1) * std::pow(x.v, n2); }, opts);
}

double intensity_mass(const SplittingDensity& f, const QuadratureOptions& opts) {
  return f.integrate([](UnitPoint) { return 1.0; }, opts);
}

SplittingDensity restrict_below(const SplittingDensity& f, double hi) {
  if (!(hi > f.support_lo())) throw DomainError("restriction leaves an empty support");
  double top = std::min(hi, f.support_hi());
  EndpointExponents e = f.exponents();
  if (top < 1.0) e.at_one = 0.0;
  return SplittingDensity(f.label() + "|u<=" + format_number(top), [f](UnitPoint x) { return f(x); },
                          e, f.support_lo(), top, f.breakpoints());
}

SplittingDensity reweight(const SplittingDensity& f, const std::function<double(UnitPoint)>& weight,
                          std::string label, const std::vector<double>& extra_breakpoints) {
  auto bps = merged_breakpoints({&f.breakpoints(), &extra_breakpoints}, {}, false);
  return SplittingDensity(
      std::move(label),
      [f, weight](UnitPoint x) {
        double value = f(x);
        return value == 0.0 ? 0.0 : weight(x) * value;
      },
      f.exponents(), f.support_lo(), f.support_hi(), bps);
}

SplittingDensity brownian_density() {
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return SplittingDensity(
      "brownian", [c](UnitPoint x) { return c * std::pow(x.u * x.v, -1.5); }, {1.5, 1.5});
}

SplittingDensity beta_density(double a, double b, double scale) {
  if (!(a < 1.0 && b < 1.0)) throw DomainError("beta(a,b) density needs a < 1 and b < 1");
  if (!(scale > 0.0)) throw DomainError("beta(a,b) density needs a positive scale");
  std::string label = "beta(" + format_number(a) + "," + format_number(b);
  if (scale != 1.0) label += "," + format_number(scale);
  label += ")";
  return SplittingDensity(
      label,
      [a, b, scale](UnitPoint x) { return scale * std::pow(x.u, -a - 1.0) * std::pow(x.v, -b - 1.0); },
      {a + 1.0, b + 1.0});
}

SplittingDensity load_tabulated_density(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open tabulated density '" + path + "'");
  std::string label = path;
  EndpointExponents e{0.0, 0.0};
  std::vector<std::pair<double, double>> grid;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq != std::string::npos) {
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      try {
        if (key == "label") {
          label = value;
        } else if (key == "at_zero") {
          e.at_zero = std::stod(value);
        } else if (key == "at_one") {
          e.at_one = std::stod(value);
        } else {
          throw DomainError("unknown key");
        }
      } catch (const std::exception&) {
        throw DomainError(path + ":" + std::to_string(lineno) + ": bad entry '" + key + "'");
      }
      continue;
    }
    std::istringstream row(line);
    double u = 0.0, fu = 0.0;
    if (!(row >> u >> fu) || !(u > 0.0 && u < 1.0) || !(fu >= 0.0)) {
      throw DomainError(path + ":" + std::to_string(lineno) + ": expected 'u f(u)' with 0<u<1");
    }
    grid.emplace_back(u, fu);
  }
  if (grid.size() < 2) throw DomainError(path + ": need at least two grid points");
  std::sort(grid.begin(), grid.end());
  // Interpolate the regular part g = f u^a (1-u)^b linearly; extrapolate flat.
  std::vector<double> us, gs;
  for (auto [u, fu] : grid) {
    us.push_back(u);
    gs.push_back(fu * std::pow(u, e.at_zero) * std::pow(1.0 - u, e.at_one));
  }
  auto eval = [us, gs, e](UnitPoint x) {
    double g;
    if (x.u <= us.front()) {
      g = gs.front();
    } else if (x.u >= us.back()) {
      g = gs.back();
    } else {
      auto it = std::upper_bound(us.begin(), us.end(), x.u);
      std::size_t i = static_cast<std::size_t>(it - us.begin());
      double w = (x.u - us[i - 1]) / (us[i] - us[i - 1]);
      g = (1.0 - w) * gs[i - 1] + w * gs[i];
    }
    return g * std::pow(x.u, -e.at_zero) * std::pow(x.v, -e.at_one);
  };
  return SplittingDensity(label, eval, e);
}

SplittingDensity parse_density(const std::string& raw) {
  std::string spec = trim(raw);
  if (spec == "brownian") return brownian_density();
  if (spec.rfind("beta", 0) == 0) {
    auto args = parse_arguments(spec, "beta density");
    if (args.size() == 2) return beta_density(args[0], args[1]);
    if (args.size() == 3) return beta_density(args[0], args[1], args[2]);
    throw DomainError("beta density takes 2 or 3 arguments: '" + spec + "'");
  }
  if (spec.rfind("file:", 0) == 0) return load_tabulated_density(spec.substr(5));
  throw DomainError("unknown density '" + spec + "'");
}

SwitchingFunction parse_switching(const std::string& raw) {
  std::string spec = trim(raw);
  if (spec == "none") return SwitchingFunction::never();
  if (spec == "always") return SwitchingFunction::always();
  if (spec == "size_biased") return SwitchingFunction::size_biased();
  if (spec == "bigger_block") return SwitchingFunction::bigger_block();
  if (spec.rfind("const", 0) == 0) {
    auto args = parse_arguments(spec, "constant switching");
    if (args.size() != 1) throw DomainError("const(c) takes one argument");
    return SwitchingFunction::constant(args[0]);
  }
  throw DomainError("unknown switching function '" + spec + "'");
}

}  // namespace fragtree
