#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fragtree/quadrature.hpp"

namespace fragtree {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A splitting density f on (0,1): the jump factors of the fragmenter form a
/// Poisson point process with intensity ds * u f(u) du.  f is an arbitrary
/// sigma-finite intensity subject only to Phi(1) = int u(1-u) f(u) du < inf.
///
/// Evaluation takes the point together with its complement so that densities
/// singular at 1 can be evaluated accurately there.  Outside [support_lo,
/// support_hi] the density is zero.  Copies share state.
class SplittingDensity {
 public:
  using Eval = std::function<double(UnitPoint)>;

  SplittingDensity(std::string label, Eval eval, EndpointExponents exponents,
                   double support_lo = 0.0, double support_hi = 1.0,
                   std::vector<double> breakpoints = {});

  double operator()(double u) const { return (*this)(UnitPoint{u, 1.0 - u}); }
  double operator()(UnitPoint x) const;

  const std::string& label() const { return state_->label; }
  EndpointExponents exponents() const { return state_->exponents; }
  double support_lo() const { return state_->lo; }
  double support_hi() const { return state_->hi; }
  const std::vector<double>& breakpoints() const { return state_->breakpoints; }

  /// Phi(1), computed when the density was constructed.
  double phi_one() const { return state_->phi_one; }

  /// int weight(u) * u f(u) du over the support.
  double integrate(const std::function<double(UnitPoint)>& weight,
                   const QuadratureOptions& opts = {}) const;

 private:
  struct State {
    std::string label;
    Eval eval;
    EndpointExponents exponents;
    double lo, hi;
    std::vector<double> breakpoints;
    double phi_one = 0.0;
  };
  std::shared_ptr<const State> state_;
};

/// A switching probability function p: (0,1) -> [0,1].
class SwitchingFunction {
 public:
  using Eval = std::function<double(UnitPoint)>;

  /// `order_at_zero`/`order_at_one`: p(u) = O(u^q0) near 0 and O((1-u)^q1)
  /// near 1; used to bound the singularity of switched densities.
  SwitchingFunction(std::string label, Eval eval, std::vector<double> breakpoints = {},
                    double order_at_zero = 0.0, double order_at_one = 0.0);

  double operator()(double u) const { return (*this)(UnitPoint{u, 1.0 - u}); }
  double operator()(UnitPoint x) const { return state_->eval(x); }

  const std::string& label() const { return state_->label; }
  const std::vector<double>& breakpoints() const { return state_->breakpoints; }
  double order_at_zero() const { return state_->q0; }
  double order_at_one() const { return state_->q1; }

  static SwitchingFunction never();
  static SwitchingFunction always();
  /// p(u) = 1 - u.
  static SwitchingFunction size_biased();
  /// p(u) = 1 for u < 1/2, 0 otherwise: switch if the other block is bigger.
  static SwitchingFunction bigger_block();
  static SwitchingFunction constant(double c);

 private:
  struct State {
    std::string label;
    Eval eval;
    std::vector<double> breakpoints;
    double q0, q1;
  };
  std::shared_ptr<const State> state_;
};

/// 1 - u^rho evaluated without cancellation near u = 1.
double one_minus_pow(UnitPoint x, double rho);

/// Phi(rho) = int (1 - u^rho) u f(u) du.
double laplace_exponent(const SplittingDensity& f, double rho, const QuadratureOptions& opts = {});

/// Phi(rho+1, rho+1) = int (1-u)^{rho+1} u f(u) du.
double phi_second(const SplittingDensity& f, double rho, const QuadratureOptions& opts = {});

/// f*(u) = u f(u) + (1-u) f(1-u).
SplittingDensity symmetrize(const SplittingDensity& f);

/// Phi*(rho) = Phi(rho+1) - Phi(rho+1, rho+1), the exponent of symmetrize(f).
double symmetrized_exponent(const SplittingDensity& f, double rho,
                            const QuadratureOptions& opts = {});

struct SwitchedPair {
  SplittingDensity density;
  SwitchingFunction switching;
};

/// The dual (f^, p^) of switching f according to p:
///   u f^(u) = (1 - p(u)) u f(u) + p(1-u) (1-u) f(1-u),
///   p^(u)   = p(1-u) (1-u) f(1-u) / (u f^(u))   (0 where f^ vanishes).
SwitchedPair switch_dual(const SplittingDensity& f, const SwitchingFunction& p);

/// phi = int p(u) u f(u) du, cross-checked against the dual rate.
double switch_rate(const SplittingDensity& f, const SwitchingFunction& p,
                   const QuadratureOptions& opts = {});

/// int u^{n1-1} (1-u)^{n2} u f(u) du: the weight of the elementary split of
/// [n] into blocks of sizes n1 (containing 1) and n2.
double kappa_block_weight(const SplittingDensity& f, int n1, int n2,
                          const QuadratureOptions& opts = {});

/// int u f(u) du over the support (the total jump intensity).
double intensity_mass(const SplittingDensity& f, const QuadratureOptions& opts = {});

/// f restricted to (0, hi].
SplittingDensity restrict_below(const SplittingDensity& f, double hi);

/// weight(u) * f(u); weight must be bounded.
SplittingDensity reweight(const SplittingDensity& f, const std::function<double(UnitPoint)>& weight,
                          std::string label, const std::vector<double>& extra_breakpoints = {});

/// (2 pi)^{-1/2} u^{-3/2} (1-u)^{-3/2}: the splitting density of the Brownian CRT.
SplittingDensity brownian_density();

/// scale * u^{-a-1} (1-u)^{-b-1}; requires a < 1 and b < 1.
SplittingDensity beta_density(double a, double b, double scale = 1.0);

/// Tabulated density read from a text file (see docs/formats.md).
SplittingDensity load_tabulated_density(const std::string& path);

/// Registry lookup: "brownian", "beta(a,b)", "beta(a,b,scale)", "file:<path>".
SplittingDensity parse_density(const std::string& spec);

/// Registry lookup: "none", "always", "size_biased", "bigger_block", "const(c)".
SwitchingFunction parse_switching(const std::string& spec);

}  // namespace fragtree
