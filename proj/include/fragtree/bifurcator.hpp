#pragma once

#include "fragtree/fragmenter.hpp"

namespace fragtree {

/// Two fragmenters that agree before tau and split the mass binarily there.
struct BifurcatorPair {
  FragmenterPath common;  // jumps of M^0 on [0, tau)
  double tau = 0.0;
  double U = 0.0;      // M_tau / M_{tau-}
  double U_gap = 1.0;  // 1 - U
  FragmenterPath continuation_M;
  FragmenterPath continuation_Mhat;

  double log_mass_before() const { return common.log_stopped_mass; }
  /// M_{tau-}
  double mass_before() const { return common.stopped_mass; }
  /// M_tau = U M_{tau-}
  double mass_after() const { return U * mass_before(); }
  /// Mhat_tau = (1 - U) M_{tau-}
  double mass_switched() const { return U_gap * mass_before(); }
};

struct JunctionTriple {
  double below;     // 1 - M_{tau-}
  double switched;  // Mhat_tau
  double kept;      // M_tau
};

/// (1 - M_{tau-}, Mhat_tau, M_tau); the components sum to 1.
JunctionTriple junction_triple(const BifurcatorPair& pair);

struct Lengths {
  double L0 = 0.0;
  double Lsigma = 0.0;
  double Lstar = 0.0;
};

/// Exponents of the two continuations at rho, used for tail corrections.
struct TailRates {
  double rho = 0.0;
  double forward = 0.0;
  double dual = 0.0;
};

/// The five-ingredient construction for the pair (f_eps, p): M^0 with density
/// (1 - p) f_eps killed at an independent Exp(phi) time tau, a junction factor
/// U with density p(u) u f_eps(u) / phi, and independent continuations driven
/// by f_eps and by the switched dual of f_eps.
class Bifurcator {
 public:
  Bifurcator(const SplittingDensity& f, const SwitchingFunction& p, double epsilon);

  double switch_rate() const { return phi_; }
  const SwitchingFunction& switching() const { return p_; }
  const Fragmenter& common() const { return common_; }
  const Fragmenter& forward() const { return forward_; }
  const Fragmenter& dual() const { return dual_; }

  BifurcatorPair simulate(Rng& rng) const;

  TailRates tail_rates(double rho) const;

  /// L0 from the common path, Lsigma and Lstar from the continuations, which
  /// are extended in place as needed.
  Lengths sample_lengths(BifurcatorPair& pair, const TailRates& rates, Rng& rng,
                         const FunctionalOptions& opts = {}) const;

 private:
  SwitchingFunction p_;
  double phi_;
  Fragmenter common_;
  FactorSampler junction_;
  Fragmenter forward_;
  Fragmenter dual_;
};

/// Analytic junction moments for size-biased switching p(u) = 1 - u.
struct JunctionMoments {
  double before;      // E M_{tau-}^rho = Phi(1)/Phi(rho+1)
  double after;       // E M_tau^rho = (Phi(rho+1) - Phi(rho))/Phi(rho+1)
  double switched;    // E Mhat_tau^rho = Phi(rho+1,rho+1)/Phi(rho+1)
  double ratio;       // E (M_tau/M_{tau-})^rho = (Phi(rho+1) - Phi(rho))/Phi(1)
  double complement;  // E (1 - M_{tau-}) = 1 - Phi(1)/Phi(2)
};

JunctionMoments junction_mellin(const SplittingDensity& f, double rho);

/// Analytic n-th moments of the exponential functionals at rho (size-biased switching).
struct LengthMoments {
  double total;   // E L_{0Sigma}^n = n!/(Phi(rho)...Phi(n rho))
  double L0;      // n!/(Phi(rho+1)...Phi(n rho+1))
  double Lsigma;  // E M_tau^{rho n} E L_{0Sigma}^n
  double Lstar;   // E Mhat_tau^{rho n} n!/(Phi*(rho)...Phi*(n rho))
  double total_star;
};

LengthMoments length_moments(const SplittingDensity& f, double rho, int n);

}  // namespace fragtree
