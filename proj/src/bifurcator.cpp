#include "fragtree/bifurcator.hpp"

#include <cmath>

namespace fragtree {

namespace {

SplittingDensity truncated(const SplittingDensity& f, double epsilon) {
  return epsilon > 0.0 ? restrict_below(f, 1.0 - epsilon) : f;
}

double checked_rate(const SplittingDensity& f, const SwitchingFunction& p) {
  double phi = fragtree::switch_rate(f, p);
  if (!(phi > 0.0) || !std::isfinite(phi)) {
    throw DomainError("switching '" + p.label() + "' of '" + f.label() +
                      "' has rate " + std::to_string(phi) + "; need 0 < phi < inf");
  }
  return phi;
}

}  // namespace

JunctionTriple junction_triple(const BifurcatorPair& pair) {
  // 1 - M_{tau-} from the log so that small total decrements keep precision.
  double below = -std::expm1(pair.log_mass_before());
  return {below, pair.mass_switched(), pair.mass_after()};
}

Bifurcator::Bifurcator(const SplittingDensity& f, const SwitchingFunction& p, double epsilon)
    : p_(p),
      phi_(checked_rate(truncated(f, epsilon), p)),
      common_(reweight(truncated(f, epsilon), [p](UnitPoint x) { return 1.0 - p(x); },
                       "(1-p)" + truncated(f, epsilon).label(), p.breakpoints()),
              0.0),
      junction_(reweight(truncated(f, epsilon), [p](UnitPoint x) { return p(x); },
                         "p" + truncated(f, epsilon).label(), p.breakpoints())),
      forward_(f, epsilon),
      dual_(switch_dual(truncated(f, epsilon), p).density, 0.0) {}

BifurcatorPair Bifurcator::simulate(Rng& rng) const {
  BifurcatorPair pair;
  pair.tau = standard_exponential(rng) / phi_;
  UnitPoint u = junction_.sample(rng);
  pair.U = u.u;
  pair.U_gap = u.v;
  pair.common = common_.simulate(pair.tau, rng);
  pair.common.epsilon = forward_.policy().epsilon;
  pair.continuation_M.epsilon = forward_.policy().epsilon;
  return pair;
}

TailRates Bifurcator::tail_rates(double rho) const {
  return {rho, laplace_exponent(forward_.simulated(), rho),
          laplace_exponent(dual_.simulated(), rho)};
}

Lengths Bifurcator::sample_lengths(BifurcatorPair& pair, const TailRates& rates, Rng& rng,
                                   const FunctionalOptions& opts) const {
  double rho = rates.rho;
  Lengths out;
  out.L0 = path_integral(pair.common, rho, pair.tau);
  double kept = std::pow(pair.mass_after(), rho);
  double switched = std::pow(pair.mass_switched(), rho);
  out.Lsigma = kept * forward_.exponential_functional(pair.continuation_M, rho, rates.forward,
                                                      rng, opts).value();
  out.Lstar = switched * dual_.exponential_functional(pair.continuation_Mhat, rho, rates.dual,
                                                      rng, opts).value();
  return out;
}

JunctionMoments junction_mellin(const SplittingDensity& f, double rho) {
  if (!(rho > 0.0)) throw DomainError("junction moments require rho > 0");
  double phi1 = laplace_exponent(f, 1.0);
  double phi2 = laplace_exponent(f, 2.0);
  double phir = laplace_exponent(f, rho);
  double phir1 = laplace_exponent(f, rho + 1.0);
  JunctionMoments m;
  m.before = phi1 / phir1;
  m.after = (phir1 - phir) / phir1;
  m.switched = phi_second(f, rho) / phir1;
  m.ratio = (phir1 - phir) / phi1;
  m.complement = (phi2 - phi1) / phi2;
  return m;
}

LengthMoments length_moments(const SplittingDensity& f, double rho, int n) {
  if (!(rho > 0.0) || n < 1) throw DomainError("length moments require rho > 0 and n >= 1");
  double fact = std::tgamma(n + 1.0);
  double prod = 1.0, prod1 = 1.0, prod_star = 1.0;
  for (int k = 1; k <= n; ++k) {
    prod *= laplace_exponent(f, k * rho);
    prod1 *= laplace_exponent(f, k * rho + 1.0);
    prod_star *= symmetrized_exponent(f, k * rho);
  }
  double rn = rho * n;
  double phirn = laplace_exponent(f, rn);
  double phirn1 = laplace_exponent(f, rn + 1.0);
  LengthMoments m;
  m.total = fact / prod;
  m.L0 = fact / prod1;
  m.Lsigma = (phirn1 - phirn) / phirn1 * m.total;
  m.total_star = fact / prod_star;
  m.Lstar = phi_second(f, rn) / phirn1 * m.total_star;
  return m;
}

}  // namespace fragtree
