#include "fragtree/pointproc.hpp"

#include <algorithm>
#include <cmath>

namespace fragtree {

TruncationPolicy make_truncation(const SplittingDensity& f, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("truncation epsilon must lie in (0,1)");
  TruncationPolicy policy;
  policy.epsilon = epsilon;
  double cut = 1.0 - epsilon;
  policy.bias_bound = f.integrate([cut](UnitPoint x) {
    if (x.u <= cut) return 0.0;
    return x.v < 0.5 ? -std::log1p(-x.v) : -std::log(x.u);
  });
  return policy;
}

FactorSampler::FactorSampler(const SplittingDensity& f, int knots) : f_(f) {
  auto units = unit_pieces(f.support_lo(), f.support_hi(), f.breakpoints(), f.exponents());
  if (units.empty()) return;
  int per_piece = std::max(32, knots / static_cast<int>(units.size()));
  QuadratureOptions opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-13;
  opts.max_panels = 200;

  for (const auto& unit : units) {
    Piece piece;
    piece.map = unit;
    auto g = [&](double t) {
      UnitPoint x = unit.point(t);
      if (!(x.u > 0.0) || !(x.v > 0.0)) return 0.0;
      return x.u * f_(x) * unit.jacobian(t);
    };
    piece.t.resize(per_piece + 1);
    piece.cdf.assign(per_piece + 1, 0.0);
    piece.slope.assign(per_piece + 1, 0.0);
    for (int j = 0; j <= per_piece; ++j) piece.t[j] = static_cast<double>(j) / per_piece;
    for (int j = 0; j < per_piece; ++j) {
      double part;
      try {
        part = integrate_adaptive(g, piece.t[j], piece.t[j + 1], opts).value;
      } catch (const QuadratureError& e) {
        // A tolerance miss on a finite piece is tolerated; a residual of the
        // order of the value means the intensity diverges.
        if (!std::isfinite(e.value()) || !(e.residual() < 1e-6 * std::max(1.0, std::abs(e.value())))) {
          throw DomainError("intensity u f(u) of '" + f.label() +
                            "' is not integrable; truncate it below 1");
        }
        part = e.value();
      }
      piece.cdf[j + 1] = piece.cdf[j] + part;
    }
    // Hermite slopes: exact derivative where finite, then Fritsch-Carlson limiting.
    std::size_t n = piece.t.size();
    double h = 1.0 / per_piece;
    std::vector<double> secant(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) secant[j] = (piece.cdf[j + 1] - piece.cdf[j]) / h;
    for (std::size_t j = 0; j < n; ++j) {
      UnitPoint x = unit.point(piece.t[j]);
      double d = x.u > 0.0 && x.v > 0.0 ? g(piece.t[j]) : -1.0;
      if (!std::isfinite(d) || d < 0.0) d = secant[std::min(j, n - 2)];
      piece.slope[j] = d;
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
      double delta = secant[j];
      if (delta <= 0.0) {
        piece.slope[j] = 0.0;
        piece.slope[j + 1] = 0.0;
        continue;
      }
      double a = piece.slope[j] / delta;
      double b = piece.slope[j + 1] / delta;
      double r = a * a + b * b;
      if (r > 9.0) {
        double s = 3.0 / std::sqrt(r);
        piece.slope[j] = s * a * delta;
        piece.slope[j + 1] = s * b * delta;
      }
    }
    // Guide table: guide[g] is the knot interval containing the g/G quantile.
    piece.guide.resize(n - 1);
    std::size_t at = 0;
    for (std::size_t g = 0; g < piece.guide.size(); ++g) {
      double level = piece.cdf.back() * static_cast<double>(g) / piece.guide.size();
      while (at + 2 < n && piece.cdf[at + 1] <= level) ++at;
      piece.guide[g] = at;
    }
    offsets_.push_back(mass_);
    mass_ += piece.cdf.back();
    pieces_.push_back(std::move(piece));
  }
  if (!std::isfinite(mass_)) {
    throw DomainError("intensity u f(u) of '" + f.label() + "' has infinite mass");
  }
}

double FactorSampler::spline(const Piece& p, std::size_t i, double s) const {
  // C(s) - C(0); written in increments to avoid cancellation against C(0).
  double h = p.t[i + 1] - p.t[i];
  double s2 = s * s, s3 = s2 * s;
  return (-2 * s3 + 3 * s2) * (p.cdf[i + 1] - p.cdf[i]) + (s3 - 2 * s2 + s) * h * p.slope[i] +
         (s3 - s2) * h * p.slope[i + 1];
}

double FactorSampler::spline_slope(const Piece& p, std::size_t i, double s) const {
  double h = p.t[i + 1] - p.t[i];
  double s2 = s * s;
  return (-6 * s2 + 6 * s) * (p.cdf[i + 1] - p.cdf[i]) + (3 * s2 - 4 * s + 1) * h * p.slope[i] +
         (3 * s2 - 2 * s) * h * p.slope[i + 1];
}

UnitPoint FactorSampler::sample(Rng& rng) const {
  if (degenerate()) throw DomainError("cannot sample from a degenerate intensity");
  for (;;) {
    double target = uniform01(rng) * mass_;
    std::size_t k = static_cast<std::size_t>(
        std::upper_bound(offsets_.begin(), offsets_.end(), target) - offsets_.begin());
    k = k == 0 ? 0 : k - 1;
    const Piece& p = pieces_[k];
    double local = target - offsets_[k];
    double total = p.cdf.back();
    std::size_t g = total > 0.0 ? static_cast<std::size_t>(local / total * p.guide.size()) : 0;
    std::size_t i = p.guide[std::min(g, p.guide.size() - 1)];
    while (i + 2 < p.cdf.size() && p.cdf[i + 1] <= local) ++i;

    // Safeguarded Newton on the monotone cubic.
    double lo = 0.0, hi = 1.0;
    double span = p.cdf[i + 1] - p.cdf[i];
    double want = local - p.cdf[i];
    double s = span > 0.0 ? std::clamp(want / span, 0.0, 1.0) : 0.5;
    for (int iter = 0; iter < 60; ++iter) {
      double r = spline(p, i, s) - want;
      if (r > 0.0) hi = s; else lo = s;
      double d = spline_slope(p, i, s);
      double next = d > 0.0 ? s - r / d : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - s) < 1e-13) {
        s = next;
        break;
      }
      s = next;
    }
    double t = p.t[i] + s * (p.t[i + 1] - p.t[i]);
    UnitPoint x = p.map.point(t);
    if (x.u > 0.0 && x.v > 0.0 && x.u < 1.0) return x;
  }
}

double FactorSampler::midpoint_error() const {
  double worst = 0.0;
  if (degenerate()) return worst;
  QuadratureOptions opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-13;
  opts.max_panels = 200;
  for (const auto& p : pieces_) {
    auto g = [&](double t) {
      UnitPoint x = p.map.point(t);
      if (!(x.u > 0.0) || !(x.v > 0.0)) return 0.0;
      return x.u * f_(x) * p.map.jacobian(t);
    };
    for (std::size_t i = 0; i + 1 < p.t.size(); ++i) {
      double mid = 0.5 * (p.t[i] + p.t[i + 1]);
      double exact;
      try {
        exact = p.cdf[i] + integrate_adaptive(g, p.t[i], mid, opts).value;
      } catch (const QuadratureError& e) {
        exact = p.cdf[i] + e.value();
      }
      worst = std::max(worst, std::abs(p.cdf[i] + spline(p, i, 0.5) - exact) / mass_);
    }
  }
  return worst;
}

std::vector<JumpPoint> sample_points(const FactorSampler& sampler, double t0, double t1, Rng& rng) {
  std::vector<JumpPoint> out;
  if (!(t1 > t0) || sampler.degenerate()) return out;
  std::uint64_t n = poisson(rng, (t1 - t0) * sampler.mass());
  out.resize(n);
  for (auto& pt : out) pt.time = t0 + (t1 - t0) * uniform01(rng);
  std::sort(out.begin(), out.end(),
            [](const JumpPoint& a, const JumpPoint& b) { return a.time < b.time; });
  for (auto& pt : out) {
    UnitPoint x = sampler.sample(rng);
    pt.factor = x.u;
    pt.gap = x.v;
  }
  return out;
}

PointSample sample_points(const SplittingDensity& f, double horizon, const TruncationPolicy& policy,
                          Rng& rng) {
  PointSample out;
  if (!(horizon > 0.0)) return out;
  FactorSampler sampler(restrict_below(f, 1.0 - policy.epsilon));
  out.degenerate = sampler.degenerate();
  out.points = sample_points(sampler, 0.0, horizon, rng);
  return out;
}

std::optional<Mark> first_marked_time(const std::vector<JumpPoint>& points,
                                      const SwitchingFunction& p, Rng& rng) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    double q = p(UnitPoint{points[i].factor, points[i].gap});
    if (uniform01(rng) < q) return Mark{points[i].time, i};
  }
  return std::nullopt;
}

double conditional_survival(const std::vector<JumpPoint>& points, const SwitchingFunction& p,
                            double t) {
  double survival = 1.0;
  for (const auto& pt : points) {
    if (pt.time > t) break;
    survival *= 1.0 - p(UnitPoint{pt.factor, pt.gap});
  }
  return survival;
}

}  // namespace fragtree
