#include "fragtree/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fragtree {

namespace {

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const std::function<double(double)>& g, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  double err = 0.0;
  double value = GK::integrate(g, a, b, 0, 0.0, &err);
  return {a, b, value, err};
}

// Substitution power that flattens x^{-c} (c < 1) at an endpoint.
double flattening_power(double c) {
  if (!(c > 0.0)) return 1.0;
  if (c >= 1.0) return 8.0;
  return std::min(8.0, 1.0 / (1.0 - c));
}

constexpr double kLogRatio = 8.0;

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& g, double a, double b,
                                    const QuadratureOptions& opts) {
  QuadratureResult out;
  if (a == b) return out;
  std::priority_queue<Panel> heap;
  Panel first = evaluate_panel(g, a, b);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  int panels = 1;
  auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  while (total_err > tolerance() && panels < opts.max_panels) {
    Panel worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    Panel left = evaluate_panel(g, worst.a, mid);
    Panel right = evaluate_panel(g, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-sum from the panels to shed accumulated cancellation error.
  total = 0.0;
  total_err = 0.0;
  std::vector<Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& p : all) {
    total += p.value;
    total_err += p.error;
  }
  out.value = total;
  out.error = total_err;
  out.panels = panels;
  if (!std::isfinite(total) || !std::isfinite(total_err)) {
    throw QuadratureError("quadrature produced a non-finite value", total, total_err);
  }
  if (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b << "]: estimate " << total
        << ", residual " << total_err;
    throw QuadratureError(msg.str(), total, total_err);
  }
  return out;
}

UnitPoint UnitPiece::point(double t) const {
  switch (map) {
    case Map::Linear: {
      if (hi <= 0.5) {
        double u = lo + t * (hi - lo);
        return {u, 1.0 - u};
      }
      double v = (1.0 - lo) - t * (hi - lo);
      return {1.0 - v, v};
    }
    case Map::PowerAtZero: {
      double u = hi * std::pow(t, power);
      return {u, 1.0 - u};
    }
    case Map::PowerAtOne: {
      double v = (1.0 - lo) * std::pow(1.0 - t, power);
      return {1.0 - v, v};
    }
    case Map::LogLeft: {
      double u = lo * std::pow(hi / lo, t);
      return {u, 1.0 - u};
    }
    case Map::LogRight: {
      double vmax = 1.0 - lo;
      double vmin = 1.0 - hi;
      double v = vmax * std::pow(vmin / vmax, t);
      return {1.0 - v, v};
    }
  }
  return {0.0, 1.0};
}

double UnitPiece::jacobian(double t) const {
  switch (map) {
    case Map::Linear:
      return hi - lo;
    case Map::PowerAtZero:
      return hi * power * std::pow(t, power - 1.0);
    case Map::PowerAtOne:
      return (1.0 - lo) * power * std::pow(1.0 - t, power - 1.0);
    case Map::LogLeft: {
      double u = lo * std::pow(hi / lo, t);
      return u * std::log(hi / lo);
    }
    case Map::LogRight: {
      double vmax = 1.0 - lo;
      double vmin = 1.0 - hi;
      double v = vmax * std::pow(vmin / vmax, t);
      return v * std::log(vmax / vmin);
    }
  }
  return 0.0;
}

std::vector<UnitPiece> unit_pieces(double lo, double hi, const std::vector<double>& breakpoints,
                                   EndpointExponents exps) {
  std::vector<double> cuts{lo, hi};
  if (lo < 0.5 && hi > 0.5) cuts.push_back(0.5);
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<UnitPiece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    UnitPiece p;
    p.lo = cuts[i];
    p.hi = cuts[i + 1];
    if (!(p.hi > p.lo)) continue;
    bool left = p.hi <= 0.5;
    if (left) {
      if (p.lo == 0.0) {
        p.map = UnitPiece::Map::PowerAtZero;
        p.power = flattening_power(exps.at_zero - 1.0);
      } else if (p.hi / p.lo > kLogRatio) {
        p.map = UnitPiece::Map::LogLeft;
      }
    } else {
      double vmin = 1.0 - p.hi;
      double vmax = 1.0 - p.lo;
      if (p.hi == 1.0) {
        p.map = UnitPiece::Map::PowerAtOne;
        double c = exps.at_one >= 1.0 ? exps.at_one - 1.0 : exps.at_one;
        p.power = flattening_power(c);
      } else if (vmax / vmin > kLogRatio) {
        p.map = UnitPiece::Map::LogRight;
      }
    }
    pieces.push_back(p);
  }
  return pieces;
}

QuadratureResult integrate_unit(const std::function<double(UnitPoint)>& h, double lo, double hi,
                                const std::vector<double>& breakpoints, EndpointExponents exps,
                                const QuadratureOptions& opts) {
  QuadratureResult total;
  auto pieces = unit_pieces(lo, hi, breakpoints, exps);
  if (pieces.empty()) return total;
  QuadratureOptions piece_opts = opts;
  piece_opts.abs_tol = opts.abs_tol / static_cast<double>(pieces.size());
  for (const auto& piece : pieces) {
    auto g = [&](double t) {
      UnitPoint x = piece.point(t);
      if (!(x.u > 0.0) || !(x.v > 0.0)) return 0.0;
      return h(x) * piece.jacobian(t);
    };
    QuadratureResult r = integrate_adaptive(g, 0.0, 1.0, piece_opts);
    total.value += r.value;
    total.error += r.error;
    total.panels += r.panels;
  }
  return total;
}

}  // namespace fragtree
