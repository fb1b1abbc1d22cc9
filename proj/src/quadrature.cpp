#include "fmdn/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "fmdn/errors.hpp"

namespace fmdn {

GaussLegendreRule GaussLegendreRule::make(std::size_t n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on the three-term recurrence.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double GaussLegendreRule::integrate(const std::function<double(double)>& f, double a,
                                    double b) const {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
  return sum * half;
}

namespace {

const GaussLegendreRule& cached_rule(std::size_t order) {
  static std::mutex mu;
  static std::map<std::size_t, GaussLegendreRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, GaussLegendreRule::make(order)).first;
  return it->second;
}

struct Panel {
  double a, b, estimate;
  int depth;
};

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& opts) {
  QuadratureResult out;
  if (!(b > a)) return out;
  const GaussLegendreRule& rule = cached_rule(opts.order);
  const std::size_t per_panel = rule.nodes.size();

  const double whole = rule.integrate(f, a, b);
  out.evaluations += per_panel;

  // Panels are refined depth-first; the tolerance is split by panel width.
  std::vector<Panel> stack{{a, b, whole, 0}};
  const double width = b - a;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double left = rule.integrate(f, p.a, m);
    const double right = rule.integrate(f, m, p.b);
    out.evaluations += 2 * per_panel;
    const double refined = left + right;
    const double err = std::abs(refined - p.estimate);
    const double share = (p.b - p.a) / width;
    const double tol = std::max(opts.rel_tol * std::abs(refined), opts.abs_tol * share);
    if (err <= tol) {
      out.value += refined;
      out.error_estimate += err;
      ++out.intervals;
      continue;
    }
    if (p.depth >= opts.max_depth) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge on [" << p.a << ", " << p.b
          << "]: error estimate " << err << " > tolerance " << tol;
      throw NumericalError(msg.str(), {msg.str()});
    }
    stack.push_back({m, p.b, right, p.depth + 1});
    stack.push_back({p.a, m, left, p.depth + 1});
  }
  return out;
}

}  // namespace fmdn
