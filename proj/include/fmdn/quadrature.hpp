#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fmdn {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Nodes and weights by Newton iteration on P_n; accurate to ~1e-15.
  static GaussLegendreRule make(std::size_t order);

  double integrate(const std::function<double(double)>& f, double a, double b) const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t intervals = 0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  std::size_t order = 64;
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  int max_depth = 30;
};

/// Adaptive Gauss-Legendre with dyadic bisection. Each panel is accepted
/// when the one-panel estimate agrees with the sum over its two halves.
/// Throws NumericalError if a panel still fails after `max_depth` splits.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, const QuadratureOptions& opts = {});

}  // namespace fmdn
