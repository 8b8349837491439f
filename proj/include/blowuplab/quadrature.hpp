#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "blowuplab/common.hpp"

namespace blowuplab {

struct GaussRule {
  std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

namespace detail {

// Nodes by Newton iteration on the Legendre recurrence; weights from the
// derivative identity w_i = 2 / ((1 - x_i^2) P_n'(x_i)^2).
inline GaussRule make_gauss_rule(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.x[i] = -x;
    rule.w[i] = w;
    rule.x[n - 1 - i] = x;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace detail

inline const GaussRule& gauss16() {
  static const GaussRule r = detail::make_gauss_rule(16);
  return r;
}

inline const GaussRule& gauss64() {
  static const GaussRule r = detail::make_gauss_rule(64);
  return r;
}

template <class F>
double gauss_panel(F&& f, double a, double b, const GaussRule& rule) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i)
    s += rule.w[i] * f(mid + half * rule.x[i]);
  return half * s;
}

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimate from the last refinement step
  int panels = 0;
};

// Composite Gauss-Legendre with uniform panel doubling; the difference of
// consecutive refinement levels serves as the error estimate. Throws
// numerical_error (reporting the achieved estimate) if the relative tolerance
// is not met within max_levels doublings.
template <class F>
QuadResult composite_gauss(F&& f, double a, double b, double rel_tol = 1e-9,
                           int max_levels = 14) {
  if (!(b >= a)) throw contract_error("composite_gauss: requires b >= a");
  if (a == b) return {0.0, 0.0, 0};
  const GaussRule& rule = gauss16();
  double prev = gauss_panel(f, a, b, rule);
  int panels = 1;
  double achieved = INFINITY;
  for (int level = 1; level <= max_levels; ++level) {
    panels *= 2;
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i)
      sum += gauss_panel(f, a + i * h, a + (i + 1) * h, rule);
    const double err = std::abs(sum - prev);
    const double scale = std::max(std::abs(sum), 1e-300);
    achieved = err / scale;
    if (err <= rel_tol * scale) return {sum, err, panels};
    prev = sum;
  }
  throw numerical_error(
      "composite_gauss: quadrature did not converge; achieved relative error "
      "estimate " +
      fmt_g(achieved) + " at " + fmt_g(panels) + " panels");
}

// Variant that never throws; the caller inspects .error.
template <class F>
QuadResult composite_gauss_estimate(F&& f, double a, double b,
                                    double rel_tol = 1e-9,
                                    int max_levels = 14) {
  try {
    return composite_gauss(std::forward<F>(f), a, b, rel_tol, max_levels);
  } catch (const numerical_error&) {
    QuadResult r;
    r.value = std::nan("");
    r.error = std::nan("");
    r.panels = 1 << max_levels;
    return r;
  }
}

}  // namespace blowuplab
