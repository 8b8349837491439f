#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "blowuplab/common.hpp"
#include "blowuplab/exponents.hpp"
#include "blowuplab/problem.hpp"
#include "blowuplab/solver.hpp"

namespace blowuplab {

// --- spatially homogeneous reference ODE ------------------------------------
//   u'' + mu (1+t)^{-beta} u' = |u|^p
// integrated with the adaptive Dormand-Prince 5(4) pair.  Supplies an
// independent blow-up time oracle for the extrapolation estimator.

struct OdeBlowupResult {
  RunStatus status = RunStatus::ReachedTmax;
  double t_end = 0.0;
  double u_end = 0.0;
  BlowupEstimate estimate;
  std::vector<double> ts, us;  // accepted steps
};

namespace detail {

// Shared z-intercept fit: z = u^{-(p-1)/2} against t over the trailing
// monotone window; the line's zero crossing estimates the blow-up time.
inline BlowupEstimate fit_z_intercept(std::span<const double> ts,
                                      std::span<const double> us, double p,
                                      double pad, int window) {
  BlowupEstimate est;
  std::size_t end = us.size();
  while (end > 0 && !std::isfinite(us[end - 1])) --end;
  const double t_last = end > 0 ? ts[end - 1] : 0.0;
  auto fallback = [&] {
    est.T_est = t_last + pad;
    est.T_lo = t_last;
    est.T_hi = t_last + window * pad;
    est.from_fit = false;
    return est;
  };
  const std::size_t w =
      std::min<std::size_t>(static_cast<std::size_t>(window), end);
  if (w < 5) return fallback();
  for (std::size_t i = end - w + 1; i < end; ++i)
    if (!(us[i] > us[i - 1] && us[i] > 0.0)) return fallback();

  double st = 0.0, sz = 0.0, stt = 0.0, stz = 0.0;
  std::vector<double> zz(w);
  for (std::size_t j = 0; j < w; ++j) {
    const std::size_t i = end - w + j;
    zz[j] = std::pow(us[i], -0.5 * (p - 1.0));
    st += ts[i];
    sz += zz[j];
    stt += ts[i] * ts[i];
    stz += ts[i] * zz[j];
  }
  const double wn = static_cast<double>(w);
  const double det = wn * stt - st * st;
  if (det <= 0.0) return fallback();
  const double b = (wn * stz - st * sz) / det;
  const double a = (sz - b * st) / wn;
  if (!(b < 0.0)) return fallback();
  const double T = -a / b;
  if (!(T > t_last) || !std::isfinite(T)) return fallback();
  double ss = 0.0;
  for (std::size_t j = 0; j < w; ++j) {
    const double r = zz[j] - (a + b * ts[end - w + j]);
    ss += r * r;
  }
  est.T_est = T;
  est.T_lo = t_last;
  est.T_hi = T + std::max(2.0 * std::sqrt(ss / wn) / (-b), pad);
  est.slope = b;
  est.from_fit = true;
  return est;
}

}  // namespace detail

inline OdeBlowupResult ode_blowup(double u0, double u1, double mu, double beta,
                                  double p, double horizon,
                                  double u_stop = 1e8) {
  if (!(p > 1.0)) throw contract_error("ode_blowup: requires p > 1");
  if (!(mu >= 0.0)) throw contract_error("ode_blowup: requires mu >= 0");
  if (!(horizon > 0.0)) throw contract_error("ode_blowup: requires horizon > 0");
  if (!(u_stop > 0.0)) throw contract_error("ode_blowup: requires u_stop > 0");

  auto rhs = [mu, beta, p](double t, const double y[2], double dy[2]) {
    dy[0] = y[1];
    dy[1] = std::pow(std::abs(y[0]), p) -
            mu * std::pow(1.0 + t, -beta) * y[1];
  };

  // Dormand-Prince 5(4) coefficients (FSAL).
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  const double rtol = 1e-10, atol = 1e-13;

  OdeBlowupResult out;
  double t = 0.0;
  double y[2] = {u0, u1};
  double k1[2], k2[2], k3[2], k4[2], k5[2], k6[2], k7[2];
  rhs(t, y, k1);
  double h = 1e-4;
  out.ts.push_back(0.0);
  out.us.push_back(u0);

  long accepted = 0, tries = 0;
  double last_h = h;
  while (t < horizon && std::abs(y[0]) < u_stop) {
    if (++tries > 4000000)
      throw numerical_error("ode_blowup: step budget exhausted");
    h = std::min(h, horizon - t);
    if (!(h > std::abs(t) * 1e-15 + 1e-300)) {
      out.status = std::abs(y[0]) >= 1e2 ? RunStatus::BlewUp
                                         : RunStatus::Unstable;
      break;
    }
    double yt[2];
    yt[0] = y[0] + h * a21 * k1[0];
    yt[1] = y[1] + h * a21 * k1[1];
    rhs(t + c2 * h, yt, k2);
    yt[0] = y[0] + h * (a31 * k1[0] + a32 * k2[0]);
    yt[1] = y[1] + h * (a31 * k1[1] + a32 * k2[1]);
    rhs(t + c3 * h, yt, k3);
    yt[0] = y[0] + h * (a41 * k1[0] + a42 * k2[0] + a43 * k3[0]);
    yt[1] = y[1] + h * (a41 * k1[1] + a42 * k2[1] + a43 * k3[1]);
    rhs(t + c4 * h, yt, k4);
    yt[0] = y[0] + h * (a51 * k1[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0]);
    yt[1] = y[1] + h * (a51 * k1[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1]);
    rhs(t + c5 * h, yt, k5);
    yt[0] = y[0] + h * (a61 * k1[0] + a62 * k2[0] + a63 * k3[0] +
                        a64 * k4[0] + a65 * k5[0]);
    yt[1] = y[1] + h * (a61 * k1[1] + a62 * k2[1] + a63 * k3[1] +
                        a64 * k4[1] + a65 * k5[1]);
    rhs(t + h, yt, k6);
    double y5[2];
    for (int i = 0; i < 2; ++i)
      y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                          b6 * k6[i]);
    rhs(t + h, y5, k7);

    double err = 0.0;
    bool finite = std::isfinite(y5[0]) && std::isfinite(y5[1]);
    for (int i = 0; i < 2 && finite; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                            e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc =
          atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(e) / sc);
    }
    if (!finite || !(err <= 1.0)) {
      const double shrink =
          finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= shrink;
      continue;
    }
    t += h;
    y[0] = y5[0];
    y[1] = y5[1];
    k1[0] = k7[0];
    k1[1] = k7[1];
    out.ts.push_back(t);
    out.us.push_back(y[0]);
    last_h = h;
    ++accepted;
    const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(grow, 0.2, 5.0);
  }

  out.t_end = t;
  out.u_end = y[0];
  if (std::abs(y[0]) >= u_stop) out.status = RunStatus::BlewUp;
  else if (t >= horizon && out.status != RunStatus::BlewUp &&
           out.status != RunStatus::Unstable)
    out.status = RunStatus::ReachedTmax;
  if (out.status == RunStatus::BlewUp)
    out.estimate = detail::fit_z_intercept(out.ts, out.us, p, last_h, 20);
  return out;
}

// --- grid policy -------------------------------------------------------------

struct GridPolicy {
  double lifespan_coefficient = 10.0;  // T_pred = coefficient * eps^{-k}
  double dr_cap = 0.01;
  double t_max_factor = 4.0;
  double points_per_lifespan = 4000.0;
};

// Sizes the grid from the theoretical lifespan exponent of the chosen track:
// predict T, run to a safe multiple of it, and resolve T with a few thousand
// time steps at minimum.
inline GridSpec plan_grid(const ProblemConfig& pc, LifespanVariant v,
                          const GridPolicy& gp = {}) {
  const double k = lifespan_exponent(pc.n, pc.p, v);
  const double T_pred = gp.lifespan_coefficient * std::pow(pc.eps, -k);
  GridSpec g;
  g.dr = std::min(gp.dr_cap, T_pred / gp.points_per_lifespan);
  g.cfl = default_cfl(pc.n);
  g.t_max = gp.t_max_factor * T_pred;
  g.r_max = g.t_max + pc.R + 4.0 * g.dr;
  return g;
}

// --- sweeps ------------------------------------------------------------------

struct SweepPoint {
  double eps = 0.0;
  RunStatus status = RunStatus::ReachedTmax;
  BlowupEstimate estimate;
  double t_end = 0.0;
  bool retried = false;
};

struct SweepResult {
  LifespanVariant variant = LifespanVariant::General;
  std::vector<SweepPoint> points;
};

namespace detail {

inline unsigned sweep_thread_count(std::size_t jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("BLOWUPLAB_THREADS")) {
    char* rest = nullptr;
    const long v = std::strtol(env, &rest, 10);
    if (rest != env && v >= 1 && v <= 64) hw = static_cast<unsigned>(v);
  }
  return std::max(1u, std::min<unsigned>(hw, static_cast<unsigned>(jobs)));
}

}  // namespace detail

// Runs one solve per eps (strictly decreasing, at least 4 values) on a small
// worker pool (capped by BLOWUPLAB_THREADS).  A run that reaches t_max gets
// one retry with the horizon doubled.  Results merge by index, so the output
// is deterministic regardless of scheduling; an unstable run becomes a
// numerical_error after the merge, reported for the smallest such index.
inline SweepResult run_sweep(const ProblemConfig& base,
                             std::span<const double> eps_values,
                             LifespanVariant v, const GridPolicy& gp = {}) {
  if (eps_values.size() < 4)
    throw contract_error("run_sweep: requires at least 4 eps values");
  for (std::size_t i = 0; i < eps_values.size(); ++i) {
    if (!(eps_values[i] > 0.0))
      throw contract_error("run_sweep: requires eps > 0");
    if (i > 0 && !(eps_values[i] < eps_values[i - 1]))
      throw contract_error("run_sweep: requires strictly decreasing eps values");
  }
  lifespan_exponent(base.n, base.p, v);  // validates the (n, p, track) cell

  SweepResult out;
  out.variant = v;
  out.points.resize(eps_values.size());
  std::vector<std::exception_ptr> errors(eps_values.size());

  auto task = [&](std::size_t i) {
    try {
      ProblemConfig pc = base;
      pc.eps = eps_values[i];
      GridSpec g = plan_grid(pc, v, gp);
      SolveOptions so;
      so.trace_stride = 1 << 30;  // sweep points do not need the trace
      SolveResult r = solve(pc, g, so);
      bool retried = false;
      if (r.status == RunStatus::ReachedTmax) {
        retried = true;
        g.t_max *= 2.0;
        g.r_max = g.t_max + pc.R + 4.0 * g.dr;
        r = solve(pc, g, so);
      }
      out.points[i] =
          SweepPoint{pc.eps, r.status, r.blowup, r.t_end, retried};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const unsigned nthreads = detail::sweep_thread_count(eps_values.size());
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < eps_values.size(); ++i) task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned w = 0; w < nthreads; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= eps_values.size()) return;
          task(i);
        }
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < eps_values.size(); ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
  for (std::size_t i = 0; i < eps_values.size(); ++i)
    if (out.points[i].status == RunStatus::Unstable)
      throw numerical_error("run_sweep: run at eps = " +
                            fmt_g(out.points[i].eps) +
                            " went unstable; refine the grid");
  return out;
}

// --- power-law fit and theory comparison -------------------------------------

struct PowerLawFit {
  double slope = 0.0;      // d log T / d log eps (expected negative)
  double intercept = 0.0;  // log T at eps = 1
  double r_squared = 0.0;
  double theory_exponent = 0.0;
  double relative_deviation = 0.0;  // | |slope| - theory | / theory
  int points_used = 0;
};

inline PowerLawFit fit_power_law(const SweepResult& sweep,
                                 double theory_exponent) {
  if (!(theory_exponent > 0.0))
    throw contract_error("fit_power_law: requires theory_exponent > 0");
  std::vector<double> x, y;
  for (const SweepPoint& pt : sweep.points)
    if (pt.status == RunStatus::BlewUp && pt.estimate.T_est > 0.0) {
      x.push_back(std::log(pt.eps));
      y.push_back(std::log(pt.estimate.T_est));
    }
  if (x.size() < 4)
    throw contract_error(
        "fit_power_law: requires at least 4 blown-up sweep points");

  const double nn = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double det = nn * sxx - sx * sx;
  if (det <= 0.0)
    throw contract_error("fit_power_law: degenerate eps values");
  PowerLawFit fit;
  fit.slope = (nn * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / nn;
  const double ss_tot = syy - sy * sy / nn;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.theory_exponent = theory_exponent;
  fit.relative_deviation =
      std::abs(std::abs(fit.slope) - theory_exponent) / theory_exponent;
  fit.points_used = static_cast<int>(x.size());
  return fit;
}

struct TheoryComparison {
  double fitted_exponent = 0.0;    // |slope| from the sweep fit
  double general_exponent = 0.0;   // general-track bound (NaN if inapplicable)
  double improved_exponent = 0.0;  // low-dim improved bound (NaN if inapplicable)
  double binding_exponent = 0.0;   // smallest applicable bound
  bool consistent = false;         // fitted <= binding * (1 + tolerance)
  double tolerance = 0.0;
  std::string statement;
};

// The published results are upper bounds T <= C eps^{-k}; consistency means
// the measured lifespan does not grow faster than the binding (smallest
// applicable) k allows, within tolerance.
inline TheoryComparison compare_to_theory(const PowerLawFit& fit, int n,
                                          double p, double beta, double mu,
                                          bool nonzero_integral,
                                          double tol = 0.25) {
  if (!(beta > 1.0))
    throw contract_error(
        "compare_to_theory: only the scattering range beta > 1 is supported");
  if (!(mu > 0.0)) throw contract_error("compare_to_theory: requires mu > 0");
  const double nan = std::numeric_limits<double>::quiet_NaN();

  TheoryComparison cmp;
  cmp.fitted_exponent = std::abs(fit.slope);
  cmp.tolerance = tol;
  cmp.general_exponent = nan;
  cmp.improved_exponent = nan;

  if (n == 1 || (n >= 2 && n <= 3 && p < strauss_exponent(n)))
    cmp.general_exponent = lifespan_exponent(n, p, LifespanVariant::General);
  if (nonzero_integral && n == 1)
    cmp.improved_exponent = lifespan_exponent(n, p, LifespanVariant::OneD);
  if (nonzero_integral && n == 2 && p < 2.0)
    cmp.improved_exponent = lifespan_exponent(n, p, LifespanVariant::TwoDLowP);

  double binding = INFINITY;
  const char* which = "none";
  if (std::isfinite(cmp.general_exponent) &&
      cmp.general_exponent < binding) {
    binding = cmp.general_exponent;
    which = "general";
  }
  if (std::isfinite(cmp.improved_exponent) &&
      cmp.improved_exponent < binding) {
    binding = cmp.improved_exponent;
    which = "improved low-dimension";
  }
  if (!std::isfinite(binding))
    throw contract_error(
        "compare_to_theory: no published bound applies to this cell");

  cmp.binding_exponent = binding;
  cmp.consistent = cmp.fitted_exponent <= binding * (1.0 + tol);
  cmp.statement = std::string("fitted |slope| = ") + fmt_g(cmp.fitted_exponent) +
                  (cmp.consistent ? " respects" : " violates") +
                  " the binding upper bound eps^-" + fmt_g(binding) +
                  " from the " + which + " estimate (tolerance " +
                  fmt_g(tol) + ")";
  return cmp;
}

}  // namespace blowuplab
