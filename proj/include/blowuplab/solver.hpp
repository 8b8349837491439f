#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "blowuplab/common.hpp"
#include "blowuplab/functionals.hpp"
#include "blowuplab/problem.hpp"

namespace blowuplab {

enum class RunStatus { ReachedTmax, BlewUp, Unstable };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ReachedTmax: return "reached-tmax";
    case RunStatus::BlewUp: return "blew-up";
    case RunStatus::Unstable: return "unstable";
  }
  return "?";
}

struct BlowupEstimate {
  double T_est = 0.0;
  double T_lo = 0.0;
  double T_hi = 0.0;
  double slope = 0.0;  // d/dt of umax^{-(p-1)/2} from the fit
  bool from_fit = false;
};

// OLS fit of z(t) = umax(t)^{-(p-1)/2} over the trailing `window` per-step
// samples; for the matching power law u ~ (T-t)^{-2/(p-1)} the fitted line
// hits zero exactly at the blow-up time, so T_est is its z-intercept.
// T_lo is the last computed time (the solution is still finite there) and
// T_hi pads T_est by the scatter of the fit.  A non-monotone or too-short
// tail falls back to a bracket just past the last sample.
inline BlowupEstimate estimate_blowup_time(std::span<const double> umax_series,
                                           double dt, double p,
                                           int window = 20) {
  if (!(p > 1.0)) throw contract_error("estimate_blowup_time: requires p > 1");
  if (!(dt > 0.0)) throw contract_error("estimate_blowup_time: requires dt > 0");
  if (umax_series.empty())
    throw contract_error("estimate_blowup_time: empty series");

  std::size_t end = umax_series.size();
  while (end > 0 && !std::isfinite(umax_series[end - 1])) --end;

  BlowupEstimate est;
  const double t_last = end > 0 ? static_cast<double>(end - 1) * dt : 0.0;
  auto fallback = [&] {
    est.T_est = t_last + dt;
    est.T_lo = t_last;
    est.T_hi = t_last + window * dt;
    est.from_fit = false;
    return est;
  };

  const std::size_t w =
      std::min<std::size_t>(static_cast<std::size_t>(window), end);
  if (w < 5) return fallback();
  for (std::size_t i = end - w + 1; i < end; ++i)
    if (!(umax_series[i] > umax_series[i - 1] && umax_series[i] > 0.0))
      return fallback();

  double st = 0.0, sz = 0.0, stt = 0.0, stz = 0.0;
  std::vector<double> ts(w), zs(w);
  for (std::size_t j = 0; j < w; ++j) {
    const std::size_t i = end - w + j;
    ts[j] = static_cast<double>(i) * dt;
    zs[j] = std::pow(umax_series[i], -0.5 * (p - 1.0));
    st += ts[j];
    sz += zs[j];
    stt += ts[j] * ts[j];
    stz += ts[j] * zs[j];
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
    const double r = zs[j] - (a + b * ts[j]);
    ss += r * r;
  }
  const double rms = std::sqrt(ss / wn);

  est.T_est = T;
  est.T_lo = t_last;
  est.T_hi = T + std::max(2.0 * rms / (-b), dt);
  est.slope = b;
  est.from_fit = true;
  return est;
}

struct SolveOptions {
  int trace_stride = 0;  // 0 => aim for ~2000 trace rows
  bool record_energy = false;
  double arm_threshold = 1e2;
  double blowup_threshold = 1e6;
  long exact_steps = 0;  // > 0 => run exactly this many steps, no t_max stop
};

struct SolveResult {
  RunStatus status = RunStatus::ReachedTmax;
  double t_end = 0.0;
  double umax_final = 0.0;
  BlowupEstimate blowup;  // meaningful when status == BlewUp
  FunctionalTrace trace;
  std::vector<double> umax_series;    // one entry per step, index k <-> t = k dt
  std::vector<double> energy_series;  // staggered energy, entry k <-> t = (k+1/2) dt
  std::vector<std::pair<double, double>> threshold_crossings;  // (level, t)
  std::vector<double> final_state;
  double dr = 0.0;
  double dt = 0.0;
};

// Explicit leapfrog for  u_tt - Lap u + mu (1+t)^{-beta} u_t = |u|^p  on a
// uniform radial grid, damping taken at the midpoint so the scheme stays
// second order:
//   (1 + d_k) u^{k+1} = 2 u^k - u^{k-1} + dt^2 (L u^k + |u^k|^p) + d_k u^{k-1}
// with d_k = (dt/2) mu (1+t_k)^{-beta}.  The axis uses the reflection-even
// stencil L_0 = 2 n (u_1 - u_0)/dr^2.  Updates run only on the active window
// r <= t + R + 2 dr; the data are supported in r <= R and propagation speed
// is 1, so everything beyond the window stays exactly zero and the far
// Dirichlet node is never reached.
inline SolveResult solve(const ProblemConfig& pc, const GridSpec& grid,
                         const SolveOptions& opt = {}) {
  pc.validate();
  grid.validate(pc.R);

  const int N = grid.num_points();
  const int n = pc.n;
  const double dr = grid.dr;
  const double dt = grid.dt();
  const double p = pc.p;
  const bool nl = pc.nonlinear;
  const double idr2 = 1.0 / (dr * dr);
  const double cn = 0.5 * (n - 1) * idr2;

  SolveResult out;
  out.dr = dr;
  out.dt = dt;

  auto powp = [p](double a) {  // a >= 0
    if (p == 2.0) return a * a;
    if (p == 3.0) return a * a * a;
    return std::pow(a, p);
  };

  std::vector<double> w(N), wmid(N - 1);
  for (int i = 0; i < N; ++i)
    w[i] = sphere_area(n) * std::pow(i * dr, n - 1) *
           ((i == 0 || i == N - 1) ? 0.5 * dr : dr);
  for (int i = 0; i + 1 < N; ++i)
    wmid[i] = sphere_area(n) * std::pow((i + 0.5) * dr, n - 1) * dr;
  const std::vector<double> lp = tabulate_log_phi1(N, dr, n);

  std::vector<double> up(N, 0.0), uc(N, 0.0), un(N, 0.0), vg(N, 0.0);
  for (int i = 0; i < N; ++i) {
    const double r = i * dr;
    uc[i] = pc.eps * pc.f(r);
    vg[i] = pc.eps * pc.g(r);
  }

  auto window_hi = [&](double t) {
    return std::min(N - 2, static_cast<int>((t + pc.R) / dr) + 2);
  };
  auto lap = [&](const std::vector<double>& v, int i) {
    if (i == 0) return 2.0 * n * (v[1] - v[0]) * idr2;
    return (v[i + 1] - 2.0 * v[i] + v[i - 1]) * idr2 +
           cn * (v[i + 1] - v[i - 1]) / i;
  };

  {  // Taylor start: u^{-1} from u, u_t, and u_tt at t = 0
    const int hi0 = window_hi(0.0);
    for (int i = 0; i <= hi0; ++i) {
      const double nlin = nl ? powp(std::abs(uc[i])) : 0.0;
      up[i] = uc[i] - dt * vg[i] +
              0.5 * dt * dt * (lap(uc, i) - pc.mu * vg[i] + nlin);
    }
  }

  const long M = opt.exact_steps > 0
                     ? opt.exact_steps
                     : std::max<long>(1, std::llround(grid.t_max / dt));
  const int stride =
      opt.trace_stride > 0
          ? opt.trace_stride
          : static_cast<int>(std::max<long>(1, M / 2000));
  out.trace.dt = dt;
  out.trace.stride = stride;

  std::vector<double> rungs;
  if (std::isfinite(opt.arm_threshold)) {
    for (double x = opt.arm_threshold;
         rungs.size() < 16 && x <= opt.blowup_threshold; x *= 10.0)
      rungs.push_back(x);
  }
  std::size_t rung_idx = 0;
  bool armed = false;

  auto dotw = [&](const std::vector<double>& v, int hi) {
    double s = 0.0;
    for (int i = 0; i <= hi; ++i) s += v[i] * w[i];
    return s;
  };
  auto ipw = [&](const std::vector<double>& v, int hi) {
    double s = 0.0;
    for (int i = 0; i <= hi; ++i) s += powp(std::abs(v[i])) * w[i];
    return s;
  };
  auto f1w = [&](const std::vector<double>& v, int hi, double t) {
    double s = 0.0;
    for (int i = 0; i <= hi; ++i)
      if (v[i] != 0.0) s += v[i] * std::exp(lp[i] - t) * w[i];
    return s;
  };

  struct Pending {
    long step = 0;
    double F0prev = 0.0;
    TraceRow row{};
    bool active = false;
  } pend;

  {  // step 0: umax sample and (pending) first trace row
    const int hi0 = window_hi(0.0);
    double mx = 0.0;
    for (int i = 0; i <= hi0; ++i) mx = std::max(mx, std::abs(uc[i]));
    out.umax_series.push_back(mx);
    pend.step = 0;
    pend.F0prev = dotw(up, hi0);  // F0 at the Taylor ghost step t = -dt
    pend.row = TraceRow{0.0,
                        dotw(uc, hi0),
                        0.0,
                        f1w(uc, hi0, 0.0),
                        ipw(uc, hi0),
                        damping_multiplier(0.0, pc.mu, pc.beta),
                        mx};
    pend.active = true;
  }
  double F0m = pend.F0prev;

  bool stopped = false;
  for (long k = 0; k < M && !stopped; ++k) {
    const double tk = static_cast<double>(k) * dt;
    const double tn = static_cast<double>(k + 1) * dt;
    const double dcoef = 0.5 * dt * pc.mu * std::pow(1.0 + tk, -pc.beta);
    const double inv1pd = 1.0 / (1.0 + dcoef);
    const int hin = window_hi(tn);

    double mx = 0.0;
    bool bad = false;
    {
      const double nlin = nl ? powp(std::abs(uc[0])) : 0.0;
      const double val = (2.0 * uc[0] - up[0] +
                          dt * dt * (2.0 * n * (uc[1] - uc[0]) * idr2 + nlin) +
                          dcoef * up[0]) *
                         inv1pd;
      un[0] = val;
      if (!std::isfinite(val)) bad = true;
      mx = std::abs(val);
    }
    for (int i = 1; i <= hin; ++i) {
      const double L = (uc[i + 1] - 2.0 * uc[i] + uc[i - 1]) * idr2 +
                       cn * (uc[i + 1] - uc[i - 1]) / i;
      const double nlin = nl ? powp(std::abs(uc[i])) : 0.0;
      const double val =
          (2.0 * uc[i] - up[i] + dt * dt * (L + nlin) + dcoef * up[i]) *
          inv1pd;
      un[i] = val;
      if (!std::isfinite(val)) bad = true;
      const double a = std::abs(val);
      if (a > mx) mx = a;
    }

    if (bad) {
      out.status = armed ? RunStatus::BlewUp : RunStatus::Unstable;
      out.t_end = tk;
      out.umax_final =
          out.umax_series.empty() ? 0.0 : out.umax_series.back();
      out.final_state = uc;
      if (out.status == RunStatus::BlewUp)
        out.blowup = estimate_blowup_time(out.umax_series, dt, p);
      return out;
    }

    out.umax_series.push_back(mx);
    if (opt.record_energy) {
      double ekin = 0.0, epot = 0.0;
      for (int i = 0; i <= hin; ++i) {
        const double v = (un[i] - uc[i]) / dt;
        ekin += v * v * w[i];
        epot += (un[i + 1] - un[i]) * (uc[i + 1] - uc[i]) * idr2 * wmid[i];
      }
      out.energy_series.push_back(0.5 * ekin + 0.5 * epot);
    }

    while (rung_idx < rungs.size() && mx >= rungs[rung_idx]) {
      out.threshold_crossings.emplace_back(rungs[rung_idx], tn);
      ++rung_idx;
    }
    armed = rung_idx > 0;

    const long j = k + 1;
    const bool needF0 = ((j - 1) % stride == 0) || ((j + 1) % stride == 0);
    const double F0j = needF0 ? dotw(un, hin) : 0.0;
    if ((j - 1) % stride == 0 && pend.active && pend.step == j - 1) {
      pend.row.F0_rate = (F0j - pend.F0prev) / (2.0 * dt);
      out.trace.rows.push_back(pend.row);
      pend.active = false;
    }
    if (j % stride == 0) {
      pend.step = j;
      pend.F0prev = F0m;
      pend.row = TraceRow{tn,
                          needF0 ? F0j : dotw(un, hin),
                          0.0,
                          f1w(un, hin, tn),
                          ipw(un, hin),
                          damping_multiplier(tn, pc.mu, pc.beta),
                          mx};
      pend.active = true;
    }
    if ((j + 1) % stride == 0) F0m = F0j;

    if (opt.exact_steps == 0 && std::isfinite(opt.blowup_threshold) &&
        mx >= opt.blowup_threshold) {
      out.status = RunStatus::BlewUp;
      out.t_end = tn;
      out.umax_final = mx;
      out.final_state = un;
      out.blowup = estimate_blowup_time(out.umax_series, dt, p);
      return out;
    }

    std::swap(up, uc);
    std::swap(uc, un);
    out.t_end = tn;
    out.umax_final = mx;
  }

  out.status = RunStatus::ReachedTmax;
  out.final_state = uc;
  return out;
}

struct ConvergenceReport {
  double err_coarse = 0.0;  // L2 of (dr) vs (dr/2) on shared nodes
  double err_fine = 0.0;    // L2 of (dr/2) vs (dr/4) on shared nodes
  double order = 0.0;       // log2(err_coarse / err_fine)
  double t_check = 0.0;     // effective comparison time
};

// Richardson-style self-convergence: solves on dr, dr/2, dr/4 with the same
// Courant number (so dt halves exactly alongside dr), compares the three
// states at the same step-aligned time on the coarse node set.
inline ConvergenceReport self_convergence(const ProblemConfig& pc, double dr,
                                          double cfl, double t_check) {
  if (!(t_check > 0.0))
    throw contract_error("self_convergence: requires t_check > 0");
  const double dtc = cfl * dr;
  const long m = std::max<long>(2, std::llround(t_check / dtc));
  const double t_eff = static_cast<double>(m) * dtc;
  const double r_max = t_eff + pc.R + 6.0 * dr;

  std::array<std::vector<double>, 3> sol;
  for (int lvl = 0; lvl < 3; ++lvl) {
    GridSpec g;
    g.dr = dr / (1 << lvl);
    g.cfl = cfl;
    g.t_max = t_eff;
    g.r_max = r_max;
    SolveOptions so;
    so.exact_steps = m << lvl;
    so.arm_threshold = std::numeric_limits<double>::infinity();
    so.blowup_threshold = std::numeric_limits<double>::infinity();
    so.trace_stride = 1 << 30;
    SolveResult res = solve(pc, g, so);
    if (res.status != RunStatus::ReachedTmax)
      throw numerical_error("self_convergence: run went unstable before t_check");
    sol[lvl] = std::move(res.final_state);
  }

  const int Nc = static_cast<int>(std::floor(r_max / dr)) + 1;
  double e1 = 0.0, e2 = 0.0;
  for (int i = 0; i < Nc; ++i) {
    const double d1 = sol[0][i] - sol[1][2 * i];
    const double d2 = sol[1][2 * i] - sol[2][4 * i];
    e1 += d1 * d1;
    e2 += d2 * d2;
  }
  e1 = std::sqrt(e1 * dr);
  e2 = std::sqrt(e2 * dr);
  if (e1 == 0.0 || e2 == 0.0)
    throw contract_error(
        "self_convergence: degenerate refinement, solutions identical");
  return {e1, e2, std::log2(e1 / e2), t_eff};
}

}  // namespace blowuplab
