#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blowuplab/common.hpp"
#include "blowuplab/multiplier.hpp"
#include "blowuplab/problem.hpp"
#include "blowuplab/quadrature.hpp"

namespace blowuplab {

// --- grid functionals ------------------------------------------------------
// All take a radial grid sample u_i = u(i dr) and integrate over R^n with
// the volume element |S^{n-1}| r^{n-1} dr (composite trapezoid).

inline double radial_integral(std::span<const double> vals, double dr, int n) {
  const std::size_t N = vals.size();
  if (N < 2) throw contract_error("radial_integral: requires >= 2 samples");
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double r = static_cast<double>(i) * dr;
    const double w = (i == 0 || i + 1 == N) ? 0.5 * dr : dr;
    sum += vals[i] * std::pow(r, n - 1) * w;
  }
  return sphere_area(n) * sum;
}

inline double compute_F0(std::span<const double> u, double dr, int n) {
  return radial_integral(u, dr, n);
}

inline double compute_Ip(std::span<const double> u, double dr, int n,
                         double p) {
  const std::size_t N = u.size();
  if (N < 2) throw contract_error("compute_Ip: requires >= 2 samples");
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double r = static_cast<double>(i) * dr;
    const double w = (i == 0 || i + 1 == N) ? 0.5 * dr : dr;
    sum += std::pow(std::abs(u[i]), p) * std::pow(r, n - 1) * w;
  }
  return sphere_area(n) * sum;
}

// log phi1 tabulated once on the grid; F1 then needs one exp per node.
inline std::vector<double> tabulate_log_phi1(std::size_t num_points, double dr,
                                             int n) {
  std::vector<double> tab(num_points);
  for (std::size_t i = 0; i < num_points; ++i)
    tab[i] = log_phi1(static_cast<double>(i) * dr, n);
  return tab;
}

// F1(t) = int u(x,t) psi1(x,t) dx, with psi1 = exp(log_phi1 - t).  Zero
// samples are skipped so the far grid (where log_phi1 - t may overflow the
// exponent range) contributes exactly nothing.
inline double compute_F1(std::span<const double> u,
                         std::span<const double> log_phi1_tab, double t,
                         double dr, int n) {
  const std::size_t N = u.size();
  if (N < 2 || log_phi1_tab.size() < N)
    throw contract_error("compute_F1: grid/table size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    if (u[i] == 0.0) continue;
    const double r = static_cast<double>(i) * dr;
    const double w = (i == 0 || i + 1 == N) ? 0.5 * dr : dr;
    sum += u[i] * std::exp(log_phi1_tab[i] - t) * std::pow(r, n - 1) * w;
  }
  return sphere_area(n) * sum;
}

inline double max_abs(std::span<const double> u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

// --- trace -----------------------------------------------------------------

struct TraceRow {
  double t;
  double F0;       // int u dx
  double F0_rate;  // d/dt int u dx, centered O(dt^2)
  double F1;       // int u psi1 dx
  double Ip;       // int |u|^p dx
  double m;        // damping multiplier at t
  double umax;     // max_i |u_i|
};

struct FunctionalTrace {
  std::vector<TraceRow> rows;
  double dt = 0.0;  // solver step
  int stride = 1;   // solver steps between consecutive rows
};

// Residual of the exact balance d/dt[m F0'] = m Ip, centered differences
// over the (uniformly spaced) trace rows.  One value per interior row;
// refines at second order in the row spacing.
inline std::vector<double> identity_residuals(const FunctionalTrace& tr) {
  const auto& rows = tr.rows;
  std::vector<double> res;
  if (rows.size() < 3) return res;
  res.reserve(rows.size() - 2);
  for (std::size_t j = 1; j + 1 < rows.size(); ++j) {
    const double h = 0.5 * (rows[j + 1].t - rows[j - 1].t);
    const double d = (rows[j + 1].m * rows[j + 1].F0_rate -
                      rows[j - 1].m * rows[j - 1].F0_rate) /
                     (2.0 * h);
    res.push_back(d - rows[j].m * rows[j].Ip);
  }
  return res;
}

// --- derived constants -----------------------------------------------------

struct ConstantRecord {
  std::string name;
  double value;
  std::string derivation;
};

struct ProblemConstants {
  double m0 = 0.0;                // damping multiplier at t = 0
  double f_integral = 0.0;        // int f dx
  double g_integral = 0.0;        // int g dx
  double f_phi1_integral = 0.0;   // int f phi1 dx
  double sup_weight_ratio = 0.0;  // discrete sup of lemma1_ratio, 5% headroom
  double holder_weight = 0.0;     // (sup_weight_ratio)^{-(p-1)}
  double holder_ball = 0.0;       // (vol B_R)^{-(p-1)}
  double feedback = 0.0;          // holder_ball * m0
  double seed_general = 0.0;      // holder_weight * m0 * (m0 f_phi1_integral / 2)^p
  double rate_g = 0.0;            // m0 * g_integral
  double linear_growth = 0.0;     // min(rate_g, f_integral)
  double feedback_low = 0.0;      // holder_ball * linear_growth^p
  double seed_low = 0.0;          // feedback_low * m0
  std::vector<ConstantRecord> records;
};

// Computes every constant the lower-bound checks and the iteration seeds
// use, from the problem data alone.  t_hi bounds the sample grid for the
// weighted-volume ratio sup (use the trace horizon).
inline ProblemConstants derive_constants(const ProblemConfig& pc,
                                         double t_hi) {
  pc.validate();
  ProblemConstants k;
  k.m0 = damping_multiplier(0.0, pc.mu, pc.beta);
  k.f_integral = pc.f.integral(pc.n);
  k.g_integral = pc.g.integral(pc.n);

  if (pc.f.zero()) {
    k.f_phi1_integral = 0.0;
  } else {
    auto integrand = [&pc](double r) {
      return pc.f(r) * phi1(r, pc.n) * std::pow(r, pc.n - 1);
    };
    k.f_phi1_integral =
        sphere_area(pc.n) *
        composite_gauss(integrand, 0.0, pc.f.radius, 1e-10).value;
  }

  double sup = lemma1_ratio(0.0, pc.n, pc.p, pc.R);
  const double hi = std::max(t_hi, 1.0);
  const int samples = 40;
  for (int j = 0; j <= samples; ++j) {
    const double t =
        0.1 * std::pow(hi / 0.1, static_cast<double>(j) / samples);
    sup = std::max(sup, lemma1_ratio(t, pc.n, pc.p, pc.R));
  }
  k.sup_weight_ratio = 1.05 * sup;

  k.holder_weight = std::pow(k.sup_weight_ratio, -(pc.p - 1.0));
  k.holder_ball =
      std::pow(ball_volume(pc.n) * std::pow(pc.R, pc.n), -(pc.p - 1.0));
  k.feedback = k.holder_ball * k.m0;
  k.seed_general =
      k.holder_weight * k.m0 * std::pow(0.5 * k.m0 * k.f_phi1_integral, pc.p);
  k.rate_g = k.m0 * k.g_integral;
  k.linear_growth = std::min(k.rate_g, k.f_integral);
  k.feedback_low = k.holder_ball * std::pow(k.linear_growth, pc.p);
  k.seed_low = k.feedback_low * k.m0;

  k.records = {
      {"m0", k.m0, "damping multiplier at t = 0"},
      {"f_integral", k.f_integral, "volume integral of the displacement bump"},
      {"g_integral", k.g_integral, "volume integral of the velocity bump"},
      {"f_phi1_integral", k.f_phi1_integral,
       "displacement bump integrated against the eigenweight phi1"},
      {"sup_weight_ratio", k.sup_weight_ratio,
       "discrete sup of the weighted-volume ratio, 5% headroom"},
      {"holder_weight", k.holder_weight,
       "Holder constant from the psi1-weighted volume bound"},
      {"holder_ball", k.holder_ball,
       "Holder constant from the light-cone ball volume"},
      {"feedback", k.feedback, "holder_ball * m0; drives the F0 feedback bound"},
      {"seed_general", k.seed_general,
       "holder_weight * m0 * (m0 f_phi1_integral / 2)^p; first iterate level"},
      {"rate_g", k.rate_g, "m0 * g_integral; initial growth rate of F0"},
      {"linear_growth", k.linear_growth,
       "min(rate_g, f_integral); coefficient of the linear F0 lower bound"},
      {"feedback_low", k.feedback_low,
       "holder_ball * linear_growth^p; low-dimension feedback constant"},
      {"seed_low", k.seed_low,
       "feedback_low * m0; first iterate level, low-dimension track"},
  };
  return k;
}

// --- inequality checks -----------------------------------------------------

struct InequalityRow {
  double t, lhs, rhs, slack;  // slack = lhs - rhs
};

struct InequalityReport {
  std::string name;
  bool passed = true;
  std::string hypothesis_warning;  // nonempty => rows intentionally empty
  std::vector<InequalityRow> rows;
  double worst_slack = 0.0;
  double tol = 0.0;
};

namespace detail {

inline InequalityReport run_check(std::string name,
                                  const std::vector<double>& t,
                                  const std::vector<double>& lhs,
                                  const std::vector<double>& rhs, double dt) {
  InequalityReport rep;
  rep.name = std::move(name);
  rep.worst_slack = INFINITY;
  double running = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    running = std::max({running, std::abs(lhs[j]), std::abs(rhs[j])});
    const double tol = std::max(10.0 * dt * dt, 1e-10 * running);
    const double slack = lhs[j] - rhs[j];
    rep.rows.push_back({t[j], lhs[j], rhs[j], slack});
    rep.worst_slack = std::min(rep.worst_slack, slack);
    rep.tol = tol;
    if (!(slack >= -tol)) rep.passed = false;
  }
  if (rep.rows.empty()) rep.worst_slack = 0.0;
  return rep;
}

inline std::vector<double> cumtrapz(const std::vector<double>& t,
                                    const std::vector<double>& y) {
  std::vector<double> c(t.size(), 0.0);
  for (std::size_t j = 1; j < t.size(); ++j)
    c[j] = c[j - 1] + 0.5 * (t[j] - t[j - 1]) * (y[j] + y[j - 1]);
  return c;
}

}  // namespace detail

// Checks every published lower bound the trace can witness:
//   f0_rate_lower :  F0' >= m0 * int_0^t Ip           (needs g >= 0, beta > 1)
//   f1_from_ip    :  Ip >= c1 (1+t)^{(n-1)(1-p/2)} |F1|^p
//   f1_positive   :  F1 >  (m0 f_phi1_integral / 2) eps  (needs f,g >= 0, beta > 1)
//   f0_from_ip    :  Ip >= c2 (1+t)^{-n(p-1)} |F0|^p
//   f0_feedback   :  F0 >  c3 * iint (1+s)^{-n(p-1)} |F0|^p
//   f0_linear     :  F0 >= linear_growth * eps * (1+t)  (needs int g > 0, beta > 1)
// Checks whose hypotheses the data violates are reported with a warning and
// no rows instead of failing.
inline std::vector<InequalityReport> check_lower_bounds(
    const FunctionalTrace& tr, const ProblemConfig& pc,
    const ProblemConstants& k) {
  const auto& rows = tr.rows;
  std::vector<double> t, F0, F0r, F1, Ip;
  for (const TraceRow& r : rows) {
    t.push_back(r.t);
    F0.push_back(r.F0);
    F0r.push_back(r.F0_rate);
    F1.push_back(r.F1);
    Ip.push_back(r.Ip);
  }
  const double dt = tr.dt;
  const bool scattering = pc.beta > 1.0;
  const bool data_nonneg = pc.f.amplitude >= 0.0 && pc.g.amplitude >= 0.0;

  std::vector<InequalityReport> out;

  {  // f0_rate_lower
    if (scattering && data_nonneg) {
      std::vector<double> cum = detail::cumtrapz(t, Ip);
      std::vector<double> rhs(cum.size());
      for (std::size_t j = 0; j < cum.size(); ++j) rhs[j] = k.m0 * cum[j];
      out.push_back(detail::run_check("f0_rate_lower", t, F0r, rhs, dt));
    } else {
      InequalityReport rep;
      rep.name = "f0_rate_lower";
      rep.hypothesis_warning =
          "needs beta > 1 and nonnegative data; check skipped";
      out.push_back(std::move(rep));
    }
  }

  {  // f1_from_ip
    std::vector<double> rhs(t.size());
    for (std::size_t j = 0; j < t.size(); ++j)
      rhs[j] = k.holder_weight *
               std::pow(1.0 + t[j], (pc.n - 1) * (1.0 - 0.5 * pc.p)) *
               std::pow(std::abs(F1[j]), pc.p);
    out.push_back(detail::run_check("f1_from_ip", t, Ip, rhs, dt));
  }

  {  // f1_positive
    if (scattering && data_nonneg) {
      std::vector<double> rhs(t.size(),
                              0.5 * k.m0 * k.f_phi1_integral * pc.eps);
      out.push_back(detail::run_check("f1_positive", t, F1, rhs, dt));
    } else {
      InequalityReport rep;
      rep.name = "f1_positive";
      rep.hypothesis_warning =
          "needs beta > 1 and nonnegative data; check skipped";
      out.push_back(std::move(rep));
    }
  }

  {  // f0_from_ip
    std::vector<double> rhs(t.size());
    for (std::size_t j = 0; j < t.size(); ++j)
      rhs[j] = k.holder_ball * std::pow(1.0 + t[j], -pc.n * (pc.p - 1.0)) *
               std::pow(std::abs(F0[j]), pc.p);
    out.push_back(detail::run_check("f0_from_ip", t, Ip, rhs, dt));
  }

  {  // f0_feedback
    if (scattering && data_nonneg) {
      std::vector<double> kernel(t.size());
      for (std::size_t j = 0; j < t.size(); ++j)
        kernel[j] = std::pow(1.0 + t[j], -pc.n * (pc.p - 1.0)) *
                    std::pow(std::abs(F0[j]), pc.p);
      std::vector<double> inner = detail::cumtrapz(t, kernel);
      std::vector<double> outer = detail::cumtrapz(t, inner);
      std::vector<double> rhs(outer.size());
      for (std::size_t j = 0; j < outer.size(); ++j)
        rhs[j] = k.feedback * outer[j];
      out.push_back(detail::run_check("f0_feedback", t, F0, rhs, dt));
    } else {
      InequalityReport rep;
      rep.name = "f0_feedback";
      rep.hypothesis_warning =
          "needs beta > 1 and nonnegative data; check skipped";
      out.push_back(std::move(rep));
    }
  }

  {  // f0_linear
    if (scattering && data_nonneg && pc.nonzero_g_integral()) {
      std::vector<double> rhs(t.size());
      for (std::size_t j = 0; j < t.size(); ++j)
        rhs[j] = k.linear_growth * pc.eps * (1.0 + t[j]);
      out.push_back(detail::run_check("f0_linear", t, F0, rhs, dt));
    } else {
      InequalityReport rep;
      rep.name = "f0_linear";
      rep.hypothesis_warning =
          "needs beta > 1, nonnegative data, and nonzero velocity integral; "
          "check skipped";
      out.push_back(std::move(rep));
    }
  }

  return out;
}

}  // namespace blowuplab
