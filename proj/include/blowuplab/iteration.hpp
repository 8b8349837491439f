#pragma once

#include <cmath>
#include <vector>

#include "blowuplab/common.hpp"
#include "blowuplab/exponents.hpp"

namespace blowuplab {

// Constants feeding the iteration: `feedback` is the constant of the
// integral feedback bound F0 > feedback * iint (1+s)^{-n(p-1)} |F0|^p, the
// seeds are the constants of the first-level lower bound for each track.
struct IterationConstants {
  double feedback = 0.0;
  double seed_general = 0.0;
  double seed_low = 0.0;
};

// Limit of the series  sum_{k>=1} p^{-k} (2 k log p - log gap),  the total
// exponent loss the iteration accumulates relative to pure p-fold growth.
inline double sp_limit(double p, double gap) {
  if (!(p > 1.0)) throw contract_error("sp_limit: requires p > 1");
  if (!(gap > 0.0)) throw contract_error("sp_limit: requires gap > 0");
  const double pm = p - 1.0;
  return 2.0 * p * std::log(p) / (pm * pm) - std::log(gap) / pm;
}

inline double sp_partial(double p, double gap, int levels) {
  if (!(p > 1.0)) throw contract_error("sp_partial: requires p > 1");
  if (!(gap > 0.0)) throw contract_error("sp_partial: requires gap > 0");
  if (levels < 0) throw contract_error("sp_partial: requires levels >= 0");
  double s = 0.0;
  for (int k = 1; k <= levels; ++k)
    s += std::pow(p, -k) * (2.0 * k * std::log(p) - std::log(gap));
  return s;
}

// Exact tail  sum_{k>=start} p^{-k} (2 k log p - log gap):
//   p^{-start} [ 2 log p (start p/(p-1) + p/(p-1)^2) - log gap * p/(p-1) ].
inline double sp_tail(double p, double gap, int start) {
  if (!(p > 1.0)) throw contract_error("sp_tail: requires p > 1");
  if (!(gap > 0.0)) throw contract_error("sp_tail: requires gap > 0");
  const double pm = p - 1.0;
  return std::pow(p, -start) *
         (2.0 * std::log(p) * (start * p / pm + p / (pm * pm)) -
          std::log(gap) * p / pm);
}

// Closed forms of the level recurrences
//   a_{j+1} = p a_j + n(p-1),   b_{j+1} = p b_j + 2:
inline double iteration_a_closed(double a1, int n, double p, int j) {
  return std::pow(p, j - 1) * (a1 + n) - n;
}
inline double iteration_b_closed(double b1, double p, int j) {
  const double c = 2.0 / (p - 1.0);
  return std::pow(p, j - 1) * (b1 + c) - c;
}

struct IterationRow {
  int j;
  double a;              // exponent of (1+t)^{-a}
  double b;              // exponent of t^{b}
  double logD;           // log of the level constant
  double envelope_logD;  // p^{j-1} (logD1 - sp_inf), proven lower bound
};

struct IterationResult {
  double a1 = 0.0, b1 = 0.0, logD1 = 0.0;
  double gap = 0.0;     // feedback / (b1 + 2/(p-1))^2
  double sp_inf = 0.0;  // sp_limit(p, gap)
  std::vector<IterationRow> rows;
};

// Runs the level recurrences for the chosen track.  Each level j certifies
// F0(t) >= D_j (1+t)^{-a_j} t^{b_j}; plugging the feedback bound into itself
// gives the uniform recurrences
//   a_{j+1} = p a_j + n(p-1),  b_{j+1} = p b_j + 2,
//   log D_{j+1} = log feedback + p log D_j - 2 log(p b_j + 2).
// b runs in the log domain and every quantity saturates at +-inf instead of
// erroring, so arbitrarily deep level counts are safe to request.
inline IterationResult iterate(LifespanVariant v, int n, double p, double eps,
                               const IterationConstants& c, int levels) {
  if (!(p > 1.0)) throw contract_error("iterate: requires p > 1");
  if (!(eps > 0.0)) throw contract_error("iterate: requires eps > 0");
  if (!(c.feedback > 0.0)) throw contract_error("iterate: requires feedback > 0");
  if (!(c.seed_general >= 0.0) || !(c.seed_low >= 0.0))
    throw contract_error("iterate: requires nonnegative seeds");
  if (levels < 1 || levels > 100000)
    throw contract_error("iterate: requires levels in [1, 100000]");

  IterationResult out;
  switch (v) {
    case LifespanVariant::General:
      if (n < 1 || n > 3)
        throw contract_error("iterate: general track requires n in {1,2,3}");
      out.a1 = 0.5 * (n - 1) * p;
      out.b1 = n + 1.0;
      out.logD1 = std::log(c.seed_general) + p * std::log(eps) -
                  std::log(static_cast<double>(n) * (n + 1));
      break;
    case LifespanVariant::TwoDLowP:
      if (n != 2)
        throw contract_error("iterate: 2d-low-p track requires n = 2");
      if (!(p < 2.0))
        throw contract_error("iterate: 2d-low-p track requires p < 2");
      out.a1 = p - 1.0;
      out.b1 = 3.0;
      out.logD1 = std::log(c.seed_low) + p * std::log(eps) - std::log(6.0);
      break;
    case LifespanVariant::OneD:
      if (n != 1) throw contract_error("iterate: 1d track requires n = 1");
      out.a1 = 0.0;
      out.b1 = 3.0;
      out.logD1 = std::log(c.seed_low) + p * std::log(eps) - std::log(6.0);
      break;
    default:
      throw contract_error("iterate: unknown track");
  }

  const double bgap = out.b1 + 2.0 / (p - 1.0);
  out.gap = c.feedback / (bgap * bgap);
  out.sp_inf = sp_limit(p, out.gap);

  const double env_base = out.logD1 - out.sp_inf;
  const double logC = std::log(c.feedback);
  const double logp = std::log(p);
  double a = out.a1;
  double lb = std::log(out.b1);
  double logD = out.logD1;

  out.rows.reserve(levels);
  for (int j = 1; j <= levels; ++j) {
    out.rows.push_back(
        {j, a, std::exp(lb), logD, std::pow(p, j - 1) * env_base});
    const double lb_next = logp + lb + std::log1p(2.0 * std::exp(-lb) / p);
    logD = logC + p * logD - 2.0 * lb_next;
    a = p * a + n * (p - 1.0);
    lb = lb_next;
  }
  return out;
}

struct BoundConstants {
  double gap = 0.0;            // feedback / (b1 + 2/(p-1))^2
  double published_gap = 0.0;  // low-dim tracks: seed_low / (3 + 2/(p-1))^2
  double sp_inf = 0.0;         // series limit entering the bound
  double offset = 0.0;         // (a1 + n) log 2 + sp_inf
  double coefficient = 0.0;    // C in  T <= C eps^{-exponent}
  double exponent = 0.0;
};

// Closed-form lifespan upper bound obtained by pushing the iteration to
// infinity: level j certifies log F0 >= p^{j-1} J(t) + (bounded terms) with
//   J(t) = -(a1+n) log(1+t) + (b1 + 2/(p-1)) log t + logD1 - sp_inf,
// and J(t) >= 1 at some t forces blow-up by that time.  Solving J(t) = 1
// with log(1+t) <= log 2 + log t gives T <= coefficient * eps^{-exponent}.
inline BoundConstants lifespan_bound(LifespanVariant v, int n, double p,
                                     const IterationConstants& c) {
  if (!(p > 1.0)) throw contract_error("lifespan_bound: requires p > 1");
  if (!(c.feedback > 0.0))
    throw contract_error("lifespan_bound: requires feedback > 0");

  BoundConstants out;
  const double pm = p - 1.0;
  switch (v) {
    case LifespanVariant::General: {
      if (n < 1 || n > 3)
        throw contract_error("lifespan_bound: general track requires n in {1,2,3}");
      if (n >= 2 && !(p < strauss_exponent(n)))
        throw contract_error("lifespan_bound: general track requires p < p_S(n)");
      if (!(c.seed_general > 0.0))
        throw contract_error("lifespan_bound: requires seed_general > 0");
      const double a1 = 0.5 * (n - 1) * p;
      const double bgap = (n + 1.0) + 2.0 / pm;
      out.gap = c.feedback / (bgap * bgap);
      out.published_gap = out.gap;
      out.sp_inf = sp_limit(p, out.gap);
      out.offset = (a1 + n) * std::log(2.0) + out.sp_inf;
      const double gamma = strauss_gamma(p, n);
      out.exponent = 2.0 * p * pm / gamma;
      out.coefficient =
          std::pow(static_cast<double>(n) * (n + 1) * std::exp(out.offset + 1.0) /
                       c.seed_general,
                   2.0 * pm / gamma);
      break;
    }
    case LifespanVariant::TwoDLowP: {
      if (n != 2)
        throw contract_error("lifespan_bound: 2d-low-p track requires n = 2");
      if (!(p < 2.0))
        throw contract_error("lifespan_bound: 2d-low-p track requires p < 2");
      if (!(c.seed_low > 0.0))
        throw contract_error("lifespan_bound: requires seed_low > 0");
      const double bgap = 3.0 + 2.0 / pm;
      out.gap = c.feedback / (bgap * bgap);
      out.published_gap = c.seed_low / (bgap * bgap);
      out.sp_inf = sp_limit(p, out.published_gap);
      out.offset = (p + 1.0) * std::log(2.0) + out.sp_inf;
      out.exponent = pm / (3.0 - p);
      out.coefficient = std::pow(
          6.0 * std::exp(out.offset + 1.0) / c.seed_low, pm / (p * (3.0 - p)));
      break;
    }
    case LifespanVariant::OneD: {
      if (n != 1)
        throw contract_error("lifespan_bound: 1d track requires n = 1");
      if (!(c.seed_low > 0.0))
        throw contract_error("lifespan_bound: requires seed_low > 0");
      const double bgap = 3.0 + 2.0 / pm;
      out.gap = c.feedback / (bgap * bgap);
      out.published_gap = c.seed_low / (bgap * bgap);
      out.sp_inf = sp_limit(p, out.published_gap);
      out.offset = std::log(2.0) + out.sp_inf;
      out.exponent = 0.5 * pm;
      out.coefficient = std::pow(
          6.0 * std::exp(out.offset + 1.0) / c.seed_low, pm / (2.0 * p));
      break;
    }
    default:
      throw contract_error("lifespan_bound: unknown track");
  }
  return out;
}

inline double lifespan_bound_eval(const BoundConstants& bc, double eps) {
  if (!(eps > 0.0)) throw contract_error("lifespan_bound_eval: requires eps > 0");
  return bc.coefficient * std::pow(eps, -bc.exponent);
}

}  // namespace blowuplab
