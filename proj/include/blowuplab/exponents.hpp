#pragma once

#include <cmath>
#include <string>

#include "blowuplab/common.hpp"

namespace blowuplab {

// The quadratic whose positive root is the Strauss exponent:
//   gamma(p, n) = 2 + (n+1)p - (n-1)p^2.
// Defined for real n so shifted dimensions n + 2*mu etc. work directly.
// At n = 1 it degenerates to 2 + 2p (no positive root).
inline double strauss_gamma(double p, double n) {
  return 2.0 + (n + 1.0) * p - (n - 1.0) * p * p;
}

inline double fujita_exponent(double n) {
  if (!(n > 0)) throw contract_error("fujita_exponent: requires n > 0");
  return 1.0 + 2.0 / n;
}

namespace detail {

// Positive root of gamma(., dim) for real dim > 1, closed form.
inline double strauss_root(double dim) {
  return (dim + 1.0 + std::sqrt(dim * dim + 10.0 * dim - 7.0)) /
         (2.0 * (dim - 1.0));
}

}  // namespace detail

// Strauss exponent p_S(n), n >= 2. There is no finite Strauss exponent in
// one space dimension (gamma(p, 1) = 2 + 2p > 0 for every p).
inline double strauss_exponent(int n) {
  if (n == 1)
    throw contract_error("strauss_exponent: no finite Strauss exponent for n = 1");
  if (n < 1) throw contract_error("strauss_exponent: requires n >= 1");
  return detail::strauss_root(static_cast<double>(n));
}

// Root of gamma(p, n + shift) = 0 for real shifted dimension n + shift > 1.
// Bisection on gamma with starting bracket (1, 50); the upper end is doubled
// while gamma is still positive there (the root grows without bound as the
// shifted dimension approaches 1). One closed-form-seeded Newton polish at
// the end tightens the residual to machine level.
inline double strauss_exponent_shifted(double n, double shift) {
  const double dim = n + shift;
  if (!(dim > 1.0))
    throw contract_error(
        "strauss_exponent_shifted: requires shifted dimension n + shift > 1");
  double lo = 1.0, hi = 50.0;
  while (strauss_gamma(hi, dim) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12)
      throw numerical_error("strauss_exponent_shifted: bracket expansion failed");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (strauss_gamma(mid, dim) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * hi) break;
  }
  double p = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double g = strauss_gamma(p, dim);
    const double dg = (dim + 1.0) - 2.0 * (dim - 1.0) * p;
    if (dg == 0.0) break;
    p -= g / dg;
  }
  return p;
}

enum class DampingRegime { Overdamping, Effective, ScaleInvariant, Scattering };

struct DampingClass {
  DampingRegime regime;
  // beta = 1, mu in (0,1): the equation is known to be non-effective.
  bool non_effective = false;
  // beta = 1, mu >= 1: effectiveness threshold not settled.
  bool effectiveness_open = false;
};

inline const char* to_string(DampingRegime r) {
  switch (r) {
    case DampingRegime::Overdamping: return "overdamping";
    case DampingRegime::Effective: return "effective";
    case DampingRegime::ScaleInvariant: return "scale-invariant";
    case DampingRegime::Scattering: return "scattering";
  }
  return "?";
}

// Damping classification of mu (1+t)^{-beta} u_t by the decay rate beta.
inline DampingClass classify_damping(double beta, double mu) {
  if (!(mu > 0.0)) throw contract_error("classify_damping: requires mu > 0");
  DampingClass c{DampingRegime::Scattering};
  if (beta < -1.0) {
    c.regime = DampingRegime::Overdamping;
  } else if (beta < 1.0) {
    c.regime = DampingRegime::Effective;
  } else if (beta == 1.0) {
    c.regime = DampingRegime::ScaleInvariant;
    c.non_effective = mu < 1.0;
    c.effectiveness_open = mu >= 1.0;
  } else {
    c.regime = DampingRegime::Scattering;
  }
  return c;
}

// Which upper-bound family a lifespan estimate comes from.
enum class LifespanVariant {
  General,   // T <= C eps^{-2p(p-1)/gamma(p,n)}; n >= 2 needs p < p_S(n)
  TwoDLowP,  // n = 2, 1 < p < 2, nonzero initial-velocity integral
  OneD       // n = 1, p > 1, nonzero initial-velocity integral
};

inline const char* to_string(LifespanVariant v) {
  switch (v) {
    case LifespanVariant::General: return "general";
    case LifespanVariant::TwoDLowP: return "2d-low-p";
    case LifespanVariant::OneD: return "1d";
  }
  return "?";
}

// Positive k in the lifespan upper bound T <= C eps^{-k} for the scattering
// damping range. Errors name the violated constraint.
inline double lifespan_exponent(int n, double p, LifespanVariant variant) {
  if (!(p > 1.0)) throw contract_error("lifespan_exponent: requires p > 1");
  switch (variant) {
    case LifespanVariant::General: {
      if (n != 1 && n != 2 && n != 3)
        throw contract_error("lifespan_exponent: requires n in {1,2,3}");
      if (n >= 2) {
        const double ps = strauss_exponent(n);
        if (!(p < ps))
          throw contract_error("lifespan_exponent: requires p < p_S(" +
                               std::to_string(n) + ") = " + fmt_g(ps));
      }
      return 2.0 * p * (p - 1.0) / strauss_gamma(p, n);
    }
    case LifespanVariant::TwoDLowP:
      if (n != 2) throw contract_error("lifespan_exponent: 2d-low-p requires n = 2");
      if (!(p < 2.0))
        throw contract_error("lifespan_exponent: 2d-low-p requires p < 2");
      return (p - 1.0) / (3.0 - p);
    case LifespanVariant::OneD:
      if (n != 1) throw contract_error("lifespan_exponent: 1d requires n = 1");
      return (p - 1.0) / 2.0;
  }
  throw contract_error("lifespan_exponent: unknown variant");
}

// Root b of  b * eps^2 * log^2(b+1) = 1  (strictly increasing in b), by
// bracketed bisection plus Newton polish; residual <= 1e-12.
inline double b_parameter(double eps) {
  if (!(eps > 0.0)) throw contract_error("b_parameter: requires eps > 0");
  const double e2 = eps * eps;
  auto g = [e2](double b) {
    const double l = std::log1p(b);
    return b * e2 * l * l - 1.0;
  };
  double lo = 0.0, hi = 1.0;
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw numerical_error("b_parameter: bracket expansion failed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  double b = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double l = std::log1p(b);
    const double dg = e2 * l * (l + 2.0 * b / (1.0 + b));
    if (dg == 0.0) break;
    const double step = g(b) / dg;
    b -= step;
    if (std::abs(step) < 1e-16 * b) break;
  }
  return b;
}

enum class LifespanForm {
  PowerLaw,     // T ~ C eps^{-exponent}
  ExpPowerLaw,  // T ~ exp(C eps^{-exponent})
  DoubleExp,    // T ~ exp(exp(C eps^{-exponent}))
  BEpsilonLaw,  // T ~ C b(eps)
  Finite,       // T < infinity, no rate published
  Global,       // small-data global existence
  Unknown
};

inline const char* to_string(LifespanForm f) {
  switch (f) {
    case LifespanForm::PowerLaw: return "power-law";
    case LifespanForm::ExpPowerLaw: return "exp-power-law";
    case LifespanForm::DoubleExp: return "double-exp";
    case LifespanForm::BEpsilonLaw: return "b(eps)-law";
    case LifespanForm::Finite: return "finite";
    case LifespanForm::Global: return "global";
    case LifespanForm::Unknown: return "unknown";
  }
  return "?";
}

// Identifies the published estimate family a catalog row comes from,
// named by regime rather than source.
enum class LifespanFormula {
  None,
  ConstantDampingSubcritical,   // beta = 0, p < p_F(n)
  ConstantDampingCritical,      // beta = 0, p = p_F(n)
  BorderlineSubcritical,        // beta = -1, p < p_F(n)
  BorderlineCritical,           // beta = -1, p = p_F(n)
  EffectiveSubcritical,         // beta in (-1,1)\{0}, p < p_F(n)
  EffectiveCritical,            // beta in (-1,1)\{0}, p = p_F(n)
  ScaleInvFujitaSub,            // beta = 1, mu >= 1, p < p_F(n)
  ScaleInvFujitaCritical,       // beta = 1, mu >= 1, p = p_F(n)
  ScaleInvShiftedFujitaSub,     // beta = 1, 0 < mu < 1, p < p_F(n+mu-1)
  ScaleInvShiftedFujitaCrit,    // beta = 1, 0 < mu < 1, p = p_F(n+mu-1)
  ScaleInvShiftedStrauss,       // beta = 1, p < p_S(n+2mu), small mu
  ScaleInvCriticalExp,          // beta = 1, p = p_S(n+mu)
  ScaleInvMidRange,             // beta = 1, p_S(n+2+mu) <= p < p_S(n+mu)
  ScaleInvLowRange,             // beta = 1, p_F(n) < p < p_S(n+2+mu) (n>=2)
  ScaleInvOneDLowMu,            // beta = 1, n = 1, mu < 2/3, 3 <= p < 2/mu
  ScaleInvLiouvilleSub,         // beta = 1, mu = 2, n <= 3, p < p_c(n)
  ScaleInvLiouvilleLogLaw,      // beta = 1, mu = 2, n = 1, p = 2, zero integral
  ScaleInvLiouvilleCritical,    // beta = 1, mu = 2, n <= 3, p = p_c(n)
  ScaleInvLiouvilleGlobal,      // beta = 1, mu = 2, n <= 3, p > p_c(n)
  ScaleInvLargeMuGlobal,        // beta = 1, mu >= mu_*(n), p > p_F(n)
  ScatteringGeneral,            // beta > 1, general bound
  ScatteringTwoD,               // beta > 1, n = 2, p < 2, nonzero integral
  ScatteringOneD                // beta > 1, n = 1, nonzero integral
};

inline const char* to_string(LifespanFormula f) {
  switch (f) {
    case LifespanFormula::None: return "none";
    case LifespanFormula::ConstantDampingSubcritical: return "constant-damping-subcritical";
    case LifespanFormula::ConstantDampingCritical: return "constant-damping-critical";
    case LifespanFormula::BorderlineSubcritical: return "borderline-subcritical";
    case LifespanFormula::BorderlineCritical: return "borderline-critical";
    case LifespanFormula::EffectiveSubcritical: return "effective-subcritical";
    case LifespanFormula::EffectiveCritical: return "effective-critical";
    case LifespanFormula::ScaleInvFujitaSub: return "scale-inv-fujita-subcritical";
    case LifespanFormula::ScaleInvFujitaCritical: return "scale-inv-fujita-critical";
    case LifespanFormula::ScaleInvShiftedFujitaSub: return "scale-inv-shifted-fujita-subcritical";
    case LifespanFormula::ScaleInvShiftedFujitaCrit: return "scale-inv-shifted-fujita-critical";
    case LifespanFormula::ScaleInvShiftedStrauss: return "scale-inv-shifted-strauss";
    case LifespanFormula::ScaleInvCriticalExp: return "scale-inv-critical-exp";
    case LifespanFormula::ScaleInvMidRange: return "scale-inv-mid-range";
    case LifespanFormula::ScaleInvLowRange: return "scale-inv-low-range";
    case LifespanFormula::ScaleInvOneDLowMu: return "scale-inv-1d-low-mu";
    case LifespanFormula::ScaleInvLiouvilleSub: return "scale-inv-liouville-subcritical";
    case LifespanFormula::ScaleInvLiouvilleLogLaw: return "scale-inv-liouville-log-law";
    case LifespanFormula::ScaleInvLiouvilleCritical: return "scale-inv-liouville-critical";
    case LifespanFormula::ScaleInvLiouvilleGlobal: return "scale-inv-liouville-global";
    case LifespanFormula::ScaleInvLargeMuGlobal: return "scale-inv-large-mu-global";
    case LifespanFormula::ScatteringGeneral: return "scattering-general";
    case LifespanFormula::ScatteringTwoD: return "scattering-2d";
    case LifespanFormula::ScatteringOneD: return "scattering-1d";
  }
  return "?";
}

struct LifespanPrediction {
  LifespanForm form = LifespanForm::Unknown;
  LifespanFormula formula = LifespanFormula::None;
  double exponent = 0.0;  // the k in the form column; 0 when not applicable
  bool requires_nonzero_integral = false;
  bool delta_slack = false;  // exponent carries an arbitrarily small +delta loss
  std::string description;
};

namespace detail {

inline bool approx_eq(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1.0});
}

inline LifespanPrediction make_pred(LifespanForm form, LifespanFormula id,
                                    double exponent, bool needs_integral,
                                    bool delta, std::string desc) {
  LifespanPrediction p;
  p.form = form;
  p.formula = id;
  p.exponent = exponent;
  p.requires_nonzero_integral = needs_integral;
  p.delta_slack = delta;
  p.description = std::move(desc);
  return p;
}

inline LifespanPrediction unknown_pred() {
  return make_pred(LifespanForm::Unknown, LifespanFormula::None, 0.0, false,
                   false, "no published estimate covers this parameter cell");
}

// beta > 1. The improved low-dimension bounds take precedence when their
// side condition (nonzero velocity integral) holds; they are strictly
// stronger than the general bound on their ranges.
inline LifespanPrediction scattering_rows(int n, double p,
                                          bool nonzero_integral) {
  if (n == 1 && nonzero_integral)
    return make_pred(LifespanForm::PowerLaw, LifespanFormula::ScatteringOneD,
                     (p - 1.0) / 2.0, true, false,
                     "T <= C eps^-(p-1)/2, n=1, nonzero velocity integral");
  if (n == 2 && p < 2.0 && nonzero_integral)
    return make_pred(LifespanForm::PowerLaw, LifespanFormula::ScatteringTwoD,
                     (p - 1.0) / (3.0 - p), true, false,
                     "T <= C eps^-(p-1)/(3-p), n=2, p<2, nonzero velocity integral");
  if (n == 1 || (n >= 2 && p < strauss_exponent(n)))
    return make_pred(LifespanForm::PowerLaw, LifespanFormula::ScatteringGeneral,
                     2.0 * p * (p - 1.0) / strauss_gamma(p, n), false, false,
                     "T <= C eps^-2p(p-1)/gamma(p,n), sub-Strauss range");
  return unknown_pred();
}

// beta = 1, mu = 2 (the exceptional Liouville-transform case), n <= 3.
// p_c(n) = max{p_F(n), p_S(n+2)}.
inline LifespanPrediction liouville_rows(int n, double p,
                                         bool nonzero_integral) {
  const double pc =
      std::max(fujita_exponent(n), detail::strauss_root(n + 2.0));
  if (approx_eq(p, pc)) {
    if (n <= 2 && nonzero_integral)
      return make_pred(LifespanForm::ExpPowerLaw,
                       LifespanFormula::ScaleInvLiouvilleCritical, p - 1.0,
                       true, false, "T ~ exp(C eps^-(p-1)) at p = p_c(n)");
    return make_pred(LifespanForm::ExpPowerLaw,
                     LifespanFormula::ScaleInvLiouvilleCritical, p * (p - 1.0),
                     false, false, "T ~ exp(C eps^-p(p-1)) at p = p_c(n)");
  }
  if (p > pc)
    return make_pred(LifespanForm::Global,
                     LifespanFormula::ScaleInvLiouvilleGlobal, 0.0, false,
                     false, "small-data global existence above p_c(n)");
  // 1 < p < p_c(n)
  if (n == 1) {
    if (nonzero_integral)
      return make_pred(LifespanForm::PowerLaw,
                       LifespanFormula::ScaleInvLiouvilleSub,
                       (p - 1.0) / (3.0 - p), true, false,
                       "T ~ C eps^-(p-1)/(3-p), nonzero integral");
    if (approx_eq(p, 2.0))
      return make_pred(LifespanForm::BEpsilonLaw,
                       LifespanFormula::ScaleInvLiouvilleLogLaw, 0.0, false,
                       false, "T ~ C b(eps), zero integral, p = 2");
    if (p > 2.0)
      return make_pred(LifespanForm::PowerLaw,
                       LifespanFormula::ScaleInvLiouvilleSub,
                       p * (p - 1.0) / (3.0 - p), false, false,
                       "T ~ C eps^-p(p-1)/(3-p), zero integral, p > 2");
    return make_pred(LifespanForm::PowerLaw,
                     LifespanFormula::ScaleInvLiouvilleSub,
                     2.0 * p * (p - 1.0) / strauss_gamma(p, 3.0), false, false,
                     "T ~ C eps^-2p(p-1)/gamma(p,3), zero integral, p < 2");
  }
  if (n == 2) {
    if (nonzero_integral)
      return make_pred(LifespanForm::PowerLaw,
                       LifespanFormula::ScaleInvLiouvilleSub,
                       (p - 1.0) / (4.0 - 2.0 * p), true, false,
                       "T ~ C eps^-(p-1)/(4-2p), nonzero integral");
    return make_pred(LifespanForm::PowerLaw,
                     LifespanFormula::ScaleInvLiouvilleSub,
                     2.0 * p * (p - 1.0) / strauss_gamma(p, 4.0), false, false,
                     "T ~ C eps^-2p(p-1)/gamma(p,4), zero integral");
  }
  return make_pred(LifespanForm::PowerLaw, LifespanFormula::ScaleInvLiouvilleSub,
                   2.0 * p * (p - 1.0) / strauss_gamma(p, 5.0), false, false,
                   "T ~ C eps^-2p(p-1)/gamma(p,5)");
}

// beta = 1, Fujita-type bounds (any n; these hold for mu >= 1, or with the
// shifted dimension n + mu - 1 when 0 < mu < 1).
inline LifespanPrediction fujita_type_rows(int n, double p, double mu) {
  if (mu >= 1.0) {
    const double pf = fujita_exponent(n);
    if (approx_eq(p, pf))
      return make_pred(LifespanForm::Finite,
                       LifespanFormula::ScaleInvFujitaCritical, 0.0, false,
                       false, "T < infinity at p = p_F(n), no rate published");
    if (p < pf)
      return make_pred(LifespanForm::PowerLaw,
                       LifespanFormula::ScaleInvFujitaSub,
                       (p - 1.0) / (2.0 - n * (p - 1.0)), false, false,
                       "T <= C eps^-(p-1)/(2-n(p-1))");
    return unknown_pred();
  }
  const double pf = fujita_exponent(n + mu - 1.0);
  if (approx_eq(p, pf))
    return make_pred(LifespanForm::Finite,
                     LifespanFormula::ScaleInvShiftedFujitaCrit, 0.0, false,
                     false, "T < infinity at p = p_F(n+mu-1), no rate published");
  if (p < pf)
    return make_pred(LifespanForm::PowerLaw,
                     LifespanFormula::ScaleInvShiftedFujitaSub,
                     (p - 1.0) / (2.0 - (n + mu - 1.0) * (p - 1.0)), false,
                     false, "T <= C eps^-(p-1)/(2-(n+mu-1)(p-1))");
  return unknown_pred();
}

// beta = 1, delta-loss bounds on the Strauss side of the shifted dimension.
inline LifespanPrediction delta_loss_rows(int n, double p, double mu) {
  if (n >= 2) {
    if (!(mu >= 0.0 &&
          mu < (n * n + n + 2.0) / (n + 2.0)))
      return unknown_pred();
    const double ps_mid = detail::strauss_root(n + mu);
    const double ps_low = detail::strauss_root(n + 2.0 + mu);
    if (approx_eq(p, ps_mid))
      return make_pred(LifespanForm::ExpPowerLaw,
                       LifespanFormula::ScaleInvCriticalExp, p * (p - 1.0),
                       false, false, "T <= exp(C eps^-p(p-1)) at p = p_S(n+mu)");
    if (p >= ps_low && p < ps_mid)
      return make_pred(LifespanForm::PowerLaw, LifespanFormula::ScaleInvMidRange,
                       2.0 * p * (p - 1.0) / strauss_gamma(p, n + mu), false,
                       true, "T <= C_delta eps^-2p(p-1)/gamma(p,n+mu)-delta");
    if (p > fujita_exponent(n) && p < ps_low)
      return make_pred(LifespanForm::PowerLaw, LifespanFormula::ScaleInvLowRange,
                       1.0, false, true, "T <= C_delta eps^-1-delta");
    return unknown_pred();
  }
  // n = 1
  if (!(mu > 0.0 && mu < 4.0 / 3.0)) return unknown_pred();
  const double ps = detail::strauss_root(1.0 + mu);
  if (approx_eq(p, ps))
    return make_pred(LifespanForm::ExpPowerLaw,
                     LifespanFormula::ScaleInvCriticalExp, p * (p - 1.0), false,
                     false, "T <= exp(C eps^-p(p-1)) at p = p_S(1+mu)");
  if (p >= std::max(3.0, 2.0 / mu) && p < ps)
    return make_pred(LifespanForm::PowerLaw, LifespanFormula::ScaleInvMidRange,
                     2.0 * p * (p - 1.0) / strauss_gamma(p, 1.0 + mu), false,
                     true, "T <= C_delta eps^-2p(p-1)/gamma(p,1+mu)-delta");
  if (mu < 2.0 / 3.0 && p >= 3.0 && p < 2.0 / mu)
    return make_pred(LifespanForm::PowerLaw, LifespanFormula::ScaleInvOneDLowMu,
                     2.0 * (p - 1.0) / mu, false, true,
                     "T <= C_delta eps^-2(p-1)/mu-delta");
  return unknown_pred();
}

inline LifespanPrediction scale_invariant_rows(int n, double p, double mu,
                                               bool nonzero_integral) {
  if (approx_eq(mu, 2.0) && n <= 3) return liouville_rows(n, p, nonzero_integral);

  // Large mu: the problem behaves parabolically and p_F(n) is critical.
  const double mu_star = n == 1 ? 5.0 / 3.0 : (n == 2 ? 3.0 : n + 2.0);
  if (mu >= mu_star && p > fujita_exponent(n))
    return make_pred(LifespanForm::Global, LifespanFormula::ScaleInvLargeMuGlobal,
                     0.0, false, false,
                     "small-data global existence above p_F(n) for large mu");

  if (n == 1) {
    // In one dimension the Fujita-type bound dominates wherever it applies.
    if (mu > 0.0) {
      LifespanPrediction f = fujita_type_rows(n, p, mu);
      if (f.form != LifespanForm::Unknown) return f;
    }
    if (mu > 0.0 && mu < (n * n + n + 2.0) / (2.0 * (n + 2.0)) &&
        p < detail::strauss_root(n + 2.0 * mu))
      return make_pred(LifespanForm::PowerLaw,
                       LifespanFormula::ScaleInvShiftedStrauss,
                       2.0 * p * (p - 1.0) / strauss_gamma(p, n + 2.0 * mu),
                       false, false, "T <= C eps^-2p(p-1)/gamma(p,n+2mu)");
    return delta_loss_rows(n, p, mu);
  }

  // n >= 2: shifted-Strauss bound first (strongest where it applies), then
  // the delta-loss extension, then the Fujita-type bound.
  if (mu > 0.0 && mu < (n * n + n + 2.0) / (2.0 * (n + 2.0)) &&
      p < detail::strauss_root(n + 2.0 * mu))
    return make_pred(LifespanForm::PowerLaw,
                     LifespanFormula::ScaleInvShiftedStrauss,
                     2.0 * p * (p - 1.0) / strauss_gamma(p, n + 2.0 * mu),
                     false, false, "T <= C eps^-2p(p-1)/gamma(p,n+2mu)");
  {
    LifespanPrediction d = delta_loss_rows(n, p, mu);
    if (d.form != LifespanForm::Unknown) return d;
  }
  if (mu > 0.0) {
    LifespanPrediction f = fujita_type_rows(n, p, mu);
    if (f.form != LifespanForm::Unknown) return f;
  }
  return unknown_pred();
}

}  // namespace detail

// Catalog of published lifespan estimates for
//   u_tt - Lap u + mu (1+t)^{-beta} u_t = |u|^p,  data size eps.
// Returns the matching estimate descriptor; cells outside the published
// tables come back as Unknown (a valid answer, not an error).
// `nonzero_integral` carries the side condition on the data (nonzero
// integral of f+g, or of g, depending on the row).
inline LifespanPrediction predict_lifespan(int n, double p, double beta,
                                           double mu, bool nonzero_integral) {
  if (n < 1) throw contract_error("predict_lifespan: requires n >= 1");
  if (!(p > 1.0)) throw contract_error("predict_lifespan: requires p > 1");
  if (!(mu >= 0.0)) throw contract_error("predict_lifespan: requires mu >= 0");

  using detail::approx_eq;
  using detail::make_pred;
  using detail::unknown_pred;

  if (beta > 1.0) {
    if (!(mu > 0.0)) return unknown_pred();
    return detail::scattering_rows(n, p, nonzero_integral);
  }
  if (approx_eq(beta, 1.0)) return detail::scale_invariant_rows(n, p, mu, nonzero_integral);
  if (!(mu > 0.0)) return unknown_pred();

  const double pf = fujita_exponent(n);
  if (approx_eq(beta, -1.0)) {
    if (approx_eq(p, pf))
      return make_pred(LifespanForm::DoubleExp, LifespanFormula::BorderlineCritical,
                       p - 1.0, false, false, "T ~ exp(exp(C eps^-(p-1)))");
    if (p < pf)
      return make_pred(LifespanForm::ExpPowerLaw,
                       LifespanFormula::BorderlineSubcritical,
                       2.0 * (p - 1.0) / (2.0 - n * (p - 1.0)), false, false,
                       "T ~ exp(C eps^-2(p-1)/(2-n(p-1)))");
    return unknown_pred();
  }
  if (beta > -1.0) {  // beta in (-1, 1)
    if (approx_eq(beta, 0.0)) {
      if (approx_eq(p, pf))
        return make_pred(LifespanForm::ExpPowerLaw,
                         LifespanFormula::ConstantDampingCritical, p - 1.0,
                         false, false, "T ~ exp(C eps^-(p-1))");
      if (p < pf)
        return make_pred(LifespanForm::PowerLaw,
                         LifespanFormula::ConstantDampingSubcritical,
                         2.0 * (p - 1.0) / (2.0 - n * (p - 1.0)), false, false,
                         "T ~ C eps^-2(p-1)/(2-n(p-1))");
      return unknown_pred();
    }
    if (approx_eq(p, pf))
      return make_pred(LifespanForm::ExpPowerLaw, LifespanFormula::EffectiveCritical,
                       p - 1.0, false, false, "T ~ exp(C eps^-(p-1))");
    if (p < pf)
      return make_pred(LifespanForm::PowerLaw, LifespanFormula::EffectiveSubcritical,
                       2.0 * (p - 1.0) / ((2.0 - n * (p - 1.0)) * (1.0 + beta)),
                       false, false, "T ~ C eps^-2(p-1)/{(2-n(p-1))(1+beta)}");
    return unknown_pred();
  }
  // beta < -1: overdamping; outside the cited lifespan tables.
  return unknown_pred();
}

}  // namespace blowuplab
