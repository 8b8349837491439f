#pragma once

#include <cmath>

#include "blowuplab/common.hpp"
#include "blowuplab/quadrature.hpp"

namespace blowuplab {

// Solution of m'(t) = mu (1+t)^{-beta} m(t).  For beta > 1 the constant of
// integration is chosen so that m(t) -> 1 from below as t -> infinity and
// m(0) = exp(-mu/(beta-1)); for beta < 1 the same antiderivative gives
// m(0) = exp(mu/(1-beta)) with super-polynomial growth.  beta = 1 is the
// power weight (1+t)^mu.
inline double damping_multiplier(double t, double mu, double beta) {
  if (!(t >= 0.0)) throw contract_error("damping_multiplier: requires t >= 0");
  if (beta == 1.0) return std::pow(1.0 + t, mu);
  return std::exp(mu * std::pow(1.0 + t, 1.0 - beta) / (1.0 - beta));
}

// log of the radial eigenfunction phi1 of the Laplacian with eigenvalue 1
// (Lap phi1 = phi1, phi1(0) > 0, smooth at the origin):
//   n = 1 :  phi1(r) = 2 cosh r
//   n >= 2:  phi1(r) = |S^{n-2}| int_0^pi exp(r cos th) sin^{n-2} th dth.
// Evaluated as r + log(int exp(r(cos th - 1)) ...) so it never overflows;
// phi1 grows like e^r r^{-(n-1)/2} up to a constant.
inline double log_phi1(double r, int n) {
  if (!(r >= 0.0)) throw contract_error("log_phi1: requires r >= 0");
  if (n == 1) return r + std::log1p(std::exp(-2.0 * r));
  if (n < 1) throw contract_error("log_phi1: requires n >= 1");
  const GaussRule& rule = gauss64();
  const int panels = 1 + static_cast<int>(r / 250.0);
  const double h = pi / panels;
  double integral = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = k * h;
    integral += gauss_panel(
        [r, n](double th) {
          return std::exp(r * (std::cos(th) - 1.0)) *
                 std::pow(std::sin(th), n - 2);
        },
        a, a + h, rule);
  }
  return r + std::log(sphere_area(n - 1) * integral);
}

// Direct value; overflows for r beyond ~700, use log_phi1 there.
inline double phi1(double r, int n) { return std::exp(log_phi1(r, n)); }

// psi1(x, t) = phi1(|x|) e^{-t} solves the heat-free adjoint equation
// psi_tt - Lap psi = 0 with separated variables; it is the test weight the
// lower-bound functionals integrate against.
inline double log_psi1(double r, double t, int n) {
  return log_phi1(r, n) - t;
}

inline double psi1(double r, double t, int n) {
  return std::exp(log_psi1(r, t, n));
}

// Weighted-volume ratio
//   int_{|x| <= t+R} psi1(x,t)^{p'} dx  /  (1+t)^{(n-1)(1 - p'/2)},
// with p' = p/(p-1).  Bounded uniformly in t >= 0; its boundedness is what
// converts the psi1-weighted average into the F1 lower bound.
inline double lemma1_ratio(double t, int n, double p, double R) {
  if (!(p > 1.0)) throw contract_error("lemma1_ratio: requires p > 1");
  if (!(t >= 0.0)) throw contract_error("lemma1_ratio: requires t >= 0");
  if (!(R > 0.0)) throw contract_error("lemma1_ratio: requires R > 0");
  const double pp = p / (p - 1.0);
  auto f = [pp, t, n](double r) {
    return std::exp(pp * (log_phi1(r, n) - t)) * std::pow(r, n - 1);
  };
  const QuadResult q = composite_gauss(f, 0.0, t + R, 1e-9);
  const double growth = (n - 1) * (1.0 - 0.5 * pp);
  return sphere_area(n) * q.value / std::pow(1.0 + t, growth);
}

}  // namespace blowuplab
