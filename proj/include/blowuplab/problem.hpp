#pragma once

#include <cmath>

#include "blowuplab/common.hpp"

namespace blowuplab {

// Compactly supported radial bump  A (1 - (r/rho)^2)^k  on r < rho.
// k >= 3 keeps the profile C^{k-1} across the support edge, which is what
// the second-order interior stencils need to show clean convergence.
struct RadialProfile {
  double amplitude = 1.0;
  double radius = 1.0;
  int smoothness = 3;

  double operator()(double r) const {
    const double a = std::abs(r);
    if (a >= radius) return 0.0;
    const double s = a / radius;
    return amplitude * std::pow(1.0 - s * s, smoothness);
  }

  bool zero() const { return amplitude == 0.0; }

  void validate() const {
    if (!(radius > 0.0))
      throw contract_error("RadialProfile: requires radius > 0");
    if (smoothness < 3)
      throw contract_error("RadialProfile: requires smoothness >= 3");
  }

  // Volume integral over R^n of the radial bump:
  //   |S^{n-1}| A rho^n (1/2) B(n/2, k+1).
  double integral(int n) const {
    return sphere_area(n) * amplitude * std::pow(radius, n) * 0.5 *
           std::beta(0.5 * n, static_cast<double>(smoothness) + 1.0);
  }
};

// One instance of  u_tt - Lap u + mu (1+t)^{-beta} u_t = |u|^p  with radial
// data u(0) = eps f, u_t(0) = eps g supported in the ball of radius R.
struct ProblemConfig {
  int n = 1;
  double p = 3.0;
  double mu = 1.0;
  double beta = 2.0;
  double eps = 0.1;
  double R = 1.0;
  RadialProfile f{1.0, 1.0, 3};
  RadialProfile g{1.0, 1.0, 3};
  bool nonlinear = true;

  void validate() const {
    if (n < 1 || n > 3)
      throw contract_error("ProblemConfig: requires n in {1,2,3}");
    if (!(p > 1.0)) throw contract_error("ProblemConfig: requires p > 1");
    if (!(mu >= 0.0)) throw contract_error("ProblemConfig: requires mu >= 0");
    if (!(eps > 0.0)) throw contract_error("ProblemConfig: requires eps > 0");
    if (!(R >= 1.0)) throw contract_error("ProblemConfig: requires R >= 1");
    f.validate();
    g.validate();
    if (f.radius > R || g.radius > R)
      throw contract_error(
          "ProblemConfig: data supports must lie inside the ball of radius R");
  }

  bool nonzero_g_integral() const { return !g.zero(); }
};

// Largest Courant number the axis stencil tolerates is 1/sqrt(n); these sit
// comfortably inside that with margin for the nonlinear term.
inline double default_cfl(int n) {
  switch (n) {
    case 1: return 0.9;
    case 2: return 0.65;
    case 3: return 0.55;
  }
  throw contract_error("default_cfl: requires n in {1,2,3}");
}

// Uniform radial grid r_i = i dr, i = 0..N-1, with fixed time step
// dt = cfl * dr.  r_max must exceed t_max + R by a couple of cells so the
// forward light cone of the data never reaches the far boundary.
struct GridSpec {
  double dr = 0.01;
  double cfl = 0.9;
  double t_max = 10.0;
  double r_max = 12.0;

  double dt() const { return cfl * dr; }
  int num_points() const { return static_cast<int>(std::floor(r_max / dr)) + 1; }

  void validate(double R) const {
    if (!(dr > 0.0)) throw contract_error("GridSpec: requires dr > 0");
    if (!(cfl > 0.0 && cfl <= 0.95))
      throw contract_error("GridSpec: requires cfl in (0, 0.95]");
    if (!(t_max > 0.0)) throw contract_error("GridSpec: requires t_max > 0");
    if (!(r_max >= t_max + R + 2.0 * dr))
      throw contract_error("GridSpec: requires r_max >= t_max + R + 2 dr");
  }
};

}  // namespace blowuplab
