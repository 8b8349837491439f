#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace blowuplab {

// Input violates a documented precondition. The CLI maps this to exit code 2.
struct contract_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A computation failed numerically (instability, non-convergence).
// The CLI maps this to exit code 3.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Surface measure of the unit sphere S^{n-1} in R^n. For n = 1 this is the
// two-point set {-1, +1}, measure 2, which keeps radial integral formulas
// uniform across dimensions.
inline double sphere_area(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * pi;
    case 3: return 4.0 * pi;
    default: throw contract_error("sphere_area: n must be 1, 2, or 3");
  }
}

// Volume of the unit ball in R^n.
inline double ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return pi;
    case 3: return 4.0 * pi / 3.0;
    default: throw contract_error("ball_volume: n must be 1, 2, or 3");
  }
}

// Locale-independent numeric formatting, 12 significant digits. All emitted
// CSV/stdout numbers go through this.
inline std::string fmt_g(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace blowuplab
