#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "blowuplab/exponents.hpp"

using namespace blowuplab;
using Catch::Approx;

namespace {

// Closed form of the positive root of gamma(., dim), used as an independent
// oracle for the bisection-based shifted root.
double root_closed(double dim) {
  return (dim + 1.0 + std::sqrt(dim * dim + 10.0 * dim - 7.0)) /
         (2.0 * (dim - 1.0));
}

}  // namespace

TEST_CASE("strauss quadratic") {
  REQUIRE(strauss_gamma(2.0, 3.0) == Approx(2.0));
  for (double n : {1.0, 2.0, 3.0})
    REQUIRE(strauss_gamma(1.0, n) == Approx(4.0));

  for (int n : {2, 3}) {
    const double ps = strauss_exponent(n);
    REQUIRE(std::abs(strauss_gamma(ps, n)) < 1e-12);
    REQUIRE(strauss_gamma(ps - 0.01, n) > 0.0);
    REQUIRE(strauss_gamma(ps + 0.01, n) < 0.0);
  }
}

TEST_CASE("fujita exponent") {
  REQUIRE(fujita_exponent(1) == Approx(3.0));
  REQUIRE(fujita_exponent(2) == Approx(2.0));
  REQUIRE(fujita_exponent(3) == Approx(5.0 / 3.0));
  REQUIRE(fujita_exponent(0.5) == Approx(5.0));
  REQUIRE_THROWS_AS(fujita_exponent(0.0), contract_error);
}

TEST_CASE("strauss exponent") {
  REQUIRE(strauss_exponent(2) == Approx((3.0 + std::sqrt(17.0)) / 2.0));
  REQUIRE(strauss_exponent(3) == Approx(1.0 + std::sqrt(2.0)));
  REQUIRE_THROWS_AS(strauss_exponent(1), contract_error);
  REQUIRE_THROWS_AS(strauss_exponent(0), contract_error);
}

TEST_CASE("shifted strauss exponent matches the closed form") {
  struct Cell {
    double n, shift;
  };
  for (const Cell c : {Cell{1.0, 2.0}, Cell{2.0, 2.0}, Cell{2.0, 0.5},
                       Cell{1.0, 0.734}, Cell{3.0, 1.3}, Cell{1.0, 0.05}}) {
    const double p = strauss_exponent_shifted(c.n, c.shift);
    const double want = root_closed(c.n + c.shift);
    REQUIRE(p == Approx(want).epsilon(1e-13));
    REQUIRE(std::abs(strauss_gamma(p, c.n + c.shift)) < 1e-10);
  }
  // p_S(4) = 2 exactly.
  REQUIRE(strauss_exponent_shifted(2.0, 2.0) == Approx(2.0).epsilon(1e-14));

  // Strictly decreasing in the shifted dimension.
  double prev = strauss_exponent_shifted(2.0, 0.0);
  for (double s : {0.5, 1.0, 2.0, 4.0}) {
    const double cur = strauss_exponent_shifted(2.0, s);
    REQUIRE(cur < prev);
    prev = cur;
  }
  REQUIRE_THROWS_AS(strauss_exponent_shifted(1.0, 0.0), contract_error);
}

TEST_CASE("damping classification") {
  REQUIRE(classify_damping(-2.0, 1.0).regime == DampingRegime::Overdamping);
  REQUIRE(classify_damping(-1.0, 1.0).regime == DampingRegime::Effective);
  REQUIRE(classify_damping(0.0, 1.0).regime == DampingRegime::Effective);
  REQUIRE(classify_damping(0.99, 1.0).regime == DampingRegime::Effective);
  REQUIRE(classify_damping(1.0, 0.5).regime == DampingRegime::ScaleInvariant);
  REQUIRE(classify_damping(1.5, 1.0).regime == DampingRegime::Scattering);

  const DampingClass weak = classify_damping(1.0, 0.5);
  REQUIRE(weak.non_effective);
  REQUIRE_FALSE(weak.effectiveness_open);
  const DampingClass strong = classify_damping(1.0, 2.0);
  REQUIRE_FALSE(strong.non_effective);
  REQUIRE(strong.effectiveness_open);
  const DampingClass scat = classify_damping(2.0, 1.0);
  REQUIRE_FALSE(scat.non_effective);
  REQUIRE_FALSE(scat.effectiveness_open);

  REQUIRE_THROWS_AS(classify_damping(2.0, 0.0), contract_error);
  REQUIRE_THROWS_AS(classify_damping(2.0, -1.0), contract_error);
}

TEST_CASE("lifespan exponents per track") {
  REQUIRE(lifespan_exponent(1, 2.0, LifespanVariant::General) ==
          Approx(2.0 / 3.0));
  REQUIRE(lifespan_exponent(2, 1.8, LifespanVariant::General) ==
          Approx(2.88 / 4.16));
  REQUIRE(lifespan_exponent(3, 2.0, LifespanVariant::General) == Approx(2.0));
  REQUIRE(lifespan_exponent(1, 3.0, LifespanVariant::OneD) == Approx(1.0));
  REQUIRE(lifespan_exponent(2, 1.8, LifespanVariant::TwoDLowP) ==
          Approx(2.0 / 3.0));

  REQUIRE_THROWS_AS(lifespan_exponent(2, 3.6, LifespanVariant::General),
                    contract_error);
  REQUIRE_THROWS_AS(lifespan_exponent(4, 2.0, LifespanVariant::General),
                    contract_error);
  REQUIRE_THROWS_AS(lifespan_exponent(2, 2.0, LifespanVariant::TwoDLowP),
                    contract_error);
  REQUIRE_THROWS_AS(lifespan_exponent(1, 1.5, LifespanVariant::TwoDLowP),
                    contract_error);
  REQUIRE_THROWS_AS(lifespan_exponent(2, 2.0, LifespanVariant::OneD),
                    contract_error);
  REQUIRE_THROWS_AS(lifespan_exponent(1, 1.0, LifespanVariant::OneD),
                    contract_error);
}

TEST_CASE("improved low-dimension exponents beat the general one") {
  for (double p : {1.5, 2.0, 3.0, 5.0})
    REQUIRE(lifespan_exponent(1, p, LifespanVariant::OneD) <
            lifespan_exponent(1, p, LifespanVariant::General));
  for (double p : {1.2, 1.5, 1.8, 1.95})
    REQUIRE(lifespan_exponent(2, p, LifespanVariant::TwoDLowP) <
            lifespan_exponent(2, p, LifespanVariant::General));
}

TEST_CASE("b parameter") {
  REQUIRE(b_parameter(1.0) == Approx(1.358419404376755872).epsilon(1e-13));
  REQUIRE(b_parameter(2.0) == Approx(0.768742380591665358).epsilon(1e-13));

  double prev = INFINITY;
  for (int j = 0; j <= 10; ++j) {
    const double eps = 1e-3 * std::pow(1e5, j / 10.0);
    const double b = b_parameter(eps);
    const double l = std::log1p(b);
    REQUIRE(std::abs(b * eps * eps * l * l - 1.0) <= 1e-12);
    REQUIRE(b < prev);
    prev = b;
  }
  REQUIRE_THROWS_AS(b_parameter(0.0), contract_error);
}

TEST_CASE("catalog: scattering range") {
  {
    const auto lp = predict_lifespan(1, 2.0, 2.0, 1.0, true);
    REQUIRE(lp.formula == LifespanFormula::ScatteringOneD);
    REQUIRE(lp.form == LifespanForm::PowerLaw);
    REQUIRE(lp.exponent == Approx(0.5));
    REQUIRE(lp.requires_nonzero_integral);
  }
  {
    const auto lp = predict_lifespan(1, 2.0, 1.5, 1.0, false);
    REQUIRE(lp.formula == LifespanFormula::ScatteringGeneral);
    REQUIRE(lp.exponent == Approx(2.0 / 3.0));
    REQUIRE_FALSE(lp.requires_nonzero_integral);
  }
  {
    const auto lp = predict_lifespan(2, 1.8, 2.0, 0.5, true);
    REQUIRE(lp.formula == LifespanFormula::ScatteringTwoD);
    REQUIRE(lp.exponent == Approx(2.0 / 3.0));
  }
  {
    const auto lp = predict_lifespan(2, 1.8, 2.0, 0.5, false);
    REQUIRE(lp.formula == LifespanFormula::ScatteringGeneral);
    REQUIRE(lp.exponent == Approx(2.88 / 4.16));
  }
  {  // p >= 2 in two dimensions: only the general bound remains.
    const auto lp = predict_lifespan(2, 2.5, 2.0, 1.0, true);
    REQUIRE(lp.formula == LifespanFormula::ScatteringGeneral);
    REQUIRE(lp.exponent == Approx(30.0 / 13.0));
  }
  REQUIRE(predict_lifespan(3, 2.5, 3.0, 1.0, false).form ==
          LifespanForm::Unknown);
  REQUIRE(predict_lifespan(1, 5.0, 2.0, 0.1, true).exponent == Approx(2.0));
  // Scattering rows need mu > 0.
  REQUIRE(predict_lifespan(1, 2.0, 2.0, 0.0, true).form ==
          LifespanForm::Unknown);
}

TEST_CASE("catalog: scale-invariant, exceptional mu = 2") {
  {
    const auto lp = predict_lifespan(1, 2.0, 1.0, 2.0, true);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvLiouvilleSub);
    REQUIRE(lp.exponent == Approx(1.0));
  }
  REQUIRE(predict_lifespan(1, 2.0, 1.0, 2.0, false).form ==
          LifespanForm::BEpsilonLaw);
  {
    const auto lp = predict_lifespan(1, 2.5, 1.0, 2.0, false);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvLiouvilleSub);
    REQUIRE(lp.exponent == Approx(7.5));
  }
  {
    const auto lp = predict_lifespan(1, 1.8, 1.0, 2.0, false);
    REQUIRE(lp.exponent == Approx(2.88 / 2.72));
  }
  {  // p_c(1) = 3
    const auto lp = predict_lifespan(1, 3.0, 1.0, 2.0, true);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvLiouvilleCritical);
    REQUIRE(lp.form == LifespanForm::ExpPowerLaw);
    REQUIRE(lp.exponent == Approx(2.0));
  }
  REQUIRE(predict_lifespan(1, 3.0, 1.0, 2.0, false).exponent == Approx(6.0));
  REQUIRE(predict_lifespan(1, 3.5, 1.0, 2.0, true).form ==
          LifespanForm::Global);
  {  // p_c(2) = 2
    const auto lp = predict_lifespan(2, 2.0, 1.0, 2.0, true);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvLiouvilleCritical);
    REQUIRE(lp.exponent == Approx(1.0));
  }
  {
    const auto lp = predict_lifespan(2, 1.5, 1.0, 2.0, true);
    REQUIRE(lp.exponent == Approx(0.5));
  }
  {
    const auto lp = predict_lifespan(2, 1.5, 1.0, 2.0, false);
    REQUIRE(lp.exponent == Approx(1.5 / 2.75));
  }
  {  // p_c(3) is the root of gamma(., 5)
    const double pc3 = strauss_exponent_shifted(3.0, 2.0);
    REQUIRE(pc3 == Approx(1.7807764064044151).epsilon(1e-12));
    const auto below = predict_lifespan(3, 1.7, 1.0, 2.0, false);
    REQUIRE(below.formula == LifespanFormula::ScaleInvLiouvilleSub);
    REQUIRE(below.exponent == Approx(2.38 / 0.64));
    const auto at = predict_lifespan(3, pc3, 1.0, 2.0, true);
    REQUIRE(at.formula == LifespanFormula::ScaleInvLiouvilleCritical);
    REQUIRE(at.exponent == Approx(pc3 * (pc3 - 1.0)));
    REQUIRE(predict_lifespan(3, 2.0, 1.0, 2.0, true).form ==
            LifespanForm::Global);
  }
}

TEST_CASE("catalog: scale-invariant, large mu is global above Fujita") {
  REQUIRE(predict_lifespan(1, 3.2, 1.0, 1.7, true).formula ==
          LifespanFormula::ScaleInvLargeMuGlobal);
  REQUIRE(predict_lifespan(2, 2.3, 1.0, 3.0, false).formula ==
          LifespanFormula::ScaleInvLargeMuGlobal);
  REQUIRE(predict_lifespan(3, 1.8, 1.0, 5.0, false).formula ==
          LifespanFormula::ScaleInvLargeMuGlobal);
  // At or below Fujita the global row does not apply.
  REQUIRE(predict_lifespan(1, 3.0, 1.0, 1.7, true).formula !=
          LifespanFormula::ScaleInvLargeMuGlobal);
}

TEST_CASE("catalog: scale-invariant, Fujita-type rows") {
  {
    const auto lp = predict_lifespan(1, 2.2, 1.0, 1.7, false);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvFujitaSub);
    REQUIRE(lp.exponent == Approx(1.5));
  }
  {
    const auto lp = predict_lifespan(1, 3.0, 1.0, 1.2, false);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvFujitaCritical);
    REQUIRE(lp.form == LifespanForm::Finite);
  }
  {  // 0 < mu < 1 shifts the dimension to n + mu - 1.
    const auto lp = predict_lifespan(1, 2.2, 1.0, 0.5, false);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvShiftedFujitaSub);
    REQUIRE(lp.exponent == Approx(1.2 / 1.4));
  }
  {
    const auto lp = predict_lifespan(1, 5.0, 1.0, 0.5, false);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvShiftedFujitaCrit);
    REQUIRE(lp.form == LifespanForm::Finite);
  }
  {  // n = 2, mu in [1, 2): below Fujita the parabolic bound still rules.
    const auto lp = predict_lifespan(2, 1.4, 1.0, 1.5, false);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvFujitaSub);
    REQUIRE(lp.exponent == Approx(1.0 / 3.0));
  }
}

TEST_CASE("catalog: scale-invariant, shifted-Strauss and delta rows") {
  {
    const auto lp = predict_lifespan(2, 2.0, 1.0, 0.5, false);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvShiftedStrauss);
    REQUIRE(lp.exponent == Approx(2.0));
    REQUIRE_FALSE(lp.delta_slack);
  }
  {
    const auto lp = predict_lifespan(2, 2.6, 1.0, 0.5, false);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvMidRange);
    REQUIRE(lp.exponent == Approx(8.32 / 0.96));
    REQUIRE(lp.delta_slack);
  }
  {  // the mid-range critical endpoint
    const double ps = strauss_exponent_shifted(2.0, 0.5);
    const auto lp = predict_lifespan(2, ps, 1.0, 0.5, false);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvCriticalExp);
    REQUIRE(lp.form == LifespanForm::ExpPowerLaw);
    REQUIRE(lp.exponent == Approx(ps * (ps - 1.0)));
  }
  {  // undamped delta row (mu = 0), classic Strauss window
    const auto lp = predict_lifespan(2, 2.2, 1.0, 0.0, false);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvMidRange);
    REQUIRE(lp.exponent ==
            Approx(2.0 * 2.2 * 1.2 / strauss_gamma(2.2, 2.0)));
  }
  {  // n = 3, mu = 0: between Fujita and the low critical root
    const auto lp = predict_lifespan(3, 1.7, 1.0, 0.0, false);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvLowRange);
    REQUIRE(lp.exponent == Approx(1.0));
    REQUIRE(lp.delta_slack);
  }
  {  // n = 1 mid-range window above the shifted Fujita reach
    const auto lp = predict_lifespan(1, 5.3, 1.0, 0.5, false);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvMidRange);
    REQUIRE(lp.exponent ==
            Approx(2.0 * 5.3 * 4.3 / strauss_gamma(5.3, 1.5)));
  }
  {
    const auto lp = predict_lifespan(1, 3.6, 1.0, 0.8, false);
    REQUIRE(lp.formula == LifespanFormula::ScaleInvMidRange);
    REQUIRE(lp.exponent == Approx(18.72 / 1.712));
  }
}

TEST_CASE("catalog: effective and borderline damping") {
  {
    const auto lp = predict_lifespan(1, 2.0, 0.0, 1.0, false);
    REQUIRE(lp.formula == LifespanFormula::ConstantDampingSubcritical);
    REQUIRE(lp.exponent == Approx(2.0));
  }
  {
    const auto lp = predict_lifespan(1, 3.0, 0.0, 1.0, false);
    REQUIRE(lp.formula == LifespanFormula::ConstantDampingCritical);
    REQUIRE(lp.form == LifespanForm::ExpPowerLaw);
    REQUIRE(lp.exponent == Approx(2.0));
  }
  REQUIRE(predict_lifespan(1, 3.5, 0.0, 1.0, false).form ==
          LifespanForm::Unknown);
  {
    const auto lp = predict_lifespan(2, 1.5, 0.5, 1.0, false);
    REQUIRE(lp.formula == LifespanFormula::EffectiveSubcritical);
    REQUIRE(lp.exponent == Approx(2.0 / 3.0));
  }
  {
    const auto lp = predict_lifespan(2, 2.0, 0.5, 1.0, false);
    REQUIRE(lp.formula == LifespanFormula::EffectiveCritical);
    REQUIRE(lp.exponent == Approx(1.0));
  }
  {
    const auto lp = predict_lifespan(1, 2.0, -1.0, 1.0, false);
    REQUIRE(lp.formula == LifespanFormula::BorderlineSubcritical);
    REQUIRE(lp.form == LifespanForm::ExpPowerLaw);
    REQUIRE(lp.exponent == Approx(2.0));
  }
  {
    const auto lp = predict_lifespan(1, 3.0, -1.0, 1.0, false);
    REQUIRE(lp.formula == LifespanFormula::BorderlineCritical);
    REQUIRE(lp.form == LifespanForm::DoubleExp);
    REQUIRE(lp.exponent == Approx(2.0));
  }
  REQUIRE(predict_lifespan(1, 2.0, -2.0, 1.0, false).form ==
          LifespanForm::Unknown);
  REQUIRE(predict_lifespan(1, 2.0, 0.0, 0.0, false).form ==
          LifespanForm::Unknown);

  REQUIRE_THROWS_AS(predict_lifespan(0, 2.0, 0.0, 1.0, false), contract_error);
  REQUIRE_THROWS_AS(predict_lifespan(1, 1.0, 0.0, 1.0, false), contract_error);
  REQUIRE_THROWS_AS(predict_lifespan(1, 2.0, 0.0, -1.0, false),
                    contract_error);
}
