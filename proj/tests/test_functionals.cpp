#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "blowuplab/functionals.hpp"
#include "blowuplab/solver.hpp"

using namespace blowuplab;
using Catch::Approx;

namespace {

const InequalityReport& find_report(const std::vector<InequalityReport>& reps,
                                    const std::string& name) {
  for (const auto& r : reps)
    if (r.name == name) return r;
  FAIL("missing report " + name);
  return reps.front();
}

}  // namespace

TEST_CASE("radial integrals") {
  SECTION("constant profile recovers ball volumes") {
    const double dr = 1e-3;
    std::vector<double> u(1001, 1.0);
    REQUIRE(radial_integral(u, dr, 1) == Approx(2.0).epsilon(1e-10));
    REQUIRE(radial_integral(u, dr, 2) == Approx(pi).epsilon(1e-5));
    REQUIRE(radial_integral(u, dr, 3) ==
            Approx(4.0 * pi / 3.0).epsilon(1e-5));
  }
  SECTION("trapezoid is exact on linears in one dimension") {
    const double dr = 0.125;
    std::vector<double> u(9);
    for (int i = 0; i <= 8; ++i) u[i] = i * dr;
    REQUIRE(radial_integral(u, dr, 1) == Approx(1.0).epsilon(1e-14));
  }
  std::vector<double> tiny{1.0};
  REQUIRE_THROWS_AS(radial_integral(tiny, 0.1, 1), contract_error);
}

TEST_CASE("profile integral closed form matches sampling") {
  for (int n : {1, 2, 3}) {
    for (int k : {3, 4}) {
      RadialProfile prof;
      prof.amplitude = 0.7;
      prof.radius = 0.9;
      prof.smoothness = k;
      const int N = 20001;
      const double dr = prof.radius / (N - 1);
      std::vector<double> u(N);
      for (int i = 0; i < N; ++i) u[i] = prof(i * dr);
      REQUIRE(prof.integral(n) ==
              Approx(radial_integral(u, dr, n)).epsilon(1e-7));
    }
  }
}

TEST_CASE("nonlinear mass functional") {
  std::vector<double> u(101, 0.5);
  const double dr = 0.01;
  // p = 1 on nonnegative data coincides with the plain mass.
  REQUIRE(compute_Ip(u, dr, 2, 1.0) ==
          Approx(compute_F0(u, dr, 2)).epsilon(1e-13));
  REQUIRE(compute_Ip(u, dr, 1, 2.0) == Approx(2.0 * 0.25).epsilon(1e-12));
  // |.|^p ignores sign.
  std::vector<double> v(101, -0.5);
  REQUIRE(compute_Ip(v, dr, 1, 2.0) ==
          Approx(compute_Ip(u, dr, 1, 2.0)).epsilon(1e-14));
}

TEST_CASE("weighted functional") {
  const double dr = 0.02;
  const std::size_t N = 101;
  const auto tab = tabulate_log_phi1(N, dr, 1);
  for (std::size_t i : {0u, 7u, 100u})
    REQUIRE(tab[i] == Approx(log_phi1(i * dr, 1)).epsilon(1e-14));

  RadialProfile bump;  // supported on [0, 1]
  std::vector<double> u(N);
  for (std::size_t i = 0; i < N; ++i) u[i] = bump(i * dr);

  SECTION("matches a direct weighted trapezoid") {
    const double t = 3.0;
    double direct = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double w = (i == 0 || i == N - 1) ? 0.5 : 1.0;
      direct += w * u[i] * std::exp(tab[i] - t) * std::pow(i * dr, 0.0);
    }
    direct *= sphere_area(1) * dr;
    REQUIRE(compute_F1(u, tab, t, dr, 1) == Approx(direct).epsilon(1e-12));
  }
  SECTION("large times underflow gracefully instead of overflowing") {
    const double f300 = compute_F1(u, tab, 300.0, dr, 1);
    REQUIRE(std::isfinite(f300));
    REQUIRE(f300 > 0.0);
    double direct = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double w = (i == 0 || i == N - 1) ? 0.5 : 1.0;
      direct += w * u[i] * std::exp(tab[i] - 300.0);
    }
    direct *= sphere_area(1) * dr;
    REQUIRE(f300 == Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("identity residuals vanish on manufactured data") {
  // With m = 1, F0_rate = 2t and Ip = 2 the identity (m F0')' = m Ip is
  // exact, and the centered difference of a quadratic has no error term.
  FunctionalTrace tr;
  tr.dt = 0.1;
  tr.stride = 1;
  for (int j = 0; j <= 40; ++j) {
    TraceRow row{};
    row.t = 0.1 * j;
    row.F0 = row.t * row.t;
    row.F0_rate = 2.0 * row.t;
    row.Ip = 2.0;
    row.m = 1.0;
    tr.rows.push_back(row);
  }
  const auto res = identity_residuals(tr);
  REQUIRE(res.size() == tr.rows.size() - 2);
  for (double r : res) REQUIRE(std::abs(r) < 1e-12);

  // Nonconstant multiplier: m F0' = (1+t)^2 and m Ip = 2(1+t) stay exact
  // under centered differencing as well.
  FunctionalTrace tr2;
  tr2.dt = 0.05;
  tr2.stride = 2;
  for (int j = 0; j <= 30; ++j) {
    TraceRow row{};
    row.t = 0.1 * j;
    row.m = std::pow(1.0 + row.t, 2.0);
    row.F0_rate = 1.0;
    row.Ip = 2.0 / (1.0 + row.t);
    tr2.rows.push_back(row);
  }
  for (double r : identity_residuals(tr2)) REQUIRE(std::abs(r) < 1e-12);
}

TEST_CASE("derived constants") {
  ProblemConfig pc;
  pc.n = 1;
  pc.p = 3.0;
  pc.mu = 1.0;
  pc.beta = 2.0;
  pc.eps = 0.3;
  const auto k = derive_constants(pc, 100.0);

  REQUIRE(k.m0 == Approx(std::exp(-1.0)).epsilon(1e-14));
  // Default bump integral: B(1/2, 4) in one dimension equals 32/35.
  REQUIRE(k.f_integral == Approx(32.0 / 35.0).epsilon(1e-12));
  REQUIRE(k.g_integral == Approx(32.0 / 35.0).epsilon(1e-12));
  REQUIRE(k.holder_ball ==
          Approx(std::pow(ball_volume(1), -2.0)).epsilon(1e-13));
  REQUIRE(k.feedback == Approx(k.holder_ball * k.m0).epsilon(1e-14));
  REQUIRE(k.holder_weight ==
          Approx(std::pow(k.sup_weight_ratio, -2.0)).epsilon(1e-13));
  REQUIRE(k.seed_general ==
          Approx(k.holder_weight * k.m0 *
                 std::pow(0.5 * k.m0 * k.f_phi1_integral, 3.0))
              .epsilon(1e-12));
  REQUIRE(k.rate_g == Approx(k.m0 * k.g_integral).epsilon(1e-14));
  REQUIRE(k.linear_growth == Approx(std::min(k.rate_g, k.f_integral)));
  REQUIRE(k.seed_low ==
          Approx(k.holder_ball * std::pow(k.linear_growth, 3.0) * k.m0)
              .epsilon(1e-12));

  // The discrete sup really dominates the sampled ratio values.
  for (double t : {0.0, 1.0, 10.0, 50.0})
    REQUIRE(k.sup_weight_ratio >= lemma1_ratio(t, pc.n, pc.p, pc.R));

  // f phi1 integral: positive and below phi1(1) * mass.
  REQUIRE(k.f_phi1_integral > k.f_integral);
  REQUIRE(k.f_phi1_integral < phi1(1.0, 1) * k.f_integral);

  REQUIRE(k.records.size() >= 10);
  for (const auto& rec : k.records) {
    REQUIRE(!rec.name.empty());
    REQUIRE(std::isfinite(rec.value));
    REQUIRE(!rec.derivation.empty());
  }
}

TEST_CASE("hypothesis gates skip instead of failing") {
  ProblemConfig pc;
  pc.n = 1;
  pc.p = 2.0;
  pc.mu = 1.0;
  pc.beta = 0.5;  // not scattering
  pc.eps = 0.1;
  const auto k = derive_constants(pc, 10.0);

  FunctionalTrace tr;
  tr.dt = 0.01;
  const auto reps = check_lower_bounds(tr, pc, k);
  REQUIRE(reps.size() == 6);
  for (const char* name :
       {"f0_rate_lower", "f1_positive", "f0_feedback", "f0_linear"}) {
    const auto& rep = find_report(reps, name);
    REQUIRE(rep.passed);
    REQUIRE_FALSE(rep.hypothesis_warning.empty());
    REQUIRE(rep.rows.empty());
  }
  for (const char* name : {"f1_from_ip", "f0_from_ip"}) {
    const auto& rep = find_report(reps, name);
    REQUIRE(rep.hypothesis_warning.empty());
  }

  // Zero velocity bump: the linear-growth check has nothing to certify.
  ProblemConfig pz = pc;
  pz.beta = 2.0;
  pz.g.amplitude = 0.0;
  const auto kz = derive_constants(pz, 10.0);
  const auto repz = check_lower_bounds(tr, pz, kz);
  REQUIRE_FALSE(find_report(repz, "f0_linear").hypothesis_warning.empty());
  REQUIRE(find_report(repz, "f0_rate_lower").hypothesis_warning.empty());
}

TEST_CASE("lower bounds hold on a short scattering run") {
  ProblemConfig pc;
  pc.n = 1;
  pc.p = 3.0;
  pc.mu = 1.0;
  pc.beta = 2.0;
  pc.eps = 0.3;
  GridSpec grid;
  grid.dr = 0.02;
  grid.cfl = 0.9;
  grid.t_max = 4.0;
  grid.r_max = 4.0 + pc.R + 4.0 * grid.dr;

  SolveOptions opt;
  opt.trace_stride = 5;
  const auto res = solve(pc, grid, opt);
  REQUIRE(res.status == RunStatus::ReachedTmax);
  REQUIRE(res.trace.rows.size() > 20);

  const auto k = derive_constants(pc, grid.t_max);
  const auto reps = check_lower_bounds(res.trace, pc, k);
  for (const char* name : {"f0_rate_lower", "f1_from_ip", "f1_positive",
                           "f0_from_ip", "f0_feedback", "f0_linear"}) {
    const auto& rep = find_report(reps, name);
    INFO(rep.name << " worst slack " << rep.worst_slack);
    REQUIRE(rep.hypothesis_warning.empty());
    REQUIRE(rep.passed);
    REQUIRE(!rep.rows.empty());
  }
}
