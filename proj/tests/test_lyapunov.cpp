#include <doctest.h>

#include <cmath>
#include <random>

#include "hypstab/lyapunov.hpp"
#include "hypstab/models.hpp"

using namespace hypstab;

namespace {

// Golden-section minimiser of the growth exponent over theta in [0, hi].
double golden_min(double c, double L, double C, double eps, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = hi;
  for (int i = 0; i < 300; ++i) {
    const double x1 = b - r * (b - a), x2 = a + r * (b - a);
    if (lyapunov_exponent(x1, c, L, C, eps) < lyapunov_exponent(x2, c, L, C, eps)) {
      b = x2;
    } else {
      a = x1;
    }
  }
  return lyapunov_exponent(0.5 * (a + b), c, L, C, eps);
}

}  // namespace

TEST_CASE("weighted functional") {
  const Grid g(1.0, 1000);
  const ProfilePair one_zero = ProfilePair::constant(g, 1.0, 0.0);
  CHECK(l_theta(one_zero, 0.0, g) == doctest::Approx(1.0));
  const ProfilePair ones = ProfilePair::constant(g, 1.0, 1.0);
  CHECK(l_theta(ones, 1.0, g) == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-6));
  CHECK(l_theta(ProfilePair::constant(g, 0.0, 0.0), 3.0, g) == 0.0);
}

TEST_CASE("boundary functional") {
  LyapunovParams p;
  p.theta = 0.0;
  p.c_tilde = 1.0;
  p.gain = 1.0;
  p.gamma = 0.5;
  CHECK(l_tilde_theta(1.0, 1.0, p) == doctest::Approx(0.8));
  CHECK(l_tilde_theta(0.0, 0.0, p) == 0.0);
  CHECK(l_tilde_theta(-1.0, 0.0, p) == doctest::Approx(0.4));
}

TEST_CASE("optimal weight and certified rate") {
  CHECK(optimal_theta(1.0, 1.0, 1.0, 0.01) == doctest::Approx(std::log(200.0)));
  CHECK(decay_rate(1.0, 1.0, 1.0, 0.01) == doctest::Approx(3.28332).epsilon(1e-5));
  CHECK(kappa(1.0, 0.01, 0.5, 1.0, 1.0) == doctest::Approx(0.2));
  CHECK_THROWS_AS(optimal_theta(1.0, 1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(decay_rate(1.0, 1.0, 1.0, 2.5), DomainError);
}

TEST_CASE("closed-form minimiser agrees with a golden-section search") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double c = 0.5 + u(rng), L = 0.5 + u(rng), C = 1.0 + u(rng);
    const double eps = std::pow(10.0, -4.0 + 3.0 * u(rng)) * 2.0 * c / (C * L);
    const double theta = optimal_theta(c, L, C, eps);
    const double oracle = golden_min(c, L, C, eps, 4.0 * theta + 10.0);
    CHECK(-decay_rate(c, L, C, eps) == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("uniform constant for constant speeds") {
  const SystemSpec spec = constant_system({2.0, 0.0, 0.0, 1.0});
  const SteadyState st = solve_steady(spec, 0.1, Grid(1.0, 20));
  const PerturbationCoefficients coeffs(spec, st);
  SpaceTimeField u({0.0, 0.1}, st.grid.size()), v({0.0, 0.1}, st.grid.size());
  for (double& x : u.values) x = 0.01;
  CHECK(estimate_c_tilde(coeffs, u, v) == doctest::Approx(2.2));
}

TEST_CASE("decay fit") {
  std::vector<double> t, y;
  for (int k = 0; k <= 100; ++k) {
    t.push_back(0.05 * k);
    y.push_back(3.0 * std::exp(-2.0 * t.back()));
  }
  const DecayFit fit = fit_decay(t, y, 1.0, 4.0);
  CHECK(fit.slope == doctest::Approx(-2.0));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)));
  CHECK(fit.points == 61);
  CHECK_THROWS(fit_decay(t, y, 1.0, 1.2));
}

TEST_CASE("decay inequality along a series") {
  std::vector<double> t, fast, slow;
  for (int k = 0; k <= 200; ++k) {
    t.push_back(0.01 * k);
    fast.push_back(std::exp(-3.0 * t.back()));
    slow.push_back(std::exp(-1.0 * t.back()));
  }
  const auto ok = check_lyapunov_decay(t, fast, 2.0, 1e-4);
  CHECK(ok.pass_fraction() == 1.0);
  const auto bad = check_lyapunov_decay(t, slow, 3.0, 1e-4);
  CHECK(bad.pass_fraction() < 0.5);
}

TEST_CASE("interpolation inequalities hold for random piecewise-linear data") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  const Grid g(1.5, 64);
  std::vector<double> s(g.size());
  for (int trial = 0; trial < 500; ++trial) {
    for (double& x : s) x = n01(rng);
    CHECK_FALSE(linf_interpolation_check(s, g, false).falsified);
    s.front() = 0.0;
    CHECK_FALSE(linf_interpolation_check(s, g, true).falsified);
  }
  // Constant function: l2 = sqrt(L), exact.
  std::vector<double> ones(g.size(), 1.0);
  const auto r = linf_interpolation_check(ones, g, false);
  CHECK(r.l2 == doctest::Approx(std::sqrt(1.5)));
  CHECK(r.lipschitz == 0.0);
}
