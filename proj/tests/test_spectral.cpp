#include <doctest.h>

#include <cmath>
#include <random>

#include "hypstab/spectral.hpp"

using namespace hypstab;

TEST_CASE("spatial exponent") {
  const double a = solve_alpha(1.0, 1.0, 0.01);
  CHECK(a == doctest::Approx(7.2839).epsilon(1e-4));
  CHECK(std::sinh(a) / a == doctest::Approx(100.0).epsilon(1e-13));
  // Scaling: alpha(c, L, eps) = alpha(1, 1, eps L / c) / L.
  CHECK(solve_alpha(2.0, 3.0, 0.01) == doctest::Approx(solve_alpha(1.0, 1.0, 0.015) / 3.0));
  CHECK(solve_alpha(1.0, 1.0, 1e-12) > 30.0);
  CHECK_THROWS_AS(solve_alpha(1.0, 1.0, 1.5), DomainError);
  CHECK_THROWS_AS(solve_alpha(1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("eigen-pair invariants") {
  for (double eps : {1e-2, 1e-3, 1e-6}) {
    const EigenPair p = eigen_pair(1.0, 1.0, eps);
    CHECK(p.lambda == doctest::Approx(-p.alpha - eps * std::exp(-p.alpha)).epsilon(1e-14));
    CHECK(p.mu_coef == doctest::Approx(-std::exp(-p.alpha)).epsilon(1e-14));
    const Grid g(1.0, 200);
    const ProfilePair e = eigenfunction(p, g);
    const double scale = std::max(max_abs(e.u), max_abs(e.v));
    CHECK(std::abs(e.u.front()) < 1e-12 * scale);
    CHECK(std::abs(e.v.back()) < 1e-12 * scale);
  }
}

TEST_CASE("the decoupled propagator is nilpotent") {
  const int n = 16;
  const ShiftPropagator p(n, 0.0);
  const auto norms = propagator_norms(p, n + 2);
  for (int k = 0; k < n; ++k) CHECK(norms[k] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(norms[n] == 0.0);
  CHECK(norms[n + 1] == 0.0);
  CHECK_THROWS_AS(propagator_norms(p, n - 1), DomainError);
}

TEST_CASE("transpose is the adjoint") {
  const ShiftPropagator p(12, 0.05);
  const std::size_t d = p.dimension();
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n01;
  std::vector<double> x(d), y(d), px(d), pty(d);
  for (std::size_t i = 0; i < d; ++i) {
    x[i] = n01(rng);
    y[i] = n01(rng);
  }
  p.apply(x.data(), px.data());
  p.apply_transpose(y.data(), pty.data());
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    a += y[i] * px[i];
    b += pty[i] * x[i];
  }
  CHECK(a == doctest::Approx(b).epsilon(1e-13));
  const auto m = p.dense();
  for (std::size_t i = 0; i < d; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += m[i * d + j] * x[j];
    CHECK(row == doctest::Approx(px[i]).epsilon(1e-13));
  }
}

TEST_CASE("dominant eigenvalue tracks the continuous spectrum") {
  const int n = 128;
  const double eps = 0.01;
  const ShiftPropagator p(n, eps);
  const double rate = std::log(dominant_eigenvalue_modulus(p)) / p.step();
  const double lambda = eigen_pair(1.0, 1.0, eps).lambda;
  CHECK(std::abs(rate / lambda - 1.0) < 0.1);
}

TEST_CASE("propagator tail decays like ln(1/eps)") {
  const SpectralRow row = spectral_row(1.0, 1.0, 1e-3, 64);
  CHECK(row.fitted_rate > 0.0);
  CHECK(row.rate_ratio > 0.5);
  CHECK(row.rate_ratio < 2.0);
  CHECK(row.sup_norm >= 1.0);
  CHECK(row.semigroup_constant >= 1.0);
  CHECK(std::isfinite(row.semigroup_constant));
}
