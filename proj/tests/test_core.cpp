#include <doctest.h>

#include <cmath>
#include <limits>

#include "hypstab/core.hpp"
#include "hypstab/models.hpp"

using namespace hypstab;

TEST_CASE("grid nodes are uniform and anchored") {
  for (int n : {1, 7, 400, 1000}) {
    const Grid g(2.5, n);
    CHECK(g.size() == static_cast<std::size_t>(n + 1));
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(g.size() - 1) == 2.5);
    const double ulp = std::nextafter(2.5, 3.0) - 2.5;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
      CHECK(g.node(i + 1) > g.node(i));
      CHECK(std::abs(g.node(i + 1) - g.node(i) - g.spacing()) <= 4 * ulp);
    }
  }
  CHECK_THROWS_AS(Grid(0.0, 10), DomainError);
  CHECK_THROWS_AS(Grid(1.0, 0), DomainError);
}

TEST_CASE("trapezoid quadrature") {
  const Grid g(1.0, 1000);
  std::vector<double> one(g.size(), 1.0), x(g.nodes()), x2(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) x2[i] = x[i] * x[i];
  CHECK(quadrature(one, g) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(quadrature(x, g) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(quadrature(x2, g) - 1.0 / 3.0) < 1e-6);

  SUBCASE("exact on linear for any n") {
    for (int n : {1, 2, 3, 17}) {
      const Grid h(1.0, n);
      CHECK(quadrature(h.nodes(), h) == doctest::Approx(0.5).epsilon(1e-14));
    }
  }
  SUBCASE("linear in the samples") {
    std::vector<double> mix(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) mix[i] = 3.0 * x2[i] - 2.0 * one[i];
    CHECK(quadrature(mix, g) ==
          doctest::Approx(3.0 * quadrature(x2, g) - 2.0 * quadrature(one, g)).epsilon(1e-14));
  }
  SUBCASE("cumulative sums end at the full integral") {
    const auto cum = cumulative_quadrature(x2, g);
    CHECK(cum.front() == 0.0);
    CHECK(cum.back() == doctest::Approx(quadrature(x2, g)).epsilon(1e-14));
  }
  SUBCASE("second order") {
    auto err = [](int n) {
      const Grid h(1.0, n);
      std::vector<double> s(h.size());
      for (std::size_t i = 0; i < h.size(); ++i) s[i] = std::exp(h.node(i));
      return std::abs(quadrature(s, h) - (std::exp(1.0) - 1.0));
    };
    CHECK(err(50) / err(100) == doctest::Approx(4.0).epsilon(0.01));
  }
  std::vector<double> short_samples(5, 1.0);
  CHECK_THROWS_AS(quadrature(short_samples, g), DomainError);
}

TEST_CASE("central difference default derivative") {
  CHECK(central_difference([](double z) { return std::sin(z); }, 0.3) ==
        doctest::Approx(std::cos(0.3)).epsilon(1e-8));
  SystemSpec s = constant_system({});
  s.lambda = [](double u, double v) { return 1.0 + u * u + 3.0 * v; };
  s.derivatives = {};
  CHECK(s.lambda_u(0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(s.lambda_v(0.5, 0.0) == doctest::Approx(3.0).epsilon(1e-7));
  s.derivatives.lambda_u = [](double, double) { return 42.0; };
  CHECK(s.lambda_u(0.5, 0.0) == 42.0);
}

TEST_CASE("speed floor spot check") {
  SystemSpec s = constant_system({});
  CHECK_NOTHROW(check_system(s));
  s.lambda = [](double u, double) { return 1.0 + u; };
  s.radius = 0.1;
  s.speed_floor = 0.9;
  CHECK_THROWS_AS(check_system(s), DomainError);  // 1 - 2R = 0.8 < c
  s.speed_floor = 0.75;
  CHECK_NOTHROW(check_system(s));
}

TEST_CASE("disc samples cover centre and circle") {
  const auto pts = disc_samples(1.0, -2.0, 0.5, 500);
  double rmax = 0.0;
  bool centre = false;
  for (const auto& [u, v] : pts) {
    const double r = std::hypot(u - 1.0, v + 2.0);
    CHECK(r <= 0.5 * (1.0 + 1e-12));
    rmax = std::max(rmax, r);
    centre = centre || r == 0.0;
  }
  CHECK(centre);
  CHECK(rmax == doctest::Approx(0.5));
}

TEST_CASE("profile pairs") {
  const Grid g(1.0, 4);
  const ProfilePair p = ProfilePair::constant(g, 1.0, 2.0);
  CHECK(p.u.size() == 5);
  CHECK_NOTHROW(p.check(g));
  CHECK_THROWS_AS(p.check(Grid(1.0, 5)), DomainError);
}
