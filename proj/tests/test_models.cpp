#include <doctest.h>

#include <cmath>

#include "hypstab/models.hpp"

using namespace hypstab;

TEST_CASE("Riemann invariants round trip") {
  const auto [u, v] = sv_to_riemann(1.3, 0.4, 9.81);
  const auto [h, vel] = sv_from_riemann(u, v, 9.81);
  CHECK(h == doctest::Approx(1.3));
  CHECK(vel == doctest::Approx(0.4));
  CHECK_THROWS_AS(sv_from_riemann(0.0, 1.0, 9.81), DomainError);
}

TEST_CASE("Saint-Venant speeds and sources") {
  SaintVenantParams p;
  p.friction = 0.004;
  p.slope_amplitude = 0.006;
  p.depth = 1.0;
  p.velocity = 0.0;
  const ScaledSystem s = sv_system(p);
  const double u = s.spec.u_ref, v = s.spec.v_ref;
  CHECK(s.spec.lambda(u, v) == doctest::Approx(std::sqrt(9.81)));
  CHECK(s.spec.mu(u, v) == doctest::Approx(std::sqrt(9.81)));
  CHECK(s.epsilon == doctest::Approx(0.01));
  // eps f reproduces the physical source.
  for (double x : {0.0, 0.3, 0.9}) {
    CHECK(s.epsilon * s.spec.f(x, u + 0.1, v) ==
          doctest::Approx(sv_source(p, x, u + 0.1, v)));
  }
  SaintVenantParams fr;
  fr.friction = 0.005;
  fr.velocity = 1.0;
  fr.gravity = 1.0;
  const auto [uf, vf] = sv_to_riemann(fr.depth, fr.velocity, fr.gravity);
  // Flat bed, H = V = g = 1: (u + v) / (u - v) = 1/2.
  CHECK(sv_source(fr, 0.5, uf, vf) == doctest::Approx(-2.0 * 0.005 * std::pow(0.5, 2)));
}

TEST_CASE("Saint-Venant speed floor") {
  SaintVenantParams p;
  const ScaledSystem s = sv_system(p);
  const double m = std::sqrt(9.81);
  CHECK(s.spec.radius == doctest::Approx(m / std::sqrt(10.0)));
  CHECK(s.spec.speed_floor == doctest::Approx(m / 2.0));
  CHECK_NOTHROW(check_system(s.spec));
}

TEST_CASE("Savage-Hutter constant inclination") {
  SavageHutterParams p;
  p.angle_amplitude = 0.01;
  const ScaledSystem s = sh_system(p);
  CHECK(s.epsilon == doctest::Approx(9.81 * std::sin(0.01)));
  const double u = s.spec.u_ref, v = s.spec.v_ref;
  CHECK(s.epsilon * s.spec.f(0.2, u, v) == doctest::Approx(-9.81 * std::sin(0.01)));
  CHECK(s.epsilon * s.spec.g(0.2, u, v) == doctest::Approx(-9.81 * std::sin(0.01)));
  p.angle_amplitude = 0.0;
  CHECK(sh_system(p).epsilon == 0.0);
}

TEST_CASE("shapes") {
  CHECK(parse_shape("cosine") == Shape::cosine);
  CHECK(shape_name(Shape::sine) == "sine");
  CHECK_THROWS_AS(parse_shape("square"), DomainError);
  CHECK(shape_value(Shape::cosine, 0.0, 2.0) == 1.0);
  CHECK(shape_value(Shape::constant, 0.7, 2.0) == 1.0);
}

TEST_CASE("built-in families") {
  const SystemSpec lin = linear_source_system({});
  CHECK(lin.f(0.0, 0.3, 0.5) == 0.5);
  CHECK(lin.g(0.0, 0.3, 0.5) == 0.3);
  const SystemSpec at = arctan_speed_system({});
  CHECK(at.lambda(0.5, 0.0) == 1.25);
  CHECK(at.mu(0.5, 0.0) == 1.0);
  CHECK(at.radius == 0.5);
  const SystemSpec con = constant_system({3.0, 0.2, -0.1, 1.0});
  CHECK(con.lambda(0.1, 0.1) == 3.0);
  CHECK(con.g(0.5, 0.0, 0.0) == -0.1);
}
