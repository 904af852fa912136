#include <doctest.h>

#include <cmath>

#include "hypstab/models.hpp"
#include "hypstab/steady.hpp"

using namespace hypstab;

namespace {

// Root of u + u^3/3 = q by bisection.
double cubic_root(double q) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid + mid * mid * mid / 3.0 < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("one Picard application reproduces the arctan antiderivative") {
  const SystemSpec s = arctan_speed_system({});
  const Grid g(1.0, 1000);
  ProfilePair in = ProfilePair::constant(g, 0.0, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) in.u[i] = 0.1 * g.node(i);
  const ProfilePair out = picard_map(in, 0.1, s, g);
  for (std::size_t i = 0; i < g.size(); i += 100) {
    CHECK(out.u[i] == doctest::Approx(std::atan(0.1 * g.node(i))).epsilon(1e-8));
  }
  CHECK(out.u.back() == doctest::Approx(0.0997).epsilon(1e-3));
  CHECK(out.v.back() == 0.0);
}

TEST_CASE("steady state of the arctan-speed family") {
  const SystemSpec s = arctan_speed_system({});
  const double q = cubic_root(0.1);
  CHECK(q == doctest::Approx(0.099667).epsilon(1e-5));
  const SteadyState st = solve_steady(s, 0.1, Grid(1.0, 400));
  CHECK(st.profiles.u.back() == doctest::Approx(q).epsilon(1e-7));
  CHECK(st.profiles.u.front() == 0.0);
  for (double v : st.profiles.v) CHECK(v == 0.0);
  // Whole profile: u + u^3/3 = 0.1 x.
  for (std::size_t i = 0; i < st.grid.size(); i += 40) {
    const double u = st.profiles.u[i];
    CHECK(u + u * u * u / 3.0 == doctest::Approx(0.1 * st.grid.node(i)).epsilon(1e-7));
  }
}

TEST_CASE("steady iteration contracts and is second order") {
  const SystemSpec s = arctan_speed_system({});
  const SteadyState st = solve_steady(s, 0.1, Grid(1.0, 200));
  for (std::size_t k = 2; k < st.increments.size(); ++k) {
    if (st.increments[k - 1] > 1e-14) CHECK(st.increments[k] < 0.5 * st.increments[k - 1]);
  }
  auto err = [&](int n) {
    const SteadyState a = solve_steady(s, 0.1, Grid(1.0, n));
    return std::abs(a.profiles.u.back() - cubic_root(0.1));
  };
  CHECK(err(50) / err(100) > 3.5);
  CHECK(steady_residual(st, s) < 5.0 * st.grid.spacing() * st.grid.spacing());
}

TEST_CASE("eps = 0 gives the constant reference state") {
  ConstantParams p;
  p.f0 = 1.0;
  SystemSpec s = constant_system(p);
  s.u_ref = 0.3;
  s.v_ref = -0.2;
  const SteadyState st = solve_steady(s, 0.0, Grid(1.0, 10));
  CHECK(st.iterations == 1);
  for (std::size_t i = 0; i < st.grid.size(); ++i) {
    CHECK(st.profiles.u[i] == 0.3);
    CHECK(st.profiles.v[i] == -0.2);
  }
}

TEST_CASE("anchors on both ends") {
  LinearSourceParams p;
  p.a11 = 0.3;
  SystemSpec s = linear_source_system(p);
  s.u_ref = 0.2;
  s.v_ref = 0.1;
  const SteadyState st = solve_steady(s, 0.5, Grid(2.0, 100));
  CHECK(st.profiles.u.front() == 0.2);
  CHECK(st.profiles.v.back() == 0.1);
  CHECK(steady_residual(st, s) < 1e-3);
}

TEST_CASE("leaving the R-ball is an error") {
  ConstantParams p;
  p.f0 = 1.0;
  p.radius = 0.1;
  const SystemSpec s = constant_system(p);
  CHECK_THROWS_AS(solve_steady(s, 1.0, Grid(1.0, 10)), SolverError);
  const Grid g(1.0, 10);
  CHECK_THROWS_AS(picard_map(ProfilePair::constant(g, 0.2, 0.0), 0.01, s, g), DomainError);
}

TEST_CASE("steady slopes follow the stationary ODE") {
  const SystemSpec s = arctan_speed_system({});
  const SteadyState st = solve_steady(s, 0.1, Grid(1.0, 100));
  const ProfilePair d = steady_slopes(st, s);
  for (std::size_t i = 0; i < st.grid.size(); ++i) {
    const double u = st.profiles.u[i];
    CHECK(d.u[i] == doctest::Approx(0.1 / (1.0 + u * u)));
    CHECK(d.v[i] == 0.0);
  }
}
