#include <doctest.h>

#include <cmath>
#include <random>

#include "hypstab/transport.hpp"

using namespace hypstab;

namespace {

CoefficientField field(SpaceTimeFunction a, SpaceTimeFunction b, double c, double sup,
                       double L = 1.0) {
  CoefficientField f{std::move(a), std::move(b), c, sup, L};
  return f;
}

std::vector<double> lattice(double T, int m) {
  std::vector<double> t(m + 1);
  for (int k = 0; k <= m; ++k) t[k] = T * k / m;
  return t;
}

}  // namespace

TEST_CASE("flow of constant and linear speeds") {
  const auto one = field([](double, double) { return 1.0; }, [](double, double) { return 0.0; },
                         1.0, 1.0);
  CHECK(flow(one, 0.7, 0.2, 0.1) == doctest::Approx(0.6).epsilon(1e-13));
  CHECK(flow(one, 0.4, 0.4, 0.3) == 0.3);
  auto lin = field([](double, double x) { return x + 1.0; }, [](double, double) { return 0.0; },
                   1.0, 2.0);
  lin.rk_step = 1e-3;
  CHECK(flow(lin, 1.0, 0.0, 0.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("flow group law and monotonicity") {
  auto f = field([](double t, double x) { return 1.0 + 0.5 * std::sin(x + 2.0 * t); },
                 [](double, double) { return 0.0; }, 0.5, 1.5);
  f.rk_step = 1e-3;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double s = u(rng), r = u(rng), t = u(rng), x = u(rng);
    CHECK(std::abs(flow(f, s, r, flow(f, r, t, x)) - flow(f, s, t, x)) < 1e-8);
    CHECK(flow(f, s, t, x) < flow(f, s, t, x + 1e-3));
  }
}

TEST_CASE("flow leaving the bounding box throws") {
  const auto one = field([](double, double) { return 1.0; }, [](double, double) { return 0.0; },
                         1.0, 1.0);
  CHECK_THROWS_AS(flow(one, 5.0, 0.0, 0.5), SolverError);
}

TEST_CASE("entry time") {
  const auto one = field([](double, double) { return 1.0; }, [](double, double) { return 0.0; },
                         1.0, 1.0);
  CHECK(entry_time(one, 2.0, 0.5) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(entry_time(one, 0.25, 0.75) == 0.0);
  const auto two = field([](double, double) { return 2.0; }, [](double, double) { return 0.0; },
                         2.0, 2.0);
  for (double t = 0.0; t < 3.0; t += 0.137) {
    for (double x = 0.0; x <= 1.0; x += 0.09) CHECK(t - entry_time(two, t, x) <= 0.5 + 1e-12);
  }
}

TEST_CASE("explicit formula on closed forms") {
  const auto one = field([](double, double) { return 1.0; }, [](double, double) { return 0.0; },
                         1.0, 1.0);
  const TransportData data{[](double x) { return x; }, [](double) { return 0.0; }, 0.0};
  CHECK(transport_solution_at(one, data, 0.25, 0.75) == doctest::Approx(0.5).epsilon(1e-12));
  const auto src = field([](double, double) { return 1.0; }, [](double, double) { return 1.0; },
                         1.0, 1.0);
  CHECK(transport_solution_at(src, data, 0.3, 0.8) == doctest::Approx(0.8).epsilon(1e-12));
  // Boundary branch: y = y_l(t - x) + x.
  const TransportData bdata{[](double x) { return x; }, [](double t) { return t; }, 0.0};
  CHECK(transport_solution_at(src, bdata, 0.9, 0.4) == doctest::Approx(0.5 + 0.4).epsilon(1e-10));
}

TEST_CASE("lattice solver matches the explicit formula") {
  auto f = field([](double, double x) { return 1.0 + 0.5 * x; },
                 [](double, double x) { return std::sin(x); }, 1.0, 1.5);
  const Grid g(1.0, 200);
  f.with_grid(g);
  const TransportData data{[](double x) { return std::cos(x); },
                           [](double t) { return 1.0 + 0.2 * t; }, 0.0};
  const auto times = lattice(1.5, 450);
  const SpaceTimeField y = solve_transport(f, data, g, times);
  double err = 0.0;
  for (std::size_t k = 0; k < times.size(); k += 50) {
    for (std::size_t i = 0; i < g.size(); i += 10) {
      err = std::max(err, std::abs(y.at(k, i) - transport_solution_at(f, data, times[k], g.node(i))));
    }
  }
  CHECK(err < 2.0 * g.spacing());
  // Boundary trace is imposed exactly.
  for (std::size_t k = 0; k < times.size(); ++k) CHECK(y.at(k, 0) == data.boundary(times[k]));
}

TEST_CASE("incompatible data is rejected") {
  const auto one = field([](double, double) { return 1.0; }, [](double, double) { return 0.0; },
                         1.0, 1.0);
  const TransportData bad{[](double) { return 1.0; }, [](double) { return 0.0; }, 0.0};
  CHECK_THROWS_AS(solve_transport(one, bad, Grid(1.0, 10), lattice(1.0, 10)), DomainError);
}

TEST_CASE("stability under coefficient perturbation") {
  const Grid g(1.0, 100);
  auto a = field([](double, double x) { return 1.0 + 0.5 * x; },
                 [](double, double x) { return std::sin(x); }, 1.0, 1.5);
  auto b = field([](double, double x) { return 1.0 + 0.5 * x + 1e-3 * std::cos(7 * x); },
                 [](double, double x) { return std::sin(x); }, 0.99, 1.501);
  a.with_grid(g);
  b.with_grid(g);
  const TransportData data{[](double x) { return std::cos(3 * x); },
                           [](double t) { return std::cos(2 * t); }, 0.0};
  const auto times = lattice(2.0, 300);
  const SpaceTimeField ya = solve_transport(a, data, g, times);
  const SpaceTimeField yb = solve_transport(b, data, g, times);
  double diff = 0.0;
  for (std::size_t m = 0; m < ya.values.size(); ++m) {
    diff = std::max(diff, std::abs(ya.values[m] - yb.values[m]));
  }
  CHECK(diff < 2e-2);
  CHECK(diff > 0.0);
}

TEST_CASE("interpolation is exact at nodes") {
  const Grid g(1.0, 10);
  std::vector<double> s(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s[i] = std::sin(3.0 * i);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(interpolate(s, g, g.node(i)) == s[i]);
  CHECK(interpolate(s, g, 0.05) == doctest::Approx(0.5 * (s[0] + s[1])));
}
