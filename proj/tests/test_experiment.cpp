#include <doctest.h>

#include <cmath>

#include "hypstab/experiment.hpp"

using namespace hypstab;

namespace {

RunConfig small_config() {
  RunConfig cfg = load_config(std::string(HYPSTAB_CONFIG_DIR) + "/linear_source.json");
  cfg.n_cells = 40;
  cfg.final_time = 4.0;
  cfg.fit_start = 2.5;
  return cfg;
}

}  // namespace

TEST_CASE("number formatting round trips") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-6) == "1e-06");
  CHECK(std::stod(format_number(M_PI)) == M_PI);
}

TEST_CASE("metadata line") {
  const RunConfig cfg = small_config();
  const std::string line = metadata_line(cfg, 0.01);
  CHECK(line.rfind("# version=1.0.0", 0) == 0);
  CHECK(line.find(" epsilon=0.01 ") != std::string::npos);
  CHECK(line.find("epsilon_split=") != std::string::npos);
  CHECK(line.find("seed=") != std::string::npos);
}

TEST_CASE("initial perturbation matches the feedback offsets") {
  const RunConfig cfg = small_config();
  const Grid g(1.0, cfg.n_cells);
  const ProfilePair p = initial_perturbation(cfg, g);
  CHECK(p.u.front() == cfg.delta);
  CHECK(p.v.back() == cfg.delta);
  CHECK(p.u[g.size() / 2] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("simulation is reproducible and decays") {
  const RunConfig cfg = small_config();
  const Simulation a = simulate(cfg);
  const Simulation b = simulate(cfg);
  CHECK(simulation_csv(a) == simulation_csv(b));
  REQUIRE(a.c_eps.has_value());
  CHECK(*a.c_eps > 0.0);
  CHECK(a.series.l2.back() < 1e-3 * a.series.l2.front());
  const RateResult r = rates(a);
  CHECK_FALSE(r.fit_error.has_value());
  CHECK(r.report.fitted_slope < -*a.c_eps);
}

TEST_CASE("sweep ordering and extinction") {
  const RunConfig cfg = small_config();
  const SweepReport rep = sweep_epsilon(cfg, {0.0, 1e-3, 1e-2}, 2);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].epsilon == 1e-2);
  CHECK(rep.rows[2].epsilon == 0.0);
  CHECK(rep.rows[2].status == "extinct");
  CHECK(rep.rows[0].status == "ok");
  REQUIRE(rep.rows[0].c_eps.has_value());
  REQUIRE(rep.rows[1].c_eps.has_value());
  CHECK(*rep.rows[1].c_eps > *rep.rows[0].c_eps);
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> seen(100, 0);
  parallel_for(seen.size(), 4, [&](std::size_t i) { seen[i] += 1; });
  for (int s : seen) CHECK(s == 1);
}
