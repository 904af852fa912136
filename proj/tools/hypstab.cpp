// hypstab: steady states, feedback simulations, decay rates and spectral
// checks for 2x2 hyperbolic balance laws.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "hypstab/acceptance.hpp"
#include "hypstab/config.hpp"
#include "hypstab/experiment.hpp"

namespace fs = std::filesystem;
using namespace hypstab;

namespace {

constexpr int kConfigError = 1;
constexpr int kSolverError = 2;
constexpr int kFalsified = 3;

struct Options {
  std::string config;
  std::string out;
  int workers = 0;
  std::vector<int> criteria;
};

fs::path out_dir(const Options& opt, const RunConfig& cfg) {
  return opt.out.empty() ? fs::path(cfg.out_dir) : fs::path(opt.out);
}

int workers(const Options& opt) {
  if (opt.workers > 0) return opt.workers;
  return static_cast<int>(std::max(1u, std::min(8u, std::thread::hardware_concurrency())));
}

void report_bounds(const Simulation& sim) {
  for (const auto& name : sim.failed_conditions) {
    std::cerr << "note: small-data condition not met for the default bounds: " << name << "\n";
  }
}

std::string snapshot_name(double t) { return "snapshot_t" + format_number(t) + ".csv"; }

int run_steady(const Options& opt, const RunConfig& cfg) {
  const ScaledSystem sys = build_system(cfg.system, cfg.epsilon);
  check_system(sys.spec);
  const SteadyState st = steady_for(cfg, sys);
  const fs::path path = out_dir(opt, cfg) / "steady.csv";
  write_steady_csv(path, cfg, st);
  std::cout << "steady state: eps = " << format_number(st.epsilon) << ", " << st.iterations
            << " iterations, residual " << format_number(steady_residual(st, sys.spec))
            << "\nwrote " << path.string() << "\n";
  return 0;
}

int run_simulate(const Options& opt, const RunConfig& cfg) {
  const Simulation sim = simulate(cfg);
  report_bounds(sim);
  const fs::path dir = out_dir(opt, cfg);
  write_simulation_csv(dir / "simulate.csv", sim);
  for (double t : cfg.snapshots) write_snapshot_csv(dir / snapshot_name(t), sim, t);
  std::cout << "simulated " << sim.evolution.window_starts.size() << " windows to t = "
            << format_number(cfg.final_time) << " (max Picard increment ratio "
            << format_number(sim.evolution.max_contraction_ratio) << ")\nwrote "
            << (dir / "simulate.csv").string() << "\n";
  return 0;
}

int run_rates(const Options& opt, const RunConfig& cfg) {
  const Simulation sim = simulate(cfg);
  report_bounds(sim);
  const RateResult rr = rates(sim);
  const fs::path path = out_dir(opt, cfg) / "rates.csv";
  write_rates_csv(path, sim, rr);
  std::cout << format_rate_report(rr) << "wrote " << path.string() << "\n";
  return 0;
}

int run_spectral(const Options& opt, const RunConfig& cfg) {
  std::vector<double> eps = cfg.epsilons;
  if (eps.empty()) eps = {1e-3, 1e-4, 1e-6};
  const auto rows = spectral_ladder(cfg, eps, workers(opt));
  const fs::path path = out_dir(opt, cfg) / "spectral.csv";
  write_spectral_csv(path, cfg, rows);
  for (const auto& r : rows) {
    std::cout << "eps " << format_number(r.epsilon) << ": alpha " << format_number(r.alpha)
              << ", fitted rate " << format_number(r.fitted_rate) << ", ratio "
              << format_number(r.rate_ratio) << "\n";
  }
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int run_sweep(const Options& opt, const RunConfig& cfg) {
  std::vector<double> eps = cfg.epsilons;
  if (eps.empty()) eps = {1e-2, 1e-3, 1e-4};
  const SweepReport rep = sweep_epsilon(cfg, eps, workers(opt));
  const fs::path path = out_dir(opt, cfg) / "sweep.csv";
  write_sweep_csv(path, rep);
  for (const auto& row : rep.rows) {
    std::cout << "eps " << format_number(row.epsilon) << ": "
              << (row.slope ? "slope " + format_number(*row.slope) : row.status) << "\n";
  }
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int run_check(const Options& opt, const RunConfig& cfg) {
  AcceptanceOptions ao;
  ao.config_dir = fs::absolute(opt.config).parent_path();
  ao.workers = workers(opt);
  bool ok = true;
  std::vector<CriterionResult> results;
  for (int id = 1; id <= 10; ++id) {
    if (!opt.criteria.empty() &&
        std::find(opt.criteria.begin(), opt.criteria.end(), id) == opt.criteria.end()) {
      continue;
    }
    const auto r = run_acceptance(ao, {id});
    for (const auto& res : r) {
      std::cout << format_criterion(res) << std::endl;
      ok = ok && res.passed;
      results.push_back(res);
    }
  }
  const fs::path dir = out_dir(opt, cfg);
  fs::create_directories(dir);
  std::ofstream report(dir / "acceptance.txt");
  for (const auto& res : results) report << format_criterion(res) << "\n";
  return ok ? 0 : kFalsified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary stabilization laboratory for 2x2 hyperbolic balance laws"};
  app.require_subcommand(1);
  Options opt;

  using Runner = int (*)(const Options&, const RunConfig&);
  const std::vector<std::tuple<std::string, std::string, Runner>> commands{
      {"steady", "compute the steady state and write steady.csv", run_steady},
      {"simulate", "run the feedback simulation and write simulate.csv", run_simulate},
      {"rates", "certified and fitted decay rates", run_rates},
      {"spectral", "eigenvalue and propagator-norm ladder", run_spectral},
      {"sweep", "simulate + rates over an epsilon ladder", run_sweep},
      {"check", "run the acceptance suite", run_check}};
  std::vector<std::pair<CLI::App*, Runner>> subs;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "JSON config file")->required();
    sub->add_option("--out", opt.out, "output directory (default: output.directory)");
    sub->add_option("--workers", opt.workers, "parallel workers")->check(CLI::PositiveNumber);
    if (name == "check") {
      sub->add_option("--criteria", opt.criteria, "only these criteria (1-10)")
          ->delimiter(',')
          ->check(CLI::Range(1, 10));
    }
    subs.emplace_back(sub, fn);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  RunConfig cfg;
  try {
    cfg = load_config(opt.config);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  for (const auto& [sub, fn] : subs) {
    if (!sub->parsed()) continue;
    try {
      return fn(opt, cfg);
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kConfigError;
    } catch (const std::exception& e) {
      std::cerr << "error (" << sub->get_name() << "): " << e.what() << "\n";
      return kSolverError;
    }
  }
  return kConfigError;
}
