#include "hypstab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace hypstab {

namespace {

std::string split_convention(const SystemConfig& sys) {
  switch (sys.kind) {
    case SystemKind::saint_venant: return "eps=sup|dxb|+c_f;f=g=F/eps";
    case SystemKind::savage_hutter: return "eps=g*sup|sin(theta)|;f=g=-g*sin(theta)/eps";
    case SystemKind::custom: return "eps=explicit";
  }
  return "eps=explicit";
}

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path.string() + "'");
  return out;
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string("nan");
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string metadata_line(const RunConfig& cfg, double epsilon) {
  std::ostringstream out;
  out << "# version=" << kVersion << " system=" << kind_name(cfg.system.kind);
  if (cfg.system.kind == SystemKind::custom) out << " family=" << family_name(cfg.system.family);
  out << " length=" << format_number(cfg.system.length) << " n_cells=" << cfg.n_cells
      << " epsilon=" << format_number(epsilon) << " gain=" << format_number(cfg.gain)
      << " gamma=" << format_number(cfg.gamma) << " delta=" << format_number(cfg.delta)
      << " picard_tol=" << format_number(cfg.picard_tol)
      << " steady_tol=" << format_number(cfg.steady_tol)
      << " epsilon_split=" << split_convention(cfg.system) << " seed=" << cfg.seed;
  return out.str();
}

SteadyState steady_for(const RunConfig& cfg, const ScaledSystem& system) {
  const Grid grid(cfg.system.length, cfg.n_cells);
  return solve_steady(system.spec, system.epsilon, grid, cfg.steady_tol, cfg.steady_max_iter);
}

ProfilePair initial_perturbation(const RunConfig& cfg, const Grid& grid) {
  ProfilePair p;
  p.u.resize(grid.size());
  p.v.resize(grid.size());
  const double L = grid.length();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = cfg.initial_shape == InitialShape::cosine
                         ? std::cos(std::numbers::pi * grid.node(i) / L)
                         : 0.0;
    p.u[i] = cfg.delta * s;
    p.v[i] = -cfg.delta * s;
  }
  // Exact boundary values so the feedback traces match the data at t = 0.
  if (cfg.initial_shape == InitialShape::cosine) {
    p.u.front() = cfg.delta;
    p.v.back() = cfg.delta;
  }
  return p;
}

Simulation simulate(const RunConfig& cfg) {
  Simulation sim;
  sim.config = cfg;
  sim.system = build_system(cfg.system, cfg.epsilon);
  const SystemSpec& spec = sim.system.spec;
  check_system(spec);
  sim.steady = steady_for(cfg, sim.system);
  const Grid& grid = sim.steady.grid;
  const PerturbationCoefficients coeffs(spec, sim.steady);

  const ProfilePair initial = initial_perturbation(cfg, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double du = sim.steady.profiles.u[i] + initial.u[i] - spec.u_ref;
    const double dv = sim.steady.profiles.v[i] + initial.v[i] - spec.v_ref;
    if (!(std::hypot(du, dv) < spec.radius)) {
      std::ostringstream msg;
      msg << "delta = " << cfg.delta << " outside the admissible range: initial state leaves the"
          << " ball of radius " << spec.radius << " at x = " << grid.node(i);
      throw DomainError(msg.str());
    }
  }

  sim.left = FeedbackState(initial.u.front(), cfg.gain, cfg.gamma, spec.u_ref);
  sim.right = FeedbackState(initial.v.back(), cfg.gain, cfg.gamma, spec.v_ref);
  sim.bounds = default_bounds(coeffs, initial, cfg.gain, cfg.gamma);
  sim.failed_conditions =
      sim.bounds.failed_conditions(spec.speed_floor, grid.length(), cfg.gain, cfg.gamma);
  sim.speed_sup = sup_speed(spec, ball_distance(sim.steady.profiles, spec) + sim.bounds.amplitude);

  EvolveOptions options;
  options.final_time = cfg.final_time;
  options.picard_tol = cfg.picard_tol;
  options.picard_max_iter = cfg.picard_max_iter;
  options.amplitude = sim.bounds.amplitude;
  options.lipschitz = sim.bounds.lipschitz;
  options.speed_sup = sim.speed_sup;
  sim.evolution = evolve(coeffs, initial, sim.left, sim.right, options);

  sim.c_tilde = estimate_c_tilde(coeffs, sim.evolution.u, sim.evolution.v);
  const double c = spec.speed_floor, L = grid.length(), eps = sim.epsilon();
  if (eps > 0.0 && eps < 2.0 * c / (sim.c_tilde * L)) {
    sim.theta = optimal_theta(c, L, sim.c_tilde, eps);
    sim.c_eps = decay_rate(c, L, sim.c_tilde, eps);
  } else {
    sim.theta = 0.0;
  }

  const LyapunovParams lp{sim.theta, sim.c_tilde, c, L, cfg.gain, cfg.gamma};
  const auto& u = sim.evolution.u;
  const auto& v = sim.evolution.v;
  double next_output = 0.0;
  for (std::size_t k = 0; k < u.levels(); ++k) {
    const double t = u.times[k];
    const bool last = k + 1 == u.levels();
    if (!last && t < next_output - 1e-9 * std::max(1.0, t)) continue;
    next_output = t + cfg.cadence;
    const auto su = u.slice(k);
    const auto sv = v.slice(k);
    std::vector<double> sq(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) sq[i] = su[i] * su[i] + sv[i] * sv[i];
    const double yl = feedback_offset(sim.left, t), yr = feedback_offset(sim.right, t);
    sim.output_levels.push_back(k);
    sim.series.t.push_back(t);
    sim.series.l2.push_back(std::sqrt(quadrature(sq, grid)));
    sim.series.linf.push_back(std::max(max_abs(su), max_abs(sv)));
    sim.series.lyapunov.push_back(l_theta(su, sv, sim.theta, grid) + l_tilde_theta(yl, yr, lp));
    sim.series.y_l.push_back(yl);
    sim.series.y_r.push_back(yr);
  }
  return sim;
}

double default_fit_start(const Simulation& sim) {
  const double ext = std::max(extinction_time(sim.left), extinction_time(sim.right));
  return ext + sim.grid().length() / sim.system.spec.speed_floor;
}

RateResult rates(const Simulation& sim) {
  RateResult out;
  RateReport& r = out.report;
  const RunConfig& cfg = sim.config;
  const double c = sim.system.spec.speed_floor, L = sim.grid().length();
  r.epsilon = sim.epsilon();
  r.c_tilde = sim.c_tilde;
  r.theta_star = sim.theta;
  r.c_eps = sim.c_eps.value_or(std::numeric_limits<double>::quiet_NaN());
  r.kappa = kappa(c, cfg.delta, cfg.gamma, cfg.gain, L);
  r.fit_start = cfg.fit_start.value_or(default_fit_start(sim));
  r.fit_end = cfg.final_time;
  r.fitted_slope = std::numeric_limits<double>::quiet_NaN();

  const auto& s = sim.series;
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    if (s.t[k] >= r.fit_start && s.t[k] <= r.fit_end && s.l2[k] == 0.0) out.extinct = true;
  }
  if (out.extinct) return out;
  try {
    const DecayFit fit = fit_decay(s.t, s.l2, r.fit_start, r.fit_end);
    r.fitted_slope = fit.slope;
    out.intercept = fit.intercept;
  } catch (const DomainError& e) {
    out.fit_error = e.what();
  }
  return out;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t n_threads =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n_threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

SweepReport sweep_epsilon(const RunConfig& cfg, std::vector<double> epsilons, int workers) {
  std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
  SweepReport report;
  report.metadata = metadata_line(cfg, cfg.epsilon.value_or(0.0));
  report.rows.resize(epsilons.size());
  parallel_for(epsilons.size(), workers, [&](std::size_t i) {
    SweepRow& row = report.rows[i];
    row.epsilon = epsilons[i];
    try {
      const Simulation sim = simulate(with_epsilon(cfg, epsilons[i]));
      const RateResult rr = rates(sim);
      row.c_eps = sim.c_eps;
      row.window_start = rr.report.fit_start;
      row.sup_linf = max_abs(sim.series.linf);
      row.intercept = rr.intercept;
      const double c = sim.system.spec.speed_floor, L = sim.grid().length();
      if (row.epsilon > 0.0 && row.epsilon < c / L) {
        row.spectral_lambda = eigen_pair(c, L, row.epsilon).lambda;
      }
      if (rr.extinct || row.epsilon == 0.0) {
        row.status = "extinct";
      } else if (rr.fit_error) {
        row.status = "failed: " + *rr.fit_error;
      } else {
        row.slope = rr.report.fitted_slope;
        row.status = "ok";
      }
    } catch (const std::exception& e) {
      row.status = std::string("failed: ") + e.what();
    }
  });
  return report;
}

std::vector<SpectralRow> spectral_ladder(const RunConfig& cfg, std::vector<double> epsilons,
                                         int workers) {
  std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
  const ScaledSystem system = build_system(cfg.system, cfg.epsilon.value_or(0.0));
  const double c = system.spec.speed_floor, L = cfg.system.length;
  std::vector<SpectralRow> rows(epsilons.size());
  std::vector<std::string> errors(epsilons.size());
  parallel_for(epsilons.size(), workers, [&](std::size_t i) {
    try {
      rows[i] = spectral_row(c, L, epsilons[i], cfg.spectral_cells);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) {
      throw SolverError("spectral ladder at eps = " + format_number(epsilons[i]) + ": " +
                        errors[i]);
    }
  }
  return rows;
}

// ---- writers ----------------------------------------------------------------

void write_steady_csv(const std::filesystem::path& path, const RunConfig& cfg,
                      const SteadyState& steady) {
  auto out = open_csv(path);
  out << metadata_line(cfg, steady.epsilon) << " iterations=" << steady.iterations << "\n";
  out << "x,u_bar,v_bar\n";
  for (std::size_t i = 0; i < steady.grid.size(); ++i) {
    out << format_number(steady.grid.node(i)) << ',' << format_number(steady.profiles.u[i]) << ','
        << format_number(steady.profiles.v[i]) << '\n';
  }
}

void write_simulation_csv(const std::filesystem::path& path, const Simulation& sim) {
  auto out = open_csv(path);
  out << simulation_csv(sim);
}

std::string simulation_csv(const Simulation& sim) {
  std::ostringstream out;
  out << metadata_line(sim.config, sim.epsilon()) << " theta=" << format_number(sim.theta)
      << " c_tilde=" << format_number(sim.c_tilde) << "\n";
  out << "t,l2_norm,linf_norm,lyapunov,y_l_offset,y_r_offset\n";
  const auto& s = sim.series;
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    out << format_number(s.t[k]) << ',' << format_number(s.l2[k]) << ','
        << format_number(s.linf[k]) << ',' << format_number(s.lyapunov[k]) << ','
        << format_number(s.y_l[k]) << ',' << format_number(s.y_r[k]) << '\n';
  }
  return out.str();
}

void write_snapshot_csv(const std::filesystem::path& path, const Simulation& sim, double time) {
  const auto& times = sim.evolution.u.times;
  std::size_t best = 0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (std::abs(times[k] - time) < std::abs(times[best] - time)) best = k;
  }
  auto out = open_csv(path);
  out << metadata_line(sim.config, sim.epsilon()) << " t=" << format_number(times[best]) << "\n";
  out << "x,u,v,U,V\n";
  const Grid& grid = sim.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double U = sim.evolution.u.at(best, i), V = sim.evolution.v.at(best, i);
    out << format_number(grid.node(i)) << ',' << format_number(sim.steady.profiles.u[i] + U)
        << ',' << format_number(sim.steady.profiles.v[i] + V) << ',' << format_number(U) << ','
        << format_number(V) << '\n';
  }
}

void write_rates_csv(const std::filesystem::path& path, const Simulation& sim,
                     const RateResult& rr) {
  auto out = open_csv(path);
  const RateReport& r = rr.report;
  out << metadata_line(sim.config, sim.epsilon()) << "\n";
  out << "epsilon,c_tilde,theta_star,c_eps,kappa,fitted_slope,intercept,fit_start,fit_end\n";
  out << format_number(r.epsilon) << ',' << format_number(r.c_tilde) << ','
      << format_number(r.theta_star) << ',' << format_number(r.c_eps) << ','
      << format_number(r.kappa) << ','
      << (rr.extinct ? std::string("extinct") : format_number(r.fitted_slope)) << ','
      << format_number(rr.intercept) << ',' << format_number(r.fit_start) << ','
      << format_number(r.fit_end) << '\n';
}

std::string format_rate_report(const RateResult& rr) {
  const RateReport& r = rr.report;
  std::ostringstream out;
  auto line = [&](const char* name, const std::string& value) {
    out << std::left << std::setw(16) << name << value << '\n';
  };
  line("epsilon", format_number(r.epsilon));
  line("c_tilde", format_number(r.c_tilde));
  line("theta_star", format_number(r.theta_star));
  line("c_eps", format_number(r.c_eps));
  line("kappa", format_number(r.kappa));
  line("fitted_slope", rr.extinct ? "extinct" : format_number(r.fitted_slope));
  line("intercept", format_number(rr.intercept));
  line("fit_window", "[" + format_number(r.fit_start) + ", " + format_number(r.fit_end) + "]");
  if (rr.fit_error) line("fit_error", *rr.fit_error);
  return out.str();
}

void write_sweep_csv(const std::filesystem::path& path, const SweepReport& report) {
  auto out = open_csv(path);
  out << report.metadata << "\n";
  out << "epsilon,c_eps_certified,slope_fitted,slope_window_start,sup_linf,status\n";
  for (const auto& row : report.rows) {
    std::string status = row.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << format_number(row.epsilon) << ',' << optional_number(row.c_eps) << ','
        << (row.status == "extinct" ? std::string("extinct") : optional_number(row.slope)) << ','
        << format_number(row.window_start) << ',' << format_number(row.sup_linf) << ','
        << status << '\n';
  }
}

void write_spectral_csv(const std::filesystem::path& path, const RunConfig& cfg,
                        const std::vector<SpectralRow>& rows) {
  auto out = open_csv(path);
  out << metadata_line(cfg, cfg.epsilon.value_or(0.0)) << " spectral_cells=" << cfg.spectral_cells
      << "\n";
  out << "epsilon,alpha,lambda,rate_ratio,fitted_rate,sup_norm\n";
  for (const auto& r : rows) {
    out << format_number(r.epsilon) << ',' << format_number(r.alpha) << ','
        << format_number(r.lambda) << ',' << format_number(r.rate_ratio) << ','
        << format_number(r.fitted_rate) << ',' << format_number(r.sup_norm) << '\n';
  }
}

}  // namespace hypstab
