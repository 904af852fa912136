#include "hypstab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "hypstab/experiment.hpp"
#include "hypstab/feedback.hpp"
#include "hypstab/lyapunov.hpp"
#include "hypstab/spectral.hpp"
#include "hypstab/steady.hpp"
#include "hypstab/transport.hpp"

namespace hypstab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v) {
  std::ostringstream out;
  out << std::setprecision(4) << v;
  return out.str();
}

RunConfig load_shipped(const AcceptanceOptions& opt, const std::string& name) {
  return load_config((opt.config_dir / name).string());
}

// Sup of |fn| on [lo, hi]: dense sampling refined by golden-section search.
double sup_abs(const std::function<double(double)>& fn, double lo, double hi) {
  constexpr int n = 4000;
  const double step = (hi - lo) / n;
  int best = 0;
  double best_value = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double v = std::abs(fn(lo + i * step));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double a = std::max(lo, lo + (best - 1) * step), b = std::min(hi, lo + (best + 1) * step);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 80; ++it) {
    const double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    if (std::abs(fn(x1)) > std::abs(fn(x2))) {
      b = x2;
    } else {
      a = x1;
    }
  }
  return std::max(best_value, std::abs(fn(0.5 * (a + b))));
}

// ---- 1 ----------------------------------------------------------------------
CriterionResult extinction(const AcceptanceOptions& opt) {
  CriterionResult r{1, "finite-time extinction at eps = 0", false, {}, 0.0};
  const auto start = Clock::now();
  const RunConfig cfg = load_shipped(opt, "extinction.json");
  const Simulation sim = simulate(cfg);
  const double c = sim.system.spec.speed_floor, L = sim.grid().length();
  const double t_star = L / c + std::pow(cfg.delta, cfg.gamma) / (cfg.gain * cfg.gamma);
  const double floor = 10.0 * sim.grid().spacing();
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t k = 0; k < sim.series.t.size(); ++k) {
    if (sim.series.t[k] >= t_star - 1e-12) {
      worst = std::max(worst, sim.series.linf[k]);
      ++checked;
    }
  }
  r.seconds = seconds_since(start);
  r.passed = checked > 0 && worst <= floor && r.seconds <= 30.0;
  r.detail = "max |(U,V)|_inf for t >= " + num(t_star) + " is " + num(worst) + " (limit " +
             num(floor) + ", " + std::to_string(checked) + " samples)";
  return r;
}

// ---- 2 ----------------------------------------------------------------------
CriterionResult feedback_exactness(const AcceptanceOptions&) {
  CriterionResult r{2, "boundary feedback exactness", false, {}, 0.0};
  const auto start = Clock::now();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> y_dist(-2.0, 2.0), k_dist(0.1, 5.0), g_dist(0.05, 0.95);
  double worst = 0.0;
  int nonzero_after = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    double y0 = y_dist(rng);
    if (y0 == 0.0) y0 = 0.5;
    const FeedbackState s(y0, k_dist(rng), g_dist(rng));
    const double T = extinction_time(s);
    auto rhs = [&](double y) {
      return y == 0.0 ? 0.0 : -s.gain * y / std::pow(std::abs(y), s.gamma);
    };
    // RK4 oracle up to 0.9 T, compared at tenths.
    constexpr int steps = 2000;
    const double dt = 0.9 * T / steps;
    double y = y0;
    for (int k = 1; k <= steps; ++k) {
      const double k1 = rhs(y), k2 = rhs(y + 0.5 * dt * k1), k3 = rhs(y + 0.5 * dt * k2),
                   k4 = rhs(y + dt * k3);
      y += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
      if (k % (steps / 9) == 0) {
        worst = std::max(worst, std::abs(y - feedback_offset(s, k * dt)));
      }
    }
    for (double f : {1.0, 1.0 + 1e-9, 1.5, 3.0}) {
      if (feedback_offset(s, f * T) != 0.0) ++nonzero_after;
    }
  }
  r.seconds = seconds_since(start);
  r.passed = worst <= 1e-6 && nonzero_after == 0 && r.seconds <= 5.0;
  r.detail = "max |closed form - RK4| = " + num(worst) + " over 1000 draws; " +
             std::to_string(nonzero_after) + " nonzero values after extinction";
  return r;
}

// ---- 3 ----------------------------------------------------------------------
CriterionResult steady_residual_check(const AcceptanceOptions& opt) {
  CriterionResult r{3, "steady-state residual", false, {}, 0.0};
  const auto start = Clock::now();
  RunConfig cfg = load_shipped(opt, "saint_venant.json");
  double res[2], h[2];
  for (int j = 0; j < 2; ++j) {
    cfg.n_cells = 200 << j;
    const ScaledSystem sys = build_system(cfg.system, cfg.epsilon);
    const SteadyState st = steady_for(cfg, sys);
    res[j] = steady_residual(st, sys.spec);
    h[j] = st.grid.spacing();
  }
  const double limit = 5.0 * (h[0] * h[0] + 1e-12);
  const double ratio = res[0] / res[1];
  r.seconds = seconds_since(start);
  r.passed = res[0] <= limit && ratio >= 3.5 && r.seconds <= 5.0;
  r.detail = "residual " + num(res[0]) + " at n=200 (limit " + num(limit) + "), ratio " +
             num(ratio) + " on doubling";
  return r;
}

// ---- 4 ----------------------------------------------------------------------
struct SmoothData {
  std::function<double(double, double)> speed, source;
  std::function<double(double)> y0, yl;
};

std::vector<double> upwind_oracle(const SmoothData& d, double L, int n, double sup,
                                  const std::vector<double>& times, int stride,
                                  std::vector<std::vector<double>>& out) {
  const double h = L / n;
  std::vector<double> y(n + 1), next(n + 1);
  for (int i = 0; i <= n; ++i) y[i] = d.y0(i * h);
  out.assign(1, {});
  for (int i = 0; i <= n; i += stride) out[0].push_back(y[i]);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double span = times[k] - times[k - 1];
    const int m = static_cast<int>(std::ceil(span / (0.9 * h / sup)));
    const double dt = span / m;
    for (int s = 0; s < m; ++s) {
      const double t = times[k - 1] + s * dt;
      next[0] = d.yl(t + dt);
      for (int i = 1; i <= n; ++i) {
        const double x = i * h;
        next[i] = y[i] - d.speed(t, x) * dt / h * (y[i] - y[i - 1]) + dt * d.source(t, x);
      }
      std::swap(y, next);
    }
    out.emplace_back();
    for (int i = 0; i <= n; i += stride) out.back().push_back(y[i]);
  }
  return y;
}

CriterionResult transport_oracle(const AcceptanceOptions&) {
  CriterionResult r{4, "transport oracle equivalence", false, {}, 0.0};
  const auto start = Clock::now();
  const double L = 1.0, T = 2.0;
  const int n = 100;
  const Grid grid(L, n);

  auto make_field = [&](const SmoothData& d, double c, double sup) {
    CoefficientField f{d.speed, d.source, c, sup, L};
    f.with_grid(grid);
    return f;
  };
  auto lattice = [&](double sup) {
    std::vector<double> times;
    const double dt = grid.spacing() / sup;
    const int m = static_cast<int>(std::ceil(T / dt));
    for (int k = 0; k <= m; ++k) times.push_back(T * k / m);
    return times;
  };

  // Oracle comparison on a = 1 + x/2, b = sin x.
  SmoothData d;
  d.speed = [](double, double x) { return 1.0 + 0.5 * x; };
  d.source = [](double, double x) { return std::sin(x); };
  d.y0 = [](double x) { return std::cos(2.0 * x) + 0.3 * std::sin(5.0 * x); };
  d.yl = [](double t) { return 1.0 + 0.5 * std::sin(3.0 * t); };
  const std::vector<double> times = lattice(1.5);
  const SpaceTimeField sol =
      solve_transport(make_field(d, 1.0, 1.5), {d.y0, d.yl, 0.0}, grid, times);
  std::vector<std::vector<double>> oracle;
  upwind_oracle(d, L, 10 * n, 1.5, times, 10, oracle);
  double err = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      err = std::max(err, std::abs(sol.at(k, i) - oracle[k][i]));
    }
  }

  // A-priori bound on random smooth data.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uni(-1.0, 1.0), pos(0.0, 1.0);
  double worst_excess = -1e300;
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double p = pos(rng), q = 1.0 + 4.0 * pos(rng), w = 3.0 * uni(rng);
    const double a0 = uni(rng), a1 = uni(rng), a2 = uni(rng), k1 = 1.0 + 5.0 * pos(rng);
    const double b1 = uni(rng), b2 = uni(rng), om = 1.0 + 6.0 * pos(rng);
    const double s1 = uni(rng), s2 = 2.0 * pos(rng);
    SmoothData rd;
    rd.speed = [p, q, w](double t, double x) {
      return 1.0 + p * (1.0 + std::sin(q * x + w * t)) / 2.0;
    };
    rd.source = [s1, s2](double t, double x) { return s1 * std::cos(s2 * x + t); };
    rd.y0 = [a0, a1, a2, k1](double x) {
      return a0 + a1 * std::sin(k1 * x) + a2 * std::cos(std::numbers::pi * x);
    };
    const double y00 = rd.y0(0.0);
    rd.yl = [y00, b1, b2, om](double t) {
      return y00 + b1 * std::sin(om * t) + b2 * (1.0 - std::cos(om * t));
    };
    const double sup = 1.0 + p;
    const std::vector<double> rt = lattice(sup);
    const SpaceTimeField y =
        solve_transport(make_field(rd, 1.0, sup), {rd.y0, rd.yl, 0.0}, grid, rt);
    double b_sup = 0.0;
    for (int j = 0; j <= 200; ++j) {
      const double t = T * j / 200.0;
      b_sup = std::max(b_sup, sup_abs([&](double x) { return rd.source(t, x); }, 0.0, L));
    }
    const double bound = (L / 1.0) * b_sup +
                         std::max(sup_abs(rd.y0, 0.0, L), sup_abs(rd.yl, 0.0, T));
    const double excess = max_abs(y.values) - bound;
    worst_excess = std::max(worst_excess, excess);
    if (excess > 1e-8) ++violations;
  }
  r.seconds = seconds_since(start);
  r.passed = err <= 3.0 * grid.spacing() && violations == 0 && r.seconds <= 60.0;
  r.detail = "max |solve_transport - upwind x10| = " + num(err) + " (limit " +
             num(3.0 * grid.spacing()) + "); a-priori bound violations " +
             std::to_string(violations) + "/100 (worst excess " + num(worst_excess) + ")";
  return r;
}

// ---- 5 ----------------------------------------------------------------------
CriterionResult spectral_root(const AcceptanceOptions&) {
  CriterionResult r{5, "spectral root and asymptotics", false, {}, 0.0};
  const auto start = Clock::now();
  const double c = 1.0, L = 1.0;
  double worst_residual = 0.0, worst_ode = 0.0, worst_invariant = 0.0;
  bool positive = true, increasing = true, bounded = true;
  double previous = -1e300;
  std::ostringstream seq;
  for (int k = 2; k <= 8; ++k) {
    const double eps = std::pow(10.0, -k);
    const EigenPair p = eigen_pair(c, L, eps);
    const double x = L * p.alpha;
    const double target = c / (L * eps);
    worst_residual = std::max(worst_residual, std::abs(std::sinh(x) / x - target) / target);
    worst_invariant = std::max(
        {worst_invariant, std::abs(p.lambda * p.lambda - c * c * p.alpha * p.alpha - eps * eps),
         std::abs(p.mu_coef + std::exp(-p.alpha * L))});
    const double gap = x - std::log(1.0 / eps);
    seq << (k > 2 ? ", " : "") << num(gap);
    positive = positive && gap > 0.0;
    increasing = increasing && gap > previous;
    bounded = bounded && gap <= 2.0 * std::log(std::log(1.0 / eps)) + 4.0;
    previous = gap;

    // Fourth-order central differences, h = 1e-4.
    const Grid grid(L, 10000);
    const ProfilePair f = eigenfunction(p, grid);
    const double h = grid.spacing();
    const double amp = std::max(max_abs(f.u), max_abs(f.v));
    auto d = [h](const std::vector<double>& y, std::size_t i) {
      return (8.0 * (y[i + 1] - y[i - 1]) - (y[i + 2] - y[i - 2])) / (12.0 * h);
    };
    for (std::size_t i = 2; i + 2 < grid.size(); ++i) {
      worst_ode = std::max({worst_ode,
                            std::abs(p.lambda * f.u[i] + c * d(f.u, i) - eps * f.v[i]) / amp,
                            std::abs(p.lambda * f.v[i] - c * d(f.v, i) - eps * f.u[i]) / amp});
    }
  }
  r.seconds = seconds_since(start);
  r.passed = worst_residual <= 1e-12 && positive && increasing && bounded && worst_ode <= 1e-8 &&
             worst_invariant <= 1e-10 && r.seconds <= 5.0;
  r.detail = "root residual " + num(worst_residual) + ", L alpha - ln(1/eps) = [" + seq.str() +
             "], ODE residual " + num(worst_ode) + ", invariants " + num(worst_invariant);
  return r;
}

// ---- 6 ----------------------------------------------------------------------
CriterionResult rate_bracket(const AcceptanceOptions& opt) {
  CriterionResult r{6, "rate sharpness bracket", false, {}, 0.0};
  const auto start = Clock::now();
  const std::vector<double> eps{1e-3, 1e-4, 1e-6};
  std::vector<SpectralRow> rows(eps.size());
  parallel_for(eps.size(), opt.workers,
               [&](std::size_t i) { rows[i] = spectral_row(1.0, 1.0, eps[i], 256); });
  bool inside = true, decreasing = true;
  std::ostringstream ratios;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    inside = inside && rows[i].rate_ratio >= 1.0 && rows[i].rate_ratio <= 1.5;
    if (i > 0) decreasing = decreasing && rows[i].rate_ratio < rows[i - 1].rate_ratio;
    ratios << (i ? ", " : "") << num(rows[i].rate_ratio);
  }
  r.seconds = seconds_since(start);
  r.passed = inside && decreasing && r.seconds <= 120.0;
  r.detail = "r(eps)/ln(1/eps) for eps = 1e-3, 1e-4, 1e-6: [" + ratios.str() + "]";
  return r;
}

// ---- 7 ----------------------------------------------------------------------
CriterionResult lyapunov_certificate(const AcceptanceOptions& opt) {
  CriterionResult r{7, "Lyapunov certificate", false, {}, 0.0};
  const auto start = Clock::now();
  bool ok = true;
  std::ostringstream detail;
  for (const auto& path : shipped_configs(opt.config_dir)) {
    const auto run_start = Clock::now();
    const Simulation sim = simulate(load_config(path.string()));
    const LyapunovDecayCheck check =
        check_lyapunov_decay(sim.series.t, sim.series.lyapunov, sim.c_eps.value_or(0.0),
                             sim.grid().spacing());
    const double run_time = seconds_since(run_start);
    const bool pass = check.pass_fraction() >= 0.99 && run_time <= 60.0;
    ok = ok && pass;
    detail << path.stem().string() << " " << check.passed << "/" << check.steps << "; ";
  }
  r.seconds = seconds_since(start);
  r.passed = ok;
  r.detail = detail.str();
  return r;
}

// ---- 8 ----------------------------------------------------------------------
CriterionResult rate_scaling(const AcceptanceOptions& opt) {
  CriterionResult r{8, "decay-rate scaling", false, {}, 0.0};
  const auto start = Clock::now();
  const RunConfig cfg = load_shipped(opt, "linear_source.json");
  const SweepReport rep = sweep_epsilon(cfg, {1e-2, 1e-3, 1e-4}, opt.workers);
  const ScaledSystem sys = build_system(cfg.system, cfg.epsilon);
  const double expected = sys.spec.speed_floor / cfg.system.length * std::log(10.0);
  bool ok = rep.rows.size() == 3;
  std::ostringstream detail;
  for (const auto& row : rep.rows) {
    ok = ok && row.slope.has_value();
    detail << "slope(" << num(row.epsilon) << ") = "
           << (row.slope ? num(*row.slope) : row.status) << "; ";
  }
  if (ok) {
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
      const double diff = *rep.rows[i - 1].slope - *rep.rows[i].slope;
      const double rel = diff / expected - 1.0;
      detail << "diff " << num(diff) << " (" << num(100.0 * rel) << "%); ";
      ok = ok && std::abs(rel) <= 0.35;
    }
  }
  r.seconds = seconds_since(start);
  r.passed = ok && r.seconds <= 600.0;
  r.detail = detail.str() + "expected " + num(expected);
  return r;
}

// ---- 9 ----------------------------------------------------------------------
CriterionResult interpolation_inequality(const AcceptanceOptions&) {
  CriterionResult r{9, "interpolation inequality", false, {}, 0.0};
  const auto start = Clock::now();
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> cells(1, 60);
  std::uniform_real_distribution<double> length(0.05, 20.0), scale(-3.0, 3.0);
  std::normal_distribution<double> normal;
  int falsified = 0;
  double tightest = 1e300;
  for (int trial = 0; trial < 10000; ++trial) {
    const Grid grid(length(rng), cells(rng));
    const double amp = std::pow(10.0, scale(rng));
    std::vector<double> u(grid.size());
    for (auto& x : u) x = amp * normal(rng);
    const bool zero_left = trial % 2 == 0;
    if (zero_left) u[0] = 0.0;
    const InterpolationReport rep = linf_interpolation_check(u, grid, zero_left);
    if (rep.falsified) ++falsified;
    if (zero_left && rep.linf > 0.0) {
      tightest = std::min(tightest, rep.margin_zero_left / std::pow(rep.linf, 3.0));
    }
  }
  r.seconds = seconds_since(start);
  r.passed = falsified == 0 && r.seconds <= 5.0;
  r.detail = std::to_string(falsified) + " falsifications in 10^4 draws (smallest relative margin" +
             " with u(0)=0: " + num(tightest) + ")";
  return r;
}

// ---- 10 ---------------------------------------------------------------------
CriterionResult determinism(const AcceptanceOptions& opt) {
  CriterionResult r{10, "determinism and contraction", false, {}, 0.0};
  const auto start = Clock::now();
  bool identical = true;
  double worst_ratio = 0.0;
  for (const auto& path : shipped_configs(opt.config_dir)) {
    const RunConfig cfg = load_config(path.string());
    const Simulation a = simulate(cfg);
    const Simulation b = simulate(cfg);
    identical = identical && simulation_csv(a) == simulation_csv(b) &&
                a.evolution.u.values == b.evolution.u.values &&
                a.evolution.v.values == b.evolution.v.values;
    worst_ratio = std::max(worst_ratio, a.evolution.max_contraction_ratio);
  }
  r.seconds = seconds_since(start);
  r.passed = identical && worst_ratio <= 0.5;
  r.detail = std::string(identical ? "repeated runs byte-identical" : "repeated runs differ") +
             "; max Picard increment ratio " + num(worst_ratio);
  return r;
}

}  // namespace

std::vector<std::filesystem::path> shipped_configs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string format_criterion(const CriterionResult& r) {
  std::string detail = r.detail;
  while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
  std::ostringstream out;
  out << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << detail
      << " ("<< std::fixed << std::setprecision(2) << r.seconds << " s)";
  return out.str();
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::vector<int>& only) {
  using Fn = CriterionResult (*)(const AcceptanceOptions&);
  const std::vector<std::pair<int, Fn>> all{
      {1, extinction},         {2, feedback_exactness},   {3, steady_residual_check},
      {4, transport_oracle},   {5, spectral_root},        {6, rate_bracket},
      {7, lyapunov_certificate}, {8, rate_scaling},       {9, interpolation_inequality},
      {10, determinism}};
  std::vector<CriterionResult> results;
  for (const auto& [id, fn] : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    try {
      results.push_back(fn(opt));
    } catch (const std::exception& e) {
      results.push_back({id, "criterion " + std::to_string(id), false,
                         std::string("error: ") + e.what(), 0.0});
    }
  }
  return results;
}

}  // namespace hypstab
