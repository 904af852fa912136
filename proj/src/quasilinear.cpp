#include "hypstab/quasilinear.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <memory>
#include <sstream>

namespace hypstab {

PerturbationCoefficients::PerturbationCoefficients(const SystemSpec& spec,
                                                   const SteadyState& steady)
    : spec_(spec), steady_(steady), slopes_(steady_slopes(steady, spec)) {}

double PerturbationCoefficients::alpha(std::size_t node, double a, double b) const {
  return spec_.lambda(steady_.profiles.u[node] + a, steady_.profiles.v[node] + b);
}

double PerturbationCoefficients::beta(std::size_t node, double a, double b) const {
  return spec_.mu(steady_.profiles.u[node] + a, steady_.profiles.v[node] + b);
}

double PerturbationCoefficients::source_u(std::size_t node, double a, double b) const {
  if (a == 0.0 && b == 0.0) return 0.0;
  const double x = steady_.grid.node(node);
  const double us = steady_.profiles.u[node], vs = steady_.profiles.v[node];
  const double eps = steady_.epsilon;
  double value = 0.0;
  if (eps != 0.0) value = eps * (spec_.f(x, us + a, vs + b) - spec_.f(x, us, vs));
  const double slope = slopes_.u[node];
  if (slope != 0.0) value -= slope * (spec_.lambda(us + a, vs + b) - spec_.lambda(us, vs));
  return value;
}

double PerturbationCoefficients::source_v(std::size_t node, double a, double b) const {
  if (a == 0.0 && b == 0.0) return 0.0;
  const double x = steady_.grid.node(node);
  const double us = steady_.profiles.u[node], vs = steady_.profiles.v[node];
  const double eps = steady_.epsilon;
  double value = 0.0;
  if (eps != 0.0) value = eps * (spec_.g(x, us + a, vs + b) - spec_.g(x, us, vs));
  const double slope = slopes_.v[node];
  if (slope != 0.0) value += slope * (spec_.mu(us + a, vs + b) - spec_.mu(us, vs));
  return value;
}

PerturbationCoefficients frozen_coefficients(const SystemSpec& spec, const SteadyState& steady) {
  return PerturbationCoefficients(spec, steady);
}

// ---------------------------------------------------------------------------

namespace {

std::optional<std::string> field_violation(const SpaceTimeField& f, const char* name, double A,
                                           double B, double h) {
  const double slack = B * (1.0 + 4.0 * h);
  const double amp_limit = A * (1.0 + 1e-12) + 1e-300;
  for (std::size_t k = 0; k < f.levels(); ++k) {
    for (std::size_t i = 0; i < f.n_nodes; ++i) {
      const double value = f.at(k, i);
      if (!(std::abs(value) <= amp_limit)) {
        std::ostringstream msg;
        msg << "amplitude bound A = " << A << " violated by " << name << " = " << value
            << " at t = " << f.times[k] << ", node " << i;
        return msg.str();
      }
      if (i + 1 < f.n_nodes) {
        const double q = std::abs(f.at(k, i + 1) - value) / h;
        if (q > slack) {
          std::ostringstream msg;
          msg << "Lipschitz bound B = " << B << " violated in x by " << name
              << " (quotient " << q << ") at t = " << f.times[k] << ", node " << i;
          return msg.str();
        }
      }
      if (k + 1 < f.levels()) {
        const double q = std::abs(f.at(k + 1, i) - value) / (f.times[k + 1] - f.times[k]);
        if (q > slack) {
          std::ostringstream msg;
          msg << "Lipschitz bound B = " << B << " violated in t by " << name
              << " (quotient " << q << ") at t = " << f.times[k] << ", node " << i;
          return msg.str();
        }
      }
    }
  }
  return std::nullopt;
}

double lipschitz_of(std::span<const double> samples, double h) {
  double q = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    q = std::max(q, std::abs(samples[i + 1] - samples[i]) / h);
  }
  return q;
}

}  // namespace

std::optional<std::string> TrajectoryField::admissibility_violation(const Grid& grid) const {
  if (auto bad = field_violation(u, "U", amplitude, lipschitz, grid.spacing())) return bad;
  return field_violation(v, "V", amplitude, lipschitz, grid.spacing());
}

double TrajectoryField::sup_norm() const {
  return std::max(max_abs(u.values), max_abs(v.values));
}

std::vector<std::string> SolverBounds::failed_conditions(double c, double L, double gain,
                                                         double gamma) const {
  std::vector<std::string> failed;
  const double M = speed_derivative, B = lipschitz;
  const double growth = (L / c) * std::exp((L / c) * M * (1.0 + 2.0 * B));
  const double data = std::max(gain * std::pow(initial_sup, 1.0 - gamma), c * initial_lipschitz) / L;
  if (!(initial_sup < amplitude)) failed.emplace_back("I0 < A");
  if (!(growth * data < B)) failed.emplace_back("x-Lipschitz invariance");
  if (!(M * growth * data < B)) failed.emplace_back("t-Lipschitz invariance");
  return failed;
}

SolverBounds default_bounds(const PerturbationCoefficients& coeffs, const ProfilePair& initial,
                            double gain, double gamma) {
  const Grid& grid = coeffs.grid();
  const SystemSpec& spec = coeffs.spec();
  const double h = grid.spacing(), L = grid.length(), c = spec.speed_floor;
  const double eps = coeffs.epsilon();

  SolverBounds b;
  b.initial_sup = std::max(max_abs(initial.u), max_abs(initial.v));
  b.initial_lipschitz = std::max(lipschitz_of(initial.u, h), lipschitz_of(initial.v, h));

  const std::size_t stride = std::max<std::size_t>(1, grid.size() / 64);
  double source_sup = 0.0;
  for (const auto& [u, v] : disc_samples(spec.u_ref, spec.v_ref, spec.radius, 256)) {
    for (std::size_t i = 0; i < grid.size(); i += stride) {
      const double x = grid.node(i);
      source_sup = std::max({source_sup, std::abs(spec.f(x, u, v)), std::abs(spec.g(x, u, v))});
    }
  }
  b.amplitude = 2.0 * (b.initial_sup + eps * source_sup * L / c);

  double P = 0.0, M = 0.0;
  for (const auto& [a, bb] : disc_samples(0.0, 0.0, b.amplitude, 64)) {
    for (std::size_t i = 0; i < grid.size(); i += stride) {
      const std::size_t lo = (i == 0) ? 0 : i - 1;
      const std::size_t hi = std::min(grid.size() - 1, i + 1);
      const double dx = grid.node(hi) - grid.node(lo);
      P = std::max({P,
                    std::abs(coeffs.source_u(hi, a, bb) - coeffs.source_u(lo, a, bb)) / dx,
                    std::abs(coeffs.source_v(hi, a, bb) - coeffs.source_v(lo, a, bb)) / dx,
                    std::abs(central_difference([&](double z) { return coeffs.source_u(i, z, bb); }, a)),
                    std::abs(central_difference([&](double z) { return coeffs.source_u(i, a, z); }, bb)),
                    std::abs(central_difference([&](double z) { return coeffs.source_v(i, z, bb); }, a)),
                    std::abs(central_difference([&](double z) { return coeffs.source_v(i, a, z); }, bb))});
      M = std::max({M, coeffs.alpha(i, a, bb), coeffs.beta(i, a, bb),
                    std::abs(coeffs.alpha(hi, a, bb) - coeffs.alpha(lo, a, bb)) / dx,
                    std::abs(coeffs.beta(hi, a, bb) - coeffs.beta(lo, a, bb)) / dx,
                    std::abs(central_difference([&](double z) { return coeffs.alpha(i, z, bb); }, a)),
                    std::abs(central_difference([&](double z) { return coeffs.alpha(i, a, z); }, bb)),
                    std::abs(central_difference([&](double z) { return coeffs.beta(i, z, bb); }, a)),
                    std::abs(central_difference([&](double z) { return coeffs.beta(i, a, z); }, bb))});
    }
  }
  b.source_derivative = P;
  b.speed_derivative = M;

  // Right-hand sides of the Lipschitz invariance conditions with B = 0.
  const double A = b.amplitude;
  const double data =
      std::max(2.0 * P * A + gain * std::pow(b.initial_sup, 1.0 - gamma), c * b.initial_lipschitz);
  const double rhs_x = (L / c) * std::exp((L / c) * M) * (P + data / L);
  const double rhs_t = M * rhs_x + 2.0 * P * A;
  b.lipschitz = 2.0 * std::max(rhs_x, rhs_t);
  return b;
}

// ---------------------------------------------------------------------------

TrajectoryField picard_step(const TrajectoryField& guess, const PerturbationCoefficients& coeffs,
                            const WindowData& data, const StepSettings& settings) {
  const Grid& grid = coeffs.grid();
  const std::size_t n = grid.size();
  const auto& times = guess.u.times;

  auto speed_u = std::make_shared<SpaceTimeField>(times, n);
  auto src_u = std::make_shared<SpaceTimeField>(times, n);
  auto speed_v = std::make_shared<SpaceTimeField>(times, n);  // reflected in x
  auto src_v = std::make_shared<SpaceTimeField>(times, n);
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = guess.u.at(k, i), b = guess.v.at(k, i);
      const std::size_t j = n - 1 - i;
      speed_u->at(k, i) = coeffs.alpha(i, a, b);
      src_u->at(k, i) = coeffs.source_u(i, a, b);
      speed_v->at(k, j) = coeffs.beta(i, a, b);
      src_v->at(k, j) = coeffs.source_v(i, a, b);
    }
  }

  const double c = coeffs.spec().speed_floor;
  CoefficientField field_u{SampledField(speed_u, grid), SampledField(src_u, grid), c,
                           settings.speed_sup, grid.length()};
  CoefficientField field_v{SampledField(speed_v, grid), SampledField(src_v, grid), c,
                           settings.speed_sup, grid.length()};
  field_u.with_grid(grid);
  field_v.with_grid(grid);

  std::vector<double> reflected_initial(data.initial_v.rbegin(), data.initial_v.rend());
  const FeedbackState left = data.left, right = data.right;
  TransportData problem_u{
      [&](double x) { return interpolate(data.initial_u, grid, x); },
      [left](double t) { return feedback_offset(left, t); }, times.front()};
  TransportData problem_v{
      [&](double x) { return interpolate(reflected_initial, grid, x); },
      [right](double t) { return feedback_offset(right, t); }, times.front()};

  auto pending_v = std::async(std::launch::async, [&] {
    return solve_transport(field_v, problem_v, grid, times);
  });
  TrajectoryField out;
  out.u = solve_transport(field_u, problem_u, grid, times);
  SpaceTimeField reflected = pending_v.get();

  out.v = SpaceTimeField(times, n);
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) out.v.at(k, i) = reflected.at(k, n - 1 - i);
  }
  out.amplitude = guess.amplitude;
  out.lipschitz = guess.lipschitz;
  if (auto bad = out.admissibility_violation(grid)) {
    throw SolverError("fixed-point iterate left the admissible set: " + *bad);
  }
  return out;
}

WindowResult solve_window(const WindowData& data, const PerturbationCoefficients& coeffs,
                          std::span<const double> times, double amplitude, double lipschitz,
                          const StepSettings& settings, double tol, int max_iter) {
  const std::size_t n = coeffs.grid().size();
  std::vector<double> lattice(times.begin(), times.end());

  TrajectoryField guess;
  guess.u = SpaceTimeField(lattice, n);
  guess.v = SpaceTimeField(lattice, n);
  guess.amplitude = amplitude;
  guess.lipschitz = lipschitz;
  for (std::size_t k = 0; k < lattice.size(); ++k) {
    std::copy(data.initial_u.begin(), data.initial_u.end(), guess.u.slice(k).begin());
    std::copy(data.initial_v.begin(), data.initial_v.end(), guess.v.slice(k).begin());
  }

  WindowResult result;
  for (int iter = 1; iter <= max_iter; ++iter) {
    TrajectoryField next = picard_step(guess, coeffs, data, settings);
    double change = 0.0;
    for (std::size_t m = 0; m < next.u.values.size(); ++m) {
      change = std::max({change, std::abs(next.u.values[m] - guess.u.values[m]),
                         std::abs(next.v.values[m] - guess.v.values[m])});
    }
    const double scale = next.sup_norm();
    result.increments.push_back(change);
    result.iterations = iter;
    guess = std::move(next);
    if (iter >= 2) {
      const double prev = result.increments[iter - 2];
      if (prev > 1e3 * tol * scale && prev > 0.0) {
        result.max_contraction_ratio = std::max(result.max_contraction_ratio, change / prev);
      }
    }
    if (change <= tol * scale) {
      result.field = std::move(guess);
      return result;
    }
  }
  std::ostringstream msg;
  msg << "fixed-point iteration did not converge in " << max_iter
      << " iterations (last increment " << result.increments.back() << ")";
  throw SolverError(msg.str());
}

Evolution evolve(const PerturbationCoefficients& coeffs, const ProfilePair& initial,
                 const FeedbackState& left, const FeedbackState& right,
                 const EvolveOptions& options) {
  const Grid& grid = coeffs.grid();
  initial.check(grid);
  const std::size_t n = grid.size();
  const double L = grid.length(), h = grid.spacing();
  const double sup = options.speed_sup;
  const double T = options.final_time;
  if (!(T > 0.0)) throw DomainError("final time must be positive");

  const double window_len = L / (4.0 * sup);
  const int steps = options.steps_per_window > 0
                        ? options.steps_per_window
                        : std::max(1, static_cast<int>(std::ceil(window_len / (h / sup) - 1e-9)));
  const double dt = window_len / steps;

  Evolution ev;
  ev.u.n_nodes = n;
  ev.v.n_nodes = n;
  ev.u.times.push_back(0.0);
  ev.v.times.push_back(0.0);
  ev.u.values = initial.u;
  ev.v.values = initial.v;

  WindowData data{initial.u, initial.v, left, right};
  const StepSettings settings{sup};
  double t0 = 0.0;
  for (int window = 0; t0 < T * (1.0 - 1e-12); ++window) {
    double t1 = t0 + window_len;
    int m = steps;
    if (t1 >= T * (1.0 - 1e-9)) {
      t1 = T;
      m = std::max(1, static_cast<int>(std::ceil((t1 - t0) / dt - 1e-9)));
    }
    std::vector<double> times(m + 1);
    for (int j = 0; j <= m; ++j) times[j] = t0 + (t1 - t0) * (static_cast<double>(j) / m);
    times.back() = t1;

    WindowResult result;
    try {
      result = solve_window(data, coeffs, times, options.amplitude, options.lipschitz, settings,
                            options.picard_tol, options.picard_max_iter);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "window " << window << " [" << t0 << ", " << t1 << "]: " << e.what();
      throw SolverError(msg.str());
    }
    ev.window_starts.push_back(ev.u.times.size() - 1);
    ev.window_iterations.push_back(result.iterations);
    ev.max_contraction_ratio = std::max(ev.max_contraction_ratio, result.max_contraction_ratio);
    for (std::size_t k = 1; k < times.size(); ++k) {
      ev.u.times.push_back(times[k]);
      ev.v.times.push_back(times[k]);
      const auto su = result.field.u.slice(k);
      const auto sv = result.field.v.slice(k);
      ev.u.values.insert(ev.u.values.end(), su.begin(), su.end());
      ev.v.values.insert(ev.v.values.end(), sv.begin(), sv.end());
    }
    const auto last_u = result.field.u.slice(times.size() - 1);
    const auto last_v = result.field.v.slice(times.size() - 1);
    data.initial_u.assign(last_u.begin(), last_u.end());
    data.initial_v.assign(last_v.begin(), last_v.end());
    t0 = t1;
  }
  return ev;
}

}  // namespace hypstab
