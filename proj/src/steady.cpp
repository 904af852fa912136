#include "hypstab/steady.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypstab {

double ball_distance(const ProfilePair& profiles, const SystemSpec& spec) {
  double d = 0.0;
  for (std::size_t i = 0; i < profiles.u.size(); ++i) {
    d = std::max(d, std::hypot(profiles.u[i] - spec.u_ref, profiles.v[i] - spec.v_ref));
  }
  return d;
}

ProfilePair picard_map(const ProfilePair& profiles, double epsilon, const SystemSpec& spec,
                       const Grid& grid) {
  profiles.check(grid);
  if (!(ball_distance(profiles, spec) < spec.radius)) {
    throw DomainError("steady Picard map: input profiles leave the R-ball");
  }
  const std::size_t n = grid.size();
  std::vector<double> f_over_lambda(n), g_over_mu(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.node(i), u = profiles.u[i], v = profiles.v[i];
    f_over_lambda[i] = spec.f(x, u, v) / spec.lambda(u, v);
    g_over_mu[i] = spec.g(x, u, v) / spec.mu(u, v);
  }
  const auto left = cumulative_quadrature(f_over_lambda, grid);
  const auto right = cumulative_quadrature(g_over_mu, grid);
  const double right_total = right.back();

  ProfilePair out;
  out.u.resize(n);
  out.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.u[i] = spec.u_ref + epsilon * left[i];
    out.v[i] = spec.v_ref + epsilon * (right_total - right[i]);
  }
  // Anchors are exact by construction; pin them against rounding.
  out.u.front() = spec.u_ref;
  out.v.back() = spec.v_ref;
  return out;
}

SteadyState solve_steady(const SystemSpec& spec, double epsilon, const Grid& grid, double tol,
                         int max_iter) {
  if (!(tol > 0.0)) throw DomainError("steady solver tolerance must be positive");
  SteadyState state;
  state.epsilon = epsilon;
  state.grid = grid;
  state.profiles = ProfilePair::constant(grid, spec.u_ref, spec.v_ref);

  for (int iter = 1; iter <= max_iter; ++iter) {
    ProfilePair next = picard_map(state.profiles, epsilon, spec, grid);
    double change = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      change = std::max({change, std::abs(next.u[i] - state.profiles.u[i]),
                         std::abs(next.v[i] - state.profiles.v[i])});
    }
    state.profiles = std::move(next);
    state.iterations = iter;
    state.residual = change;
    state.increments.push_back(change);
    if (!(ball_distance(state.profiles, spec) < spec.radius)) {
      std::ostringstream msg;
      msg << "steady iterate " << iter << " left the R-ball (R = " << spec.radius
          << ", epsilon = " << epsilon << "): epsilon is beyond the contraction regime";
      throw SolverError(msg.str());
    }
    if (change <= tol) return state;
  }
  std::ostringstream msg;
  msg << "steady Picard iteration did not converge in " << max_iter
      << " iterations (last increment " << state.residual << ")";
  throw SolverError(msg.str());
}

ProfilePair steady_slopes(const SteadyState& steady, const SystemSpec& spec) {
  const auto& p = steady.profiles;
  ProfilePair out;
  out.u.resize(p.u.size());
  out.v.resize(p.v.size());
  for (std::size_t i = 0; i < p.u.size(); ++i) {
    const double x = steady.grid.node(i);
    out.u[i] = steady.epsilon * spec.f(x, p.u[i], p.v[i]) / spec.lambda(p.u[i], p.v[i]);
    out.v[i] = -steady.epsilon * spec.g(x, p.u[i], p.v[i]) / spec.mu(p.u[i], p.v[i]);
  }
  return out;
}

double steady_residual(const SteadyState& steady, const SystemSpec& spec) {
  const auto& p = steady.profiles;
  const double h2 = 2.0 * steady.grid.spacing();
  double r = 0.0;
  for (std::size_t i = 1; i + 1 < p.u.size(); ++i) {
    const double x = steady.grid.node(i), u = p.u[i], v = p.v[i];
    const double du = (p.u[i + 1] - p.u[i - 1]) / h2;
    const double dv = (p.v[i + 1] - p.v[i - 1]) / h2;
    r = std::max(r, std::abs(spec.lambda(u, v) * du - steady.epsilon * spec.f(x, u, v)));
    r = std::max(r, std::abs(-spec.mu(u, v) * dv - steady.epsilon * spec.g(x, u, v)));
  }
  return r;
}

}  // namespace hypstab
