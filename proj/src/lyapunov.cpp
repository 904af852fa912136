#include "hypstab/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypstab {

double l_theta(std::span<const double> u, std::span<const double> v, double theta,
               const Grid& grid) {
  if (u.size() != grid.size() || v.size() != grid.size()) {
    throw DomainError("l_theta: profile length does not match grid");
  }
  const double L = grid.length();
  std::vector<double> integrand(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    integrand[i] = u[i] * u[i] * std::exp(-theta * x) + v[i] * v[i] * std::exp(-theta * (L - x));
  }
  return quadrature(integrand, grid);
}

double l_theta(const ProfilePair& profiles, double theta, const Grid& grid) {
  return l_theta(profiles.u, profiles.v, theta, grid);
}

double l_tilde_theta(double y_left, double y_right, const LyapunovParams& p) {
  auto term = [&](double y) {
    const double a = std::abs(y);
    if (a == 0.0) return 0.0;
    const double ag = std::pow(a, p.gamma);
    return p.c_tilde * a * a * ag * std::exp(p.theta * p.c * ag / (p.gain * p.gamma)) /
           (p.gain * (p.gamma + 2.0));
  };
  return term(y_left) + term(y_right);
}

double estimate_c_tilde(const PerturbationCoefficients& coeffs, const SpaceTimeField& u,
                        const SpaceTimeField& v) {
  const Grid& grid = coeffs.grid();
  const std::size_t n = grid.size();
  if (u.n_nodes != n || v.n_nodes != n || u.levels() != v.levels()) {
    throw DomainError("estimate_c_tilde: trajectory does not match the grid");
  }
  const double eps = coeffs.epsilon();
  const double R = coeffs.spec().radius;
  // Below this amplitude the source ratio is evaluated on the same ray at
  // this amplitude; cancellation would otherwise swamp it.
  const double floor = 1e-6 * R;
  const double h = grid.spacing();

  double bound = 0.0;
  std::vector<double> alpha_row(n), beta_row(n);
  for (std::size_t k = 0; k < u.levels(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = u.at(k, i), b = v.at(k, i);
      if (!(std::hypot(a, b) < R)) {
        std::ostringstream msg;
        msg << "estimate_c_tilde: trajectory value (" << a << ", " << b
            << ") leaves the sampling ball of radius " << R;
        throw DomainError(msg.str());
      }
      alpha_row[i] = coeffs.alpha(i, a, b);
      beta_row[i] = coeffs.beta(i, a, b);
      bound = std::max({bound, alpha_row[i], beta_row[i]});
      const double size = std::abs(a) + std::abs(b);
      if (eps > 0.0 && size > 0.0) {
        const double scale = size < floor ? floor / size : 1.0;
        const double sa = a * scale, sb = b * scale;
        const double denom = eps * (std::abs(sa) + std::abs(sb));
        bound = std::max({bound, 2.0 * std::abs(coeffs.source_u(i, sa, sb)) / denom,
                          2.0 * std::abs(coeffs.source_v(i, sa, sb)) / denom});
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = std::min(n - 1, i + 1);
      const double dx = h * static_cast<double>(hi - lo);
      bound = std::max({bound, std::abs(alpha_row[hi] - alpha_row[lo]) / dx,
                        std::abs(beta_row[hi] - beta_row[lo]) / dx});
    }
  }
  return 1.1 * bound;
}

double lyapunov_exponent(double theta, double c, double L, double c_tilde, double epsilon) {
  return c_tilde * epsilon * (3.0 + std::exp(theta * L)) / 2.0 + c_tilde - c * theta;
}

namespace {
void check_rate_range(double c, double L, double c_tilde, double epsilon) {
  const double upper = 2.0 * c / (c_tilde * L);
  if (!(epsilon > 0.0 && epsilon < upper)) {
    std::ostringstream msg;
    msg << "epsilon = " << epsilon << " outside the positivity range (0, " << upper << ")";
    throw DomainError(msg.str());
  }
}
}  // namespace

double optimal_theta(double c, double L, double c_tilde, double epsilon) {
  check_rate_range(c, L, c_tilde, epsilon);
  return std::log(2.0 * c / (c_tilde * epsilon * L)) / L;
}

double decay_rate(double c, double L, double c_tilde, double epsilon) {
  check_rate_range(c, L, c_tilde, epsilon);
  const double speed = c / L;
  return speed * std::log(1.0 / epsilon) -
         (speed + c_tilde - speed * std::log(2.0 * c / (c_tilde * L))) - 1.5 * c_tilde * epsilon;
}

double kappa(double c, double delta, double gamma, double gain, double L) {
  return c * std::pow(delta, gamma) / (gain * L * gamma);
}

InterpolationReport linf_interpolation_check(std::span<const double> samples, const Grid& grid,
                                             bool zero_at_left) {
  if (samples.size() != grid.size()) {
    throw DomainError("interpolation check: sample count does not match grid");
  }
  const double h = grid.spacing(), L = grid.length();
  InterpolationReport r;
  double l2sq = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double a = samples[i], b = samples[i + 1];
    l2sq += h * (a * a + a * b + b * b) / 3.0;
    r.lipschitz = std::max(r.lipschitz, std::abs(b - a) / h);
  }
  r.linf = max_abs(samples);
  r.l2 = std::sqrt(l2sq);
  const double cube = r.linf * r.linf * r.linf;
  r.margin_l2 = 2.0 / std::sqrt(L) * r.l2 - r.linf;
  r.margin_cubic = 8.0 * l2sq * r.lipschitz - cube;
  r.margin_zero_left = 16.0 * l2sq * r.lipschitz - cube;
  // Relative slack for rounding in the norms.
  const double tol = 1e-12;
  const bool first = r.margin_l2 >= -tol * r.linf;
  const bool second = r.margin_cubic >= -tol * cube;
  r.falsified = !(first || second);
  if (zero_at_left && !(r.margin_zero_left >= -tol * cube)) r.falsified = true;
  return r;
}

DecayFit fit_decay(std::span<const double> times, std::span<const double> values, double t_a,
                   double t_b) {
  if (times.size() != values.size()) throw DomainError("fit_decay: series length mismatch");
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < t_a || times[k] > t_b) continue;
    if (!(values[k] > 0.0)) {
      std::ostringstream msg;
      msg << "fit_decay: nonpositive value " << values[k] << " at t = " << times[k];
      throw DomainError(msg.str());
    }
    const double y = std::log(values[k]);
    st += times[k];
    sy += y;
    stt += times[k] * times[k];
    sty += times[k] * y;
    ++count;
  }
  if (count < 10) {
    std::ostringstream msg;
    msg << "fit_decay: only " << count << " points in [" << t_a << ", " << t_b << "], need 10";
    throw DomainError(msg.str());
  }
  const double m = static_cast<double>(count);
  const double tbar = st / m, ybar = sy / m;
  const double sxx = stt - m * tbar * tbar;
  const double sxy = sty - m * tbar * ybar;
  DecayFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = ybar - fit.slope * tbar;
  fit.points = count;
  return fit;
}

LyapunovDecayCheck check_lyapunov_decay(std::span<const double> times,
                                        std::span<const double> values, double c_eps, double h) {
  if (times.size() != values.size()) throw DomainError("lyapunov check: series length mismatch");
  LyapunovDecayCheck check;
  const double max_value = max_abs(values);
  if (max_value == 0.0) {
    check.steps = times.size() > 0 ? times.size() - 1 : 0;
    check.passed = check.steps;
    return check;
  }
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double dt = times[k + 1] - times[k];
    const double rate = (values[k + 1] - values[k]) / dt;
    const double excess = rate + c_eps * values[k];
    const double budget = 0.05 * c_eps * values[k] + 10.0 * (h + dt) * max_value;
    ++check.steps;
    if (excess <= budget) ++check.passed;
    check.worst_slack = std::max(check.worst_slack, excess / max_value);
  }
  return check;
}

}  // namespace hypstab
