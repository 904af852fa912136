#include "hypstab/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hypstab {

Grid::Grid(double length, int n_cells) : length_(length), n_cells_(n_cells) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError("grid length must be positive and finite");
  }
  if (n_cells < 1) {
    throw DomainError("grid needs at least one cell");
  }
  spacing_ = length / n_cells;
  nodes_.resize(static_cast<std::size_t>(n_cells) + 1);
  for (int i = 0; i <= n_cells; ++i) {
    nodes_[i] = length * (static_cast<double>(i) / n_cells);
  }
  nodes_.back() = length;
}

double central_difference(const std::function<double(double)>& fn, double z) {
  const double step = 1e-6 * (1.0 + std::abs(z));
  return (fn(z + step) - fn(z - step)) / (2.0 * step);
}

double SystemSpec::lambda_u(double u, double v) const {
  if (derivatives.lambda_u) return derivatives.lambda_u(u, v);
  return central_difference([&](double z) { return lambda(z, v); }, u);
}
double SystemSpec::lambda_v(double u, double v) const {
  if (derivatives.lambda_v) return derivatives.lambda_v(u, v);
  return central_difference([&](double z) { return lambda(u, z); }, v);
}
double SystemSpec::mu_u(double u, double v) const {
  if (derivatives.mu_u) return derivatives.mu_u(u, v);
  return central_difference([&](double z) { return mu(z, v); }, u);
}
double SystemSpec::mu_v(double u, double v) const {
  if (derivatives.mu_v) return derivatives.mu_v(u, v);
  return central_difference([&](double z) { return mu(u, z); }, v);
}
double SystemSpec::f_u(double x, double u, double v) const {
  if (derivatives.f_u) return derivatives.f_u(x, u, v);
  return central_difference([&](double z) { return f(x, z, v); }, u);
}
double SystemSpec::f_v(double x, double u, double v) const {
  if (derivatives.f_v) return derivatives.f_v(x, u, v);
  return central_difference([&](double z) { return f(x, u, z); }, v);
}
double SystemSpec::g_u(double x, double u, double v) const {
  if (derivatives.g_u) return derivatives.g_u(x, u, v);
  return central_difference([&](double z) { return g(x, z, v); }, u);
}
double SystemSpec::g_v(double x, double u, double v) const {
  if (derivatives.g_v) return derivatives.g_v(x, u, v);
  return central_difference([&](double z) { return g(x, u, z); }, v);
}

std::vector<std::pair<double, double>> disc_samples(double u0, double v0, double r,
                                                    int samples) {
  std::vector<std::pair<double, double>> points;
  points.reserve(static_cast<std::size_t>(samples) + 1);
  points.emplace_back(u0, v0);
  // Rings of equal area, boundary ring included.
  const int rings = std::max(1, static_cast<int>(std::sqrt(samples / 4.0)));
  const int per_ring = std::max(4, samples / rings);
  for (int k = 1; k <= rings; ++k) {
    const double rho = r * std::sqrt(static_cast<double>(k) / rings);
    for (int j = 0; j < per_ring; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5 * (k % 2)) / per_ring;
      points.emplace_back(u0 + rho * std::cos(phi), v0 + rho * std::sin(phi));
    }
  }
  return points;
}

void check_system(const SystemSpec& spec, int samples) {
  if (!spec.lambda || !spec.mu || !spec.f || !spec.g) {
    throw DomainError("system is missing one of lambda, mu, f, g");
  }
  if (!(spec.radius > 0.0)) throw DomainError("ball radius R must be positive");
  if (!(spec.speed_floor > 0.0)) throw DomainError("speed floor c must be positive");
  if (!(spec.lambda(spec.u_ref, spec.v_ref) > 0.0) || !(spec.mu(spec.u_ref, spec.v_ref) > 0.0)) {
    throw DomainError("wave speeds must be positive at the reference state");
  }
  for (const auto& [u, v] : disc_samples(spec.u_ref, spec.v_ref, 2.0 * spec.radius, samples)) {
    const double la = spec.lambda(u, v);
    const double m = spec.mu(u, v);
    if (la < spec.speed_floor || m < spec.speed_floor) {
      std::ostringstream msg;
      msg << "speed floor violated at (u, v) = (" << u << ", " << v << "): lambda = " << la
          << ", mu = " << m << ", c = " << spec.speed_floor;
      throw DomainError(msg.str());
    }
  }
}

double sup_speed(const SystemSpec& spec, double ball_radius, int samples) {
  double sup = 0.0;
  for (const auto& [u, v] : disc_samples(spec.u_ref, spec.v_ref, ball_radius, samples)) {
    sup = std::max({sup, spec.lambda(u, v), spec.mu(u, v)});
  }
  return sup;
}

ProfilePair ProfilePair::constant(const Grid& grid, double u_value, double v_value) {
  return {std::vector<double>(grid.size(), u_value), std::vector<double>(grid.size(), v_value)};
}

void ProfilePair::check(const Grid& grid) const {
  if (u.size() != grid.size() || v.size() != grid.size()) {
    throw DomainError("profile length does not match grid node count");
  }
}

double quadrature(std::span<const double> samples, const Grid& grid) {
  if (samples.size() != grid.size()) {
    throw DomainError("quadrature: sample count does not match grid node count");
  }
  double sum = 0.5 * (samples.front() + samples.back());
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) sum += samples[i];
  return sum * grid.spacing();
}

std::vector<double> cumulative_quadrature(std::span<const double> samples, const Grid& grid) {
  if (samples.size() != grid.size()) {
    throw DomainError("cumulative quadrature: sample count does not match grid node count");
  }
  std::vector<double> out(samples.size(), 0.0);
  const double half_h = 0.5 * grid.spacing();
  for (std::size_t i = 1; i < samples.size(); ++i) {
    out[i] = out[i - 1] + half_h * (samples[i - 1] + samples[i]);
  }
  return out;
}

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace hypstab
