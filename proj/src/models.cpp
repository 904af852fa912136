#include "hypstab/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hypstab {

Shape parse_shape(const std::string& name) {
  if (name == "constant") return Shape::constant;
  if (name == "cosine") return Shape::cosine;
  if (name == "sine") return Shape::sine;
  throw DomainError("unknown profile shape '" + name + "' (constant, cosine, sine)");
}

std::string shape_name(Shape shape) {
  switch (shape) {
    case Shape::constant: return "constant";
    case Shape::cosine: return "cosine";
    case Shape::sine: return "sine";
  }
  return "constant";
}

double shape_value(Shape shape, double x, double L) {
  switch (shape) {
    case Shape::constant: return 1.0;
    case Shape::cosine: return std::cos(std::numbers::pi * x / L);
    case Shape::sine: return std::sin(std::numbers::pi * x / L);
  }
  return 1.0;
}

namespace {

double shape_mean(Shape shape) {
  switch (shape) {
    case Shape::constant: return 1.0;
    case Shape::cosine: return 0.0;
    case Shape::sine: return 2.0 / std::numbers::pi;
  }
  return 1.0;
}

// Riemann-invariant speeds shared by both shallow-flow models.
void set_shallow_speeds(SystemSpec& spec) {
  spec.lambda = [](double u, double v) { return 0.25 * (3.0 * u + v); };
  spec.mu = [](double u, double v) { return -0.25 * (u + 3.0 * v); };
  spec.derivatives.lambda_u = [](double, double) { return 0.75; };
  spec.derivatives.lambda_v = [](double, double) { return 0.25; };
  spec.derivatives.mu_u = [](double, double) { return -0.25; };
  spec.derivatives.mu_v = [](double, double) { return -0.75; };
}

// Reference state, radius and the analytic speed floor over the 2R-disc.
void set_reference(SystemSpec& spec, double u, double v, double radius) {
  spec.u_ref = u;
  spec.v_ref = v;
  const double lam = spec.lambda(u, v), mu = spec.mu(u, v);
  if (!(lam > 0.0 && mu > 0.0)) {
    std::ostringstream msg;
    msg << "reference state has non-positive wave speeds (lambda = " << lam << ", mu = " << mu
        << "); only subcritical flow is supported";
    throw DomainError(msg.str());
  }
  const double slowest = std::min(lam, mu);
  spec.radius = radius > 0.0 ? radius : slowest / std::sqrt(10.0);
  // |grad lambda| = |grad mu| = sqrt(10)/4
  spec.speed_floor = slowest - 2.0 * spec.radius * std::sqrt(10.0) / 4.0;
  if (!(spec.speed_floor > 0.0)) {
    std::ostringstream msg;
    msg << "ball radius " << spec.radius << " too large: speeds reach zero inside the 2R-disc";
    throw DomainError(msg.str());
  }
}

void check_flow(double gravity, double depth, double length) {
  if (!(gravity > 0.0)) throw DomainError("gravity must be positive");
  if (!(depth > 0.0)) throw DomainError("reference depth must be positive");
  if (!(length > 0.0)) throw DomainError("length must be positive");
}

}  // namespace

std::pair<double, double> sv_to_riemann(double depth, double velocity, double gravity) {
  if (!(depth > 0.0)) throw DomainError("sv_to_riemann: depth must be positive");
  if (!(gravity > 0.0)) throw DomainError("sv_to_riemann: gravity must be positive");
  const double w = 2.0 * std::sqrt(gravity * depth);
  return {velocity + w, velocity - w};
}

std::pair<double, double> sv_from_riemann(double u, double v, double gravity) {
  if (!(u > v)) {
    std::ostringstream msg;
    msg << "sv_from_riemann: need u > v, got u = " << u << ", v = " << v;
    throw DomainError(msg.str());
  }
  if (!(gravity > 0.0)) throw DomainError("sv_from_riemann: gravity must be positive");
  return {(u - v) * (u - v) / (16.0 * gravity), 0.5 * (u + v)};
}

double sv_source(const SaintVenantParams& p, double x, double u, double v) {
  const double ratio = (u + v) / (u - v);
  return -p.gravity * p.slope_amplitude * shape_value(p.slope_shape, x, p.length) -
         2.0 * p.friction * p.gravity * ratio * ratio;
}

ScaledSystem sv_system(const SaintVenantParams& p) {
  check_flow(p.gravity, p.depth, p.length);
  if (!(p.friction >= 0.0)) throw DomainError("friction must be nonnegative");
  if (!(p.slope_amplitude >= 0.0)) throw DomainError("slope amplitude must be nonnegative");

  ScaledSystem out;
  set_shallow_speeds(out.spec);
  const auto [u0, v0] = sv_to_riemann(p.depth, p.velocity, p.gravity);
  set_reference(out.spec, u0, v0, p.radius);

  out.epsilon = p.slope_amplitude + p.friction;
  if (out.epsilon == 0.0) {
    out.spec.f = [](double, double, double) { return 0.0; };
  } else {
    const double eps = out.epsilon;
    out.spec.f = [p, eps](double x, double u, double v) { return sv_source(p, x, u, v) / eps; };
  }
  out.spec.g = out.spec.f;
  return out;
}

ScaledSystem sh_system(const SavageHutterParams& p) {
  check_flow(p.gravity, p.depth, p.length);
  if (!(p.angle_amplitude >= 0.0 && p.angle_amplitude < std::numbers::pi / 2.0)) {
    throw DomainError("bottom angle amplitude must lie in [0, pi/2)");
  }
  ScaledSystem out;
  set_shallow_speeds(out.spec);
  const double reference_angle = p.angle_amplitude * shape_mean(p.angle_shape);
  const auto [u0, v0] = sv_to_riemann(p.depth, p.velocity, p.gravity * std::cos(reference_angle));
  set_reference(out.spec, u0, v0, p.radius);

  out.epsilon = p.gravity * std::sin(p.angle_amplitude);
  if (out.epsilon == 0.0) {
    out.spec.f = [](double, double, double) { return 0.0; };
  } else {
    const double eps = out.epsilon;
    out.spec.f = [p, eps](double x, double, double) {
      return -p.gravity * std::sin(p.angle_amplitude * shape_value(p.angle_shape, x, p.length)) /
             eps;
    };
  }
  out.spec.g = out.spec.f;
  return out;
}

SystemSpec constant_system(const ConstantParams& p) {
  if (!(p.speed > 0.0)) throw DomainError("constant family: speed must be positive");
  SystemSpec s;
  const double speed = p.speed, f0 = p.f0, g0 = p.g0;
  s.lambda = [speed](double, double) { return speed; };
  s.mu = s.lambda;
  s.f = [f0](double, double, double) { return f0; };
  s.g = [g0](double, double, double) { return g0; };
  auto zero2 = [](double, double) { return 0.0; };
  auto zero3 = [](double, double, double) { return 0.0; };
  s.derivatives = {zero2, zero2, zero2, zero2, zero3, zero3, zero3, zero3};
  s.radius = p.radius;
  s.speed_floor = speed;
  return s;
}

SystemSpec linear_source_system(const LinearSourceParams& p) {
  if (!(p.speed > 0.0)) throw DomainError("linear_source family: speed must be positive");
  SystemSpec s;
  const double speed = p.speed;
  const double a11 = p.a11, a12 = p.a12, a21 = p.a21, a22 = p.a22;
  s.lambda = [speed](double, double) { return speed; };
  s.mu = s.lambda;
  s.f = [a11, a12](double, double u, double v) { return a11 * u + a12 * v; };
  s.g = [a21, a22](double, double u, double v) { return a21 * u + a22 * v; };
  auto zero2 = [](double, double) { return 0.0; };
  auto constant = [](double k) { return [k](double, double, double) { return k; }; };
  s.derivatives = {zero2, zero2, zero2, zero2, constant(a11), constant(a12), constant(a21),
                   constant(a22)};
  s.radius = p.radius;
  s.speed_floor = speed;
  return s;
}

SystemSpec arctan_speed_system(const ArctanSpeedParams& p) {
  SystemSpec s;
  s.lambda = [](double u, double) { return 1.0 + u * u; };
  s.mu = [](double, double) { return 1.0; };
  s.f = [](double, double, double) { return 1.0; };
  s.g = [](double, double, double) { return 0.0; };
  s.derivatives.lambda_u = [](double u, double) { return 2.0 * u; };
  s.derivatives.lambda_v = [](double, double) { return 0.0; };
  s.derivatives.mu_u = s.derivatives.lambda_v;
  s.derivatives.mu_v = s.derivatives.lambda_v;
  s.radius = p.radius;
  s.speed_floor = 1.0;
  return s;
}

}  // namespace hypstab
