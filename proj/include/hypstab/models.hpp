#pragma once

#include <functional>
#include <string>
#include <utility>

#include "hypstab/core.hpp"

namespace hypstab {

/// Spatial shape s(x) on [0, L] with sup |s| = 1.
enum class Shape { constant, cosine, sine };

Shape parse_shape(const std::string& name);
std::string shape_name(Shape shape);
double shape_value(Shape shape, double x, double L);

struct SaintVenantParams {
  double gravity = 9.81;
  double friction = 0.0;        // c_f
  double slope_amplitude = 0.0; // sup |d_x b|
  Shape slope_shape = Shape::constant;
  double depth = 1.0;           // reference H
  double velocity = 0.0;        // reference V
  double length = 1.0;
  double radius = 0.0;          // 0: min(lambda, mu) / sqrt(10) at the reference state
};

struct SavageHutterParams {
  double gravity = 9.81;
  double angle_amplitude = 0.0;  // sup |theta| (radians)
  Shape angle_shape = Shape::constant;
  double depth = 1.0;
  double velocity = 0.0;
  double length = 1.0;
  double radius = 0.0;
};

/// Diagonal system together with the amplitude split eps (f, g).
struct ScaledSystem {
  SystemSpec spec;
  double epsilon = 0.0;
};

/// u = V + 2 sqrt(g H), v = V - 2 sqrt(g H).
std::pair<double, double> sv_to_riemann(double depth, double velocity, double gravity);
/// H = (u - v)^2 / (16 g), V = (u + v) / 2.
std::pair<double, double> sv_from_riemann(double u, double v, double gravity);

/// lambda = (3u + v)/4, mu = -(u + 3v)/4, both sources
/// F = -g d_x b - 2 c_f g ((u+v)/(u-v))^2 split as eps = sup|d_x b| + c_f.
ScaledSystem sv_system(const SaintVenantParams& params);

/// Same speeds with the invariants built on g cos(theta_ref), theta_ref the
/// mean angle; sources -g sin(theta(x)) split as eps = g sup|sin theta|.
ScaledSystem sh_system(const SavageHutterParams& params);

/// Unscaled Saint-Venant source F(x, u, v).
double sv_source(const SaintVenantParams& params, double x, double u, double v);

// Built-in test families.
struct ConstantParams {
  double speed = 1.0;
  double f0 = 0.0;
  double g0 = 0.0;
  double radius = 1.0;
};
struct LinearSourceParams {
  double speed = 1.0;
  double a11 = 0.0, a12 = 1.0, a21 = 1.0, a22 = 0.0;
  double radius = 1.0;
};
struct ArctanSpeedParams {
  double radius = 0.5;
};

/// lambda = mu = speed, f = f0, g = g0, reference (0, 0).
SystemSpec constant_system(const ConstantParams& params);
/// lambda = mu = speed, f = a11 u + a12 v, g = a21 u + a22 v.
SystemSpec linear_source_system(const LinearSourceParams& params);
/// lambda = 1 + u^2, mu = 1, f = 1, g = 0.
SystemSpec arctan_speed_system(const ArctanSpeedParams& params);

}  // namespace hypstab
