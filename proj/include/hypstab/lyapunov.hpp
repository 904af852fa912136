#pragma once

#include <span>
#include <vector>

#include "hypstab/core.hpp"
#include "hypstab/quasilinear.hpp"

namespace hypstab {

struct LyapunovParams {
  double theta = 0.0;    // weight exponent (1/length)
  double c_tilde = 1.0;  // uniform constant bounding sources, speeds and speed slopes
  double c = 1.0;
  double length = 1.0;
  double gain = 1.0;     // K
  double gamma = 0.5;
};

/// Certified and measured rates for one run.
struct RateReport {
  double epsilon = 0.0;
  double c_tilde = 0.0;
  double theta_star = 0.0;
  double c_eps = 0.0;       // certified rate (1/time)
  double kappa = 0.0;
  double fitted_slope = 0.0;
  double fit_start = 0.0;
  double fit_end = 0.0;
};

/// int_0^L [U^2 e^{-theta x} + V^2 e^{-theta (L - x)}] dx by trapezoid.
double l_theta(std::span<const double> u, std::span<const double> v, double theta,
               const Grid& grid);
double l_theta(const ProfilePair& profiles, double theta, const Grid& grid);

/// Boundary part: C |a|^{g+2} e^{theta c |a|^g / (K g)} / (K (g+2)) + same in b.
double l_tilde_theta(double y_left, double y_right, const LyapunovParams& params);

/// Smallest sampled constant with |F|, |G| <= (C eps / 2)(|a| + |b|),
/// alpha, beta <= C and |d/dx alpha(x, U, V)|, |d/dx beta(x, U, V)| <= C along
/// the trajectory, times 1.1.
double estimate_c_tilde(const PerturbationCoefficients& coeffs, const SpaceTimeField& u,
                        const SpaceTimeField& v);

/// Growth exponent of the weighted functional: C eps (3 + e^{theta L}) / 2 + C - c theta.
double lyapunov_exponent(double theta, double c, double L, double c_tilde, double epsilon);

/// (1/L) ln(2c / (C eps L)); requires 0 < eps < 2c / (C L).
double optimal_theta(double c, double L, double c_tilde, double epsilon);

/// -min over theta of lyapunov_exponent.
double decay_rate(double c, double L, double c_tilde, double epsilon);

/// c delta^gamma / (K L gamma).
double kappa(double c, double delta, double gamma, double gain, double L);

struct InterpolationReport {
  double linf = 0.0;
  double l2 = 0.0;
  double lipschitz = 0.0;
  double margin_l2 = 0.0;       // (2/sqrt L) |u|_2 - |u|_inf
  double margin_cubic = 0.0;    // 8 |u|_2^2 |u'|_inf - |u|_inf^3
  double margin_zero_left = 0.0;  // 16 |u|_2^2 |u'|_inf - |u|_inf^3
  bool falsified = false;
};

/// Checks the L-infinity interpolation inequalities on the piecewise-linear
/// interpolant of the samples (norms computed exactly for that interpolant).
InterpolationReport linf_interpolation_check(std::span<const double> samples, const Grid& grid,
                                             bool zero_at_left);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Least-squares slope of ln(value) against t over [t_a, t_b].
DecayFit fit_decay(std::span<const double> times, std::span<const double> values, double t_a,
                   double t_b);

/// Forward-difference check of dL/dt <= -C_eps L along a series.
struct LyapunovDecayCheck {
  std::size_t steps = 0;
  std::size_t passed = 0;
  double worst_slack = 0.0;  // max of (dL/dt + C_eps L) / max L over the steps
  double pass_fraction() const { return steps ? static_cast<double>(passed) / steps : 1.0; }
};

/// A step passes when dL/dt <= -C_eps L_k + 0.05 C_eps L_k + 10 (h + dt) max L.
LyapunovDecayCheck check_lyapunov_decay(std::span<const double> times,
                                        std::span<const double> values, double c_eps, double h);

}  // namespace hypstab
