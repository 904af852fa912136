#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "hypstab/core.hpp"

namespace hypstab {

using SpaceTimeFunction = std::function<double(double t, double x)>;

/// Coefficients of  y_t + a(t,x) y_x = b(t,x)  on [0,L] with a >= c > 0.
struct CoefficientField {
  SpaceTimeFunction speed;   // a
  SpaceTimeFunction source;  // b
  double speed_floor = 1.0;  // c
  double speed_sup = 1.0;    // sup a, sets the RK4 step
  double length = 1.0;       // L
  double rk_step = 0.0;      // characteristic time step; 0 selects L / (400 sup a)

  /// Sets rk_step = h / (2 sup a) for the given grid.
  CoefficientField& with_grid(const Grid& grid);
  double time_step() const;
};

/// Initial profile at start_time and left boundary trace y_l(t).
struct TransportData {
  std::function<double(double x)> initial;
  std::function<double(double t)> boundary;
  double start_time = 0.0;

  /// Throws DomainError unless |y_l(t0) - y0(0)| <= 1e-12.
  void check_compatible() const;
};

/// Values on a time lattice x grid nodes, row-major by time level.
struct SpaceTimeField {
  std::vector<double> times;
  std::size_t n_nodes = 0;
  std::vector<double> values;

  SpaceTimeField() = default;
  SpaceTimeField(std::vector<double> times_, std::size_t n_nodes_);

  std::size_t levels() const { return times.size(); }
  double& at(std::size_t k, std::size_t i) { return values[k * n_nodes + i]; }
  double at(std::size_t k, std::size_t i) const { return values[k * n_nodes + i]; }
  std::span<double> slice(std::size_t k) { return {values.data() + k * n_nodes, n_nodes}; }
  std::span<const double> slice(std::size_t k) const {
    return {values.data() + k * n_nodes, n_nodes};
  }
};

/// Bilinear interpolant of lattice samples; x is clamped to [0, L] and t to
/// the lattice time span.
class SampledField {
 public:
  SampledField(std::shared_ptr<const SpaceTimeField> samples, const Grid& grid);
  double operator()(double t, double x) const;

 private:
  std::shared_ptr<const SpaceTimeField> samples_;
  double spacing_;
  std::size_t last_node_;
};

/// Linear interpolation of nodal samples at position x (clamped to [0, L]).
double interpolate(std::span<const double> samples, const Grid& grid, double x);

/// Characteristic through (t, x) evaluated at time s (classical RK4).
/// Throws SolverError if the path leaves [-L, 2L].
double flow(const CoefficientField& field, double s, double t, double x);

/// Result of following the characteristic through (t, x) backwards.
struct Backtrace {
  double time = 0.0;         // where the trace stopped
  double position = 0.0;     // phi(time, t, x)
  bool hit_boundary = false; // stopped on x = 0 rather than at the stop time
  double source_integral = 0.0;  // int_time^t b(r, phi(r,t,x)) dr (trapezoid)
};

/// Follows the characteristic backwards from (t, x) until time t_stop or
/// until it reaches x = 0, whichever comes first. The crossing time is
/// located by bisection to 1e-12.
Backtrace trace_back(const CoefficientField& field, double t, double x, double t_stop);

/// e(t,x): 0 if the backward characteristic reaches the initial line,
/// otherwise the time at which it crosses x = 0.
double entry_time(const CoefficientField& field, double t, double x, double t0 = 0.0);

/// Explicit characteristic formula at a single point.
double transport_solution_at(const CoefficientField& field, const TransportData& data, double t,
                             double x);

/// Solution on the lattice times x grid. Level k+1 is obtained from level k
/// by the characteristic formula over [t_k, t_{k+1}] with linear
/// interpolation of level k; times[0] must equal data.start_time.
SpaceTimeField solve_transport(const CoefficientField& field, const TransportData& data,
                               const Grid& grid, std::span<const double> times);

}  // namespace hypstab
