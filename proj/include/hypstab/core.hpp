#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypstab {

/// Raised when an input violates a documented precondition.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by iterative solvers (non-convergence, admissible-set exits).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform grid of n_cells + 1 nodes on [0, L].
class Grid {
 public:
  Grid(double length, int n_cells);

  double length() const { return length_; }
  int n_cells() const { return n_cells_; }
  std::size_t size() const { return nodes_.size(); }
  double spacing() const { return spacing_; }
  double node(std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }

 private:
  double length_;
  int n_cells_;
  double spacing_;
  std::vector<double> nodes_;
};

using StateFunction = std::function<double(double u, double v)>;
using SourceFunction = std::function<double(double x, double u, double v)>;

/// Optional closed-form first derivatives. Missing entries fall back to
/// central differences.
struct SystemDerivatives {
  StateFunction lambda_u, lambda_v, mu_u, mu_v;
  SourceFunction f_u, f_v, g_u, g_v;
};

/// Diagonal 2x2 balance law
///   u_t + lambda(u,v) u_x = eps f(x,u,v),   v_t - mu(u,v) v_x = eps g(x,u,v).
/// The sources carry x so that bottom-slope terms can be represented.
struct SystemSpec {
  StateFunction lambda;
  StateFunction mu;
  SourceFunction f;
  SourceFunction g;
  double u_ref = 0.0;
  double v_ref = 0.0;
  double radius = 1.0;       // R
  double speed_floor = 1.0;  // c
  SystemDerivatives derivatives;

  double lambda_u(double u, double v) const;
  double lambda_v(double u, double v) const;
  double mu_u(double u, double v) const;
  double mu_v(double u, double v) const;
  double f_u(double x, double u, double v) const;
  double f_v(double x, double u, double v) const;
  double g_u(double x, double u, double v) const;
  double g_v(double x, double u, double v) const;
};

/// Samples the closed 2R-ball around the reference state and throws
/// DomainError if lambda or mu drops below the speed floor anywhere.
void check_system(const SystemSpec& spec, int samples = 10000);

/// Largest of lambda, mu over a deterministic sample of the closed ball of
/// the given radius around the reference state.
double sup_speed(const SystemSpec& spec, double ball_radius, int samples = 4096);

/// Deterministic points of the closed disc of radius r centred at (u0, v0):
/// a polar lattice that includes the centre and the boundary circle.
std::vector<std::pair<double, double>> disc_samples(double u0, double v0, double r,
                                                    int samples);

/// Pair of sampled profiles aligned with a grid's nodes.
struct ProfilePair {
  std::vector<double> u;
  std::vector<double> v;

  static ProfilePair constant(const Grid& grid, double u_value, double v_value);
  void check(const Grid& grid) const;
};

/// Composite trapezoid rule over the grid.
double quadrature(std::span<const double> samples, const Grid& grid);

/// Running trapezoid integral from node 0: result[i] = int_0^{x_i}.
std::vector<double> cumulative_quadrature(std::span<const double> samples, const Grid& grid);

/// Central-difference derivative with step 1e-6 (1 + |z|).
double central_difference(const std::function<double(double)>& fn, double z);

double max_abs(std::span<const double> values);

}  // namespace hypstab
