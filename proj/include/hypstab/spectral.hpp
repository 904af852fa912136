#pragma once

#include <vector>

#include "hypstab/core.hpp"

namespace hypstab {

/// Real eigen-data of the coupled pair
///   lambda u + c u' = eps v,   lambda v - c v' = eps u,   u(0) = v(L) = 0.
struct EigenPair {
  double epsilon = 0.0;
  double c = 1.0;
  double length = 1.0;
  double alpha = 0.0;    // spatial exponent (1/length)
  double lambda = 0.0;   // eigenvalue (1/time)
  double mu_coef = 0.0;  // (lambda + c alpha) / eps
  int sign = -1;         // branch: mu_coef = sign e^{-alpha L}
  double a_coef = 0.0;   // = -mu_coef d_coef
  double d_coef = 1.0;
};

/// Unique positive root of sinh(L alpha) / (L alpha) = c / (L eps) for
/// 0 < eps < c / L, by bisection carried to full precision.
double solve_alpha(double c, double L, double epsilon);

EigenPair eigen_pair(double c, double L, double epsilon);

/// u = A e^{alpha x} + mu D e^{-alpha x},  v = mu A e^{alpha x} + D e^{-alpha x}.
ProfilePair eigenfunction(const EigenPair& pair, const Grid& grid);

/// One step of the CFL-1 shift with zero inflow on both components followed
/// by the explicit coupling (I + eps dt swap). The state holds u at nodes
/// 1..N (u_0 = 0) followed by v at nodes 0..N-1 (v_N = 0).
class ShiftPropagator {
 public:
  ShiftPropagator(int n, double epsilon, double c = 1.0, double L = 1.0);

  int cells() const { return n_; }
  std::size_t dimension() const { return 2 * static_cast<std::size_t>(n_); }
  double epsilon() const { return epsilon_; }
  double step() const { return step_; }
  double c() const { return c_; }
  double length() const { return length_; }

  /// out = P in; both of size dimension().
  void apply(const double* in, double* out) const;
  /// out = P^T in.
  void apply_transpose(const double* in, double* out) const;
  /// Row-major dense matrix of P.
  std::vector<double> dense() const;

 private:
  int n_;
  double epsilon_;
  double c_;
  double length_;
  double step_;
};

/// ||P^n||_2 for n = 0..n_steps by power iteration on (P^n)^T P^n, warm
/// started from the previous singular vector, to relative tolerance.
std::vector<double> propagator_norms(const ShiftPropagator& prop, int n_steps, double tol = 1e-8);

/// Largest modulus among the eigenvalues of P.
double dominant_eigenvalue_modulus(const ShiftPropagator& prop);

struct TailFit {
  double rate = 0.0;       // -slope of ln ||P^n|| against t = n dt
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Fit over t in [t_a, t_b] (non-positive norms end the usable tail).
TailFit fit_tail_rate(const std::vector<double>& norms, double dt, double t_a, double t_b);

/// Smallest M with ||P^n|| <= M min(1, e^{-r t} / eps) on the sequence.
double semigroup_constant(const std::vector<double>& norms, double dt, double rate,
                          double epsilon);

struct SpectralRow {
  double epsilon = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  double rate_ratio = 0.0;   // fitted_rate / ((c/L) ln(1/eps))
  double fitted_rate = 0.0;
  double sup_norm = 0.0;     // sup_n ||P^n||
  double semigroup_constant = 0.0;
};

/// Eigen-data plus propagator norms over 8 transit times with the tail fitted
/// on [3 L/c, 8 L/c).
SpectralRow spectral_row(double c, double L, double epsilon, int n_cells);

}  // namespace hypstab
