#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypstab/core.hpp"
#include "hypstab/feedback.hpp"
#include "hypstab/steady.hpp"
#include "hypstab/transport.hpp"

namespace hypstab {

/// Coefficients of the perturbation system around a steady state,
///   U_t + alpha(x,U,V) U_x = F(x,U,V),   V_t - beta(x,U,V) V_x = G(x,U,V),
/// with F(x,0,0) = G(x,0,0) = 0. Positions are addressed by grid node.
class PerturbationCoefficients {
 public:
  PerturbationCoefficients(const SystemSpec& spec, const SteadyState& steady);

  double alpha(std::size_t node, double a, double b) const;
  double beta(std::size_t node, double a, double b) const;
  double source_u(std::size_t node, double a, double b) const;  // F
  double source_v(std::size_t node, double a, double b) const;  // G

  const SystemSpec& spec() const { return spec_; }
  const SteadyState& steady() const { return steady_; }
  const Grid& grid() const { return steady_.grid; }
  double epsilon() const { return steady_.epsilon; }
  const ProfilePair& slopes() const { return slopes_; }

 private:
  SystemSpec spec_;
  SteadyState steady_;
  ProfilePair slopes_;
};

PerturbationCoefficients frozen_coefficients(const SystemSpec& spec, const SteadyState& steady);

/// (U, V) on a window lattice with the bounds that define the admissible set:
/// |U|, |V| <= A and difference quotients in x and t <= B (1 + 4h).
struct TrajectoryField {
  SpaceTimeField u;
  SpaceTimeField v;
  double amplitude = 0.0;  // A
  double lipschitz = 0.0;  // B

  /// Empty when the field is admissible, otherwise a description of the
  /// first violated bound.
  std::optional<std::string> admissibility_violation(const Grid& grid) const;
  double sup_norm() const;
};

/// Constants controlling the invariance of the admissible set.
struct SolverBounds {
  double initial_sup = 0.0;        // I0
  double initial_lipschitz = 0.0;  // I1
  double source_derivative = 0.0;  // P
  double speed_derivative = 0.0;   // M
  double amplitude = 0.0;          // A
  double lipschitz = 0.0;          // B

  /// Strict small-data conditions on (I0, I1) for the configured A, B.
  /// Returns the names of the conditions that fail (empty when all hold).
  std::vector<std::string> failed_conditions(double c, double L, double gain,
                                             double gamma) const;
};

/// Measures I0, I1, P, M for the given initial perturbation and derives the
/// default A = 2 (I0 + eps |(f,g)| L / c) and B = 2 max(rhs of the Lipschitz
/// invariance conditions at B = 0).
SolverBounds default_bounds(const PerturbationCoefficients& coeffs, const ProfilePair& initial,
                            double gain, double gamma);

/// Initial slice and boundary feedback for one window.
struct WindowData {
  std::vector<double> initial_u;
  std::vector<double> initial_v;
  FeedbackState left;   // U(t, 0) = Y_l(t)
  FeedbackState right;  // V(t, L) = Y_r(t)
};

struct StepSettings {
  double speed_sup = 1.0;  // fixes the characteristic RK4 step h / (2 sup)
};

/// One application of the fixed-point map: solves the two decoupled transport
/// problems with coefficients frozen along the guess. The V-equation is solved
/// after the reflection x -> L - x. Throws SolverError if the result leaves the
/// admissible set.
TrajectoryField picard_step(const TrajectoryField& guess, const PerturbationCoefficients& coeffs,
                            const WindowData& data, const StepSettings& settings);

struct WindowResult {
  TrajectoryField field;
  int iterations = 0;
  std::vector<double> increments;
  double max_contraction_ratio = 0.0;  // over increments above the noise floor
};

/// Picard iteration on one window starting from the constant-in-time
/// extension of the initial slice. Converged when the max-norm change is at
/// most tol times the window's sup norm.
WindowResult solve_window(const WindowData& data, const PerturbationCoefficients& coeffs,
                          std::span<const double> times, double amplitude, double lipschitz,
                          const StepSettings& settings, double tol = 1e-10, int max_iter = 50);

struct EvolveOptions {
  double final_time = 1.0;
  double picard_tol = 1e-10;
  int picard_max_iter = 50;
  double amplitude = 0.0;
  double lipschitz = 0.0;
  double speed_sup = 1.0;    // sup of the speeds over the admissible states
  int steps_per_window = 0;  // 0: window L/(4 sup), step h / sup
};

/// Whole-run trajectory on the global time lattice.
struct Evolution {
  SpaceTimeField u;
  SpaceTimeField v;
  std::vector<std::size_t> window_starts;  // lattice index of each window's first level
  std::vector<int> window_iterations;
  double max_contraction_ratio = 0.0;
};

/// Solves successive windows; the last level of window k is the first level
/// of window k+1. Errors are rethrown with the window index.
Evolution evolve(const PerturbationCoefficients& coeffs, const ProfilePair& initial,
                 const FeedbackState& left, const FeedbackState& right,
                 const EvolveOptions& options);

}  // namespace hypstab
