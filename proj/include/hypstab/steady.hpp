#pragma once

#include <vector>

#include "hypstab/core.hpp"

namespace hypstab {

/// Stationary profiles anchored at u_ref on the left and v_ref on the right.
struct SteadyState {
  double epsilon = 0.0;
  Grid grid{1.0, 1};
  ProfilePair profiles;
  int iterations = 0;
  double residual = 0.0;            // last max-norm Picard increment
  std::vector<double> increments;   // increment history, one per iteration
};

/// One application of
///   u -> u_ref + eps int_0^x f/lambda,   v -> v_ref + eps int_x^L g/mu
/// with cumulative trapezoid sums. Throws DomainError if the input leaves
/// the open R-ball around the reference state.
ProfilePair picard_map(const ProfilePair& profiles, double epsilon, const SystemSpec& spec,
                       const Grid& grid);

/// Iterates picard_map from the constant reference profiles until the
/// max-norm change drops to tol.
SteadyState solve_steady(const SystemSpec& spec, double epsilon, const Grid& grid,
                         double tol = 1e-12, int max_iter = 200);

/// Largest pointwise Euclidean distance of the profiles from (u_ref, v_ref).
double ball_distance(const ProfilePair& profiles, const SystemSpec& spec);

/// x-derivatives of the steady profiles taken from the stationary ODE itself:
/// (eps f / lambda, -eps g / mu) at every node.
ProfilePair steady_slopes(const SteadyState& steady, const SystemSpec& spec);

/// Max over interior nodes of |lambda D u - eps f| and |-mu D v - eps g|,
/// D the centred difference.
double steady_residual(const SteadyState& steady, const SystemSpec& spec);

}  // namespace hypstab
