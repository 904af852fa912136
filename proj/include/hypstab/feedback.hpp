#pragma once

namespace hypstab {

/// Boundary ODE  dY/dt = -K Y / |Y|^gamma  for the shifted boundary value
/// Y = y - target. Evaluated in closed form; the right-hand side is not
/// Lipschitz at Y = 0, so the trajectory is continued by zero after extinction.
struct FeedbackState {
  double y0 = 0.0;      // y(0) - target
  double gain = 1.0;    // K > 0
  double gamma = 0.5;   // exponent in (0, 1)
  double target = 0.0;  // u_ref or v_ref

  FeedbackState() = default;
  FeedbackState(double y0, double gain, double gamma, double target = 0.0);
};

/// Y(t) = sign(Y0) max(|Y0|^gamma - gamma K t, 0)^(1/gamma).
double feedback_offset(const FeedbackState& state, double t);

/// |Y0|^gamma / (gamma K).
double extinction_time(const FeedbackState& state);

/// dY/dt of the closed-form trajectory (zero after extinction).
double feedback_rate(const FeedbackState& state, double t);

/// Boundary value y(t) = target + Y(t).
inline double feedback_value(const FeedbackState& state, double t) {
  return state.target + feedback_offset(state, t);
}

}  // namespace hypstab
