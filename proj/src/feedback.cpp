#include "hypstab/feedback.hpp"

#include <cmath>

#include "hypstab/core.hpp"

namespace hypstab {

FeedbackState::FeedbackState(double y0_, double gain_, double gamma_, double target_)
    : y0(y0_), gain(gain_), gamma(gamma_), target(target_) {
  if (!(gain > 0.0)) throw DomainError("feedback gain K must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("feedback exponent gamma must lie in (0, 1)");
}

double feedback_offset(const FeedbackState& state, double t) {
  if (state.y0 == 0.0) return 0.0;
  if (t <= 0.0) return state.y0;
  if (t >= extinction_time(state)) return 0.0;
  const double base = std::pow(std::abs(state.y0), state.gamma) - state.gamma * state.gain * t;
  if (base <= 0.0) return 0.0;
  return std::copysign(std::pow(base, 1.0 / state.gamma), state.y0);
}

double extinction_time(const FeedbackState& state) {
  if (state.y0 == 0.0) return 0.0;
  return std::pow(std::abs(state.y0), state.gamma) / (state.gamma * state.gain);
}

double feedback_rate(const FeedbackState& state, double t) {
  const double y = feedback_offset(state, t);
  if (y == 0.0) return 0.0;
  return -state.gain * y / std::pow(std::abs(y), state.gamma);
}

}  // namespace hypstab
