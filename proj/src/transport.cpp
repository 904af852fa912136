#include "hypstab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypstab {

namespace {

double rk4_step(const CoefficientField& field, double r, double p, double dt) {
  const double k1 = field.speed(r, p);
  const double k2 = field.speed(r + 0.5 * dt, p + 0.5 * dt * k1);
  const double k3 = field.speed(r + 0.5 * dt, p + 0.5 * dt * k2);
  const double k4 = field.speed(r + dt, p + dt * k3);
  return p + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
}

constexpr double kBisectionTol = 1e-12;

}  // namespace

CoefficientField& CoefficientField::with_grid(const Grid& grid) {
  rk_step = grid.spacing() / (2.0 * speed_sup);
  return *this;
}

double CoefficientField::time_step() const {
  if (rk_step > 0.0) return rk_step;
  return length / (400.0 * speed_sup);
}

void TransportData::check_compatible() const {
  const double gap = std::abs(boundary(start_time) - initial(0.0));
  if (gap > 1e-12) {
    std::ostringstream msg;
    msg << "incompatible transport data: y_l(t0) - y0(0) = " << gap;
    throw DomainError(msg.str());
  }
}

SpaceTimeField::SpaceTimeField(std::vector<double> times_, std::size_t n_nodes_)
    : times(std::move(times_)), n_nodes(n_nodes_), values(times.size() * n_nodes_, 0.0) {}

SampledField::SampledField(std::shared_ptr<const SpaceTimeField> samples, const Grid& grid)
    : samples_(std::move(samples)), spacing_(grid.spacing()), last_node_(grid.size() - 1) {}

double SampledField::operator()(double t, double x) const {
  const auto& s = *samples_;
  const double xi = std::clamp(x / spacing_, 0.0, static_cast<double>(last_node_));
  const std::size_t i = std::min(static_cast<std::size_t>(xi), last_node_ - 1);
  const double wx = xi - static_cast<double>(i);

  if (s.levels() == 1) return (1.0 - wx) * s.at(0, i) + wx * s.at(0, i + 1);
  std::size_t k;
  double wt;
  if (t <= s.times.front()) {
    k = 0;
    wt = 0.0;
  } else if (t >= s.times.back()) {
    k = s.levels() - 2;
    wt = 1.0;
  } else {
    const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
    k = static_cast<std::size_t>(it - s.times.begin()) - 1;
    wt = (t - s.times[k]) / (s.times[k + 1] - s.times[k]);
  }
  const double lo = (1.0 - wx) * s.at(k, i) + wx * s.at(k, i + 1);
  const double hi = (1.0 - wx) * s.at(k + 1, i) + wx * s.at(k + 1, i + 1);
  return (1.0 - wt) * lo + wt * hi;
}

double interpolate(std::span<const double> samples, const Grid& grid, double x) {
  const std::size_t last = grid.size() - 1;
  const double xi = std::clamp(x / grid.spacing(), 0.0, static_cast<double>(last));
  const double nearest = std::round(xi);
  if (std::abs(xi - nearest) < 1e-9) return samples[static_cast<std::size_t>(nearest)];
  const std::size_t i = std::min(static_cast<std::size_t>(xi), last - 1);
  const double w = xi - static_cast<double>(i);
  return (1.0 - w) * samples[i] + w * samples[i + 1];
}

double flow(const CoefficientField& field, double s, double t, double x) {
  const double span = s - t;
  if (span == 0.0) return x;
  const int n = static_cast<int>(std::ceil(std::abs(span) / field.time_step()));
  const double dt = span / n;
  const double L = field.length;
  double p = x;
  for (int k = 0; k < n; ++k) {
    const double r = t + k * dt;
    p = rk4_step(field, r, p, dt);
    if (!(p >= -L && p <= 2.0 * L)) {
      std::ostringstream msg;
      msg << "characteristic through (t, x) = (" << t << ", " << x
          << ") left the bounding box [-L, 2L] near time " << r + dt;
      throw SolverError(msg.str());
    }
  }
  return p;
}

Backtrace trace_back(const CoefficientField& field, double t, double x, double t_stop) {
  Backtrace out{t, x, false, 0.0};
  if (t <= t_stop) return out;
  if (x <= 0.0) {
    out.position = 0.0;
    out.hit_boundary = true;
    return out;
  }
  const double span = t - t_stop;
  const int n = static_cast<int>(std::ceil(span / field.time_step()));
  const double h = span / n;

  double r = t;
  double p = x;
  double b_prev = field.source(r, p);
  double integral = 0.0;
  for (int k = 0; k < n; ++k) {
    const double r_next = (k == n - 1) ? t_stop : t - (k + 1) * h;
    const double step = r - r_next;
    const double p_next = rk4_step(field, r, p, -step);
    if (p_next < 0.0) {
      // Crossing inside this step: the partial RK4 step is monotone in its length.
      double lo = 0.0, hi = step;
      for (int it = 0; it < 200 && hi - lo > kBisectionTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rk4_step(field, r, p, -mid) >= 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double tau = 0.5 * (lo + hi);
      const double e = r - tau;
      integral += 0.5 * tau * (b_prev + field.source(e, 0.0));
      out.time = e;
      out.position = 0.0;
      out.hit_boundary = true;
      out.source_integral = integral;
      return out;
    }
    const double b_next = field.source(r_next, p_next);
    integral += 0.5 * step * (b_prev + b_next);
    b_prev = b_next;
    r = r_next;
    p = p_next;
  }
  out.time = t_stop;
  out.position = p;
  out.source_integral = integral;
  return out;
}

double entry_time(const CoefficientField& field, double t, double x, double t0) {
  const Backtrace tb = trace_back(field, t, x, t0);
  return tb.hit_boundary ? tb.time : t0;
}

double transport_solution_at(const CoefficientField& field, const TransportData& data, double t,
                             double x) {
  const Backtrace tb = trace_back(field, t, x, data.start_time);
  if (tb.hit_boundary) return data.boundary(tb.time) + tb.source_integral;
  return data.initial(tb.position) + tb.source_integral;
}

SpaceTimeField solve_transport(const CoefficientField& field, const TransportData& data,
                               const Grid& grid, std::span<const double> times) {
  data.check_compatible();
  if (times.empty()) throw DomainError("solve_transport: empty time lattice");
  if (std::abs(times.front() - data.start_time) > 1e-12 * std::max(1.0, std::abs(times.front()))) {
    throw DomainError("solve_transport: first lattice time must equal the data start time");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw DomainError("solve_transport: lattice times must be strictly increasing");
    }
  }

  SpaceTimeField out(std::vector<double>(times.begin(), times.end()), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.at(0, i) = data.initial(grid.node(i));

  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double t_prev = times[k];
    const double t_next = times[k + 1];
    const auto previous = out.slice(k);
    out.at(k + 1, 0) = data.boundary(t_next);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const Backtrace tb = trace_back(field, t_next, grid.node(i), t_prev);
      const double base = tb.hit_boundary ? data.boundary(tb.time)
                                          : interpolate(previous, grid, tb.position);
      out.at(k + 1, i) = base + tb.source_integral;
    }
  }
  return out;
}

}  // namespace hypstab
