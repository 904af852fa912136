#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hypstab/config.hpp"
#include "hypstab/feedback.hpp"
#include "hypstab/lyapunov.hpp"
#include "hypstab/quasilinear.hpp"
#include "hypstab/spectral.hpp"
#include "hypstab/steady.hpp"

namespace hypstab {

inline constexpr const char* kVersion = "1.0.0";

/// Norm series on the output cadence.
struct NormSeries {
  std::vector<double> t, l2, linf, lyapunov, y_l, y_r;
};

struct Simulation {
  RunConfig config;
  ScaledSystem system;
  SteadyState steady;
  Evolution evolution;
  FeedbackState left, right;
  SolverBounds bounds;
  std::vector<std::string> failed_conditions;  // small-data conditions not met (reported only)
  double speed_sup = 0.0;
  double c_tilde = 0.0;
  double theta = 0.0;
  std::optional<double> c_eps;  // certified rate when eps lies in the positivity range
  NormSeries series;
  std::vector<std::size_t> output_levels;  // lattice levels behind each series row

  double epsilon() const { return system.epsilon; }
  const Grid& grid() const { return steady.grid; }
};

/// Steady state for the config's system.
SteadyState steady_for(const RunConfig& config, const ScaledSystem& system);

/// U0 = delta s(x), V0 = -delta s(x) with s(x) = cos(pi x / L) (or zero).
ProfilePair initial_perturbation(const RunConfig& config, const Grid& grid);

/// Full pipeline: steady state, reduction, windows, C~, theta*, norm series.
Simulation simulate(const RunConfig& config);

/// Default fit window start: latest extinction time + L / c.
double default_fit_start(const Simulation& sim);

struct RateResult {
  RateReport report;
  bool extinct = false;  // the series reaches exact zero inside the window
  std::optional<std::string> fit_error;
  double intercept = 0.0;
};

RateResult rates(const Simulation& sim);

struct SweepRow {
  double epsilon = 0.0;
  std::optional<double> c_eps;
  std::optional<double> slope;
  double window_start = 0.0;
  double sup_linf = 0.0;
  std::optional<double> spectral_lambda;
  double intercept = 0.0;
  std::string status;  // ok | extinct | failed: ...
};

struct SweepReport {
  std::vector<SweepRow> rows;  // eps descending
  std::string metadata;
};

/// One simulate + rates pipeline per eps, up to `workers` at a time. A failing
/// eps is recorded in its row and the others continue.
SweepReport sweep_epsilon(const RunConfig& config, std::vector<double> epsilons, int workers);

/// Spectral ladder over the config's eps list (c = speed floor, L = length).
std::vector<SpectralRow> spectral_ladder(const RunConfig& config, std::vector<double> epsilons,
                                         int workers);

// ---- output ---------------------------------------------------------------

/// "# key=value ..." header line describing the run.
std::string metadata_line(const RunConfig& config, double epsilon);

/// Shortest round-trip decimal form.
std::string format_number(double value);

void write_steady_csv(const std::filesystem::path& path, const RunConfig& config,
                      const SteadyState& steady);
void write_simulation_csv(const std::filesystem::path& path, const Simulation& sim);
/// Contents of the simulate CSV (metadata line, header, rows).
std::string simulation_csv(const Simulation& sim);
void write_snapshot_csv(const std::filesystem::path& path, const Simulation& sim,
                        double time);
void write_rates_csv(const std::filesystem::path& path, const Simulation& sim,
                     const RateResult& rates);
std::string format_rate_report(const RateResult& rates);
void write_sweep_csv(const std::filesystem::path& path, const SweepReport& report);
void write_spectral_csv(const std::filesystem::path& path, const RunConfig& config,
                        const std::vector<SpectralRow>& rows);

/// Runs `fn(i)` for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace hypstab
