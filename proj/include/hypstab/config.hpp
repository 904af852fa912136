#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypstab/core.hpp"
#include "hypstab/models.hpp"

namespace hypstab {

/// Raised by validate_config; lists every violated constraint.
class ConfigError : public DomainError {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class SystemKind { saint_venant, savage_hutter, custom };
enum class Family { constant, linear_source, arctan_speed };

std::string kind_name(SystemKind kind);
std::string family_name(Family family);

struct SystemConfig {
  SystemKind kind = SystemKind::custom;
  Family family = Family::constant;
  double length = 1.0;
  SaintVenantParams saint_venant;
  SavageHutterParams savage_hutter;
  ConstantParams constant;
  LinearSourceParams linear_source;
  ArctanSpeedParams arctan_speed;
};

enum class InitialShape { cosine, zero };

struct RunConfig {
  SystemConfig system;
  // feedback
  double gain = 1.0;   // K
  double gamma = 0.5;
  // grid
  int n_cells = 200;
  // run
  std::optional<double> epsilon;  // required for custom systems; rescales physical ones
  double final_time = 1.0;
  double delta = 0.01;
  InitialShape initial_shape = InitialShape::cosine;
  double picard_tol = 1e-10;
  int picard_max_iter = 50;
  double steady_tol = 1e-12;
  int steady_max_iter = 200;
  std::uint64_t seed = 1;
  std::vector<double> epsilons;  // sweep / spectral ladder
  int spectral_cells = 256;
  std::optional<double> fit_start;
  // output
  std::string out_dir = "out";
  double cadence = 0.0;  // 0: every lattice level
  std::vector<double> snapshots;
};

/// Checks a parsed document and applies defaults. Unknown keys are errors.
RunConfig validate_config(const nlohmann::json& document);

/// Reads and validates a config file.
RunConfig load_config(const std::string& path);

/// Builds the diagonal system. For physical models the amplitude split
/// fixes eps; an explicit eps rescales the source parameters to match.
ScaledSystem build_system(const SystemConfig& system, std::optional<double> epsilon);

/// Same config with eps replaced.
RunConfig with_epsilon(const RunConfig& config, double epsilon);

}  // namespace hypstab
