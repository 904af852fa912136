#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hypstab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::filesystem::path config_dir;  // shipped example configs
  int workers = 4;
};

/// Runs the listed criteria (all ten when empty) in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::vector<int>& only = {});

/// "PASS [n] name: detail (t s)" or "FAIL ...".
std::string format_criterion(const CriterionResult& result);

/// Shipped *.json configs in the directory, sorted by name.
std::vector<std::filesystem::path> shipped_configs(const std::filesystem::path& dir);

}  // namespace hypstab
