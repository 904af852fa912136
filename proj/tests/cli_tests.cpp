#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(HYPSTAB_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path(HYPSTAB_WORK_DIR) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string config(const std::string& name) {
  return std::string(HYPSTAB_CONFIG_DIR) + "/" + name;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("malformed config exits 1 without output") {
  const fs::path dir = fresh_dir("bad");
  const fs::path cfg = dir / "bad.json";
  std::ofstream(cfg) << R"({"system": {"kind": "custom"}, "feedback": {"gamma": 1.5}})";
  const fs::path out = dir / "out";
  CHECK(run("simulate --config " + cfg.string() + " --out " + out.string()) == 1);
  CHECK_FALSE(fs::exists(out));
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(run("steady --config " + (dir / "broken.json").string() + " --out " + out.string()) == 1);
  CHECK(run("simulate") != 0);
}

TEST_CASE("simulate without sources reaches zero in finite time") {
  const fs::path out = fresh_dir("eps0");
  REQUIRE(run("simulate --config " + config("saint_venant_eps0.json") + " --out " + out.string()) ==
          0);
  const auto rows = read_csv(out / "simulate.csv");
  REQUIRE(rows.size() > 2);
  const auto& header = rows[0];
  std::size_t t_col = 0, linf_col = 0;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == "t") t_col = j;
    if (header[j] == "linf_norm") linf_col = j;
  }
  REQUIRE(header[linf_col] == "linf_norm");
  const double h = 1.5 / 300;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (std::stod(rows[k][t_col]) >= 1.2) CHECK(std::stod(rows[k][linf_col]) <= 10 * h);
  }
}

TEST_CASE("steady writes a csv with a metadata header") {
  const fs::path out = fresh_dir("steady");
  REQUIRE(run("steady --config " + config("saint_venant.json") + " --out " + out.string()) == 0);
  std::ifstream in(out / "steady.csv");
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("# version=1.0.0", 0) == 0);
}

TEST_CASE("check runs selected criteria") {
  const fs::path out = fresh_dir("check");
  CHECK(run("check --config " + config("linear_source.json") + " --criteria 1,9 --out " +
            out.string()) == 0);
  CHECK(fs::exists(out / "acceptance.txt"));
  CHECK(run("check --config " + config("linear_source.json") + " --criteria 11") == 1);
}
