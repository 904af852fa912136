#include <doctest.h>

#include <algorithm>

#include "hypstab/config.hpp"

using namespace hypstab;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "system": {"kind": "custom", "family": "linear_source", "length": 1.0},
    "feedback": {"gain": 1.0, "gamma": 0.5},
    "grid": {"n_cells": 50},
    "run": {"epsilon": 0.01, "final_time": 1.0, "delta": 0.01}
  })");
}

bool mentions(const ConfigError& e, const std::string& text) {
  return std::any_of(e.problems().begin(), e.problems().end(),
                     [&](const std::string& p) { return p.find(text) != std::string::npos; });
}

}  // namespace

TEST_CASE("minimal config") {
  const RunConfig cfg = validate_config(minimal());
  CHECK(cfg.system.family == Family::linear_source);
  CHECK(cfg.n_cells == 50);
  CHECK(*cfg.epsilon == 0.01);
  CHECK(cfg.picard_tol == 1e-10);
  const ScaledSystem s = build_system(cfg.system, cfg.epsilon);
  CHECK(s.epsilon == 0.01);
  CHECK(with_epsilon(cfg, 0.002).epsilon == 0.002);
}

TEST_CASE("gamma outside (0, 1)") {
  json doc = minimal();
  doc["feedback"]["gamma"] = 1.5;
  try {
    validate_config(doc);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "gamma"));
  }
}

TEST_CASE("empty document lists every required field") {
  try {
    validate_config(json::object());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    for (const char* field : {"system.kind", "feedback", "grid", "run"}) CHECK(mentions(e, field));
    CHECK(e.problems().size() >= 4);
  }
}

TEST_CASE("unknown keys and sections") {
  json doc = minimal();
  doc["grid"]["cells"] = 10;
  doc["extras"] = 1;
  try {
    validate_config(doc);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "cells"));
    CHECK(mentions(e, "extras"));
  }
}

TEST_CASE("custom systems need eps") {
  json doc = minimal();
  doc["run"].erase("epsilon");
  CHECK_THROWS_AS(validate_config(doc), ConfigError);
}

TEST_CASE("physical systems rescale to an explicit eps") {
  json doc = json::parse(R"({
    "system": {"kind": "saint_venant", "length": 1.5, "depth": 1.0, "velocity": 0.5,
               "friction": 0.004, "slope_amplitude": 0.006, "slope_shape": "cosine"},
    "feedback": {"gain": 1.0, "gamma": 0.5},
    "grid": {"n_cells": 50},
    "run": {"final_time": 1.0, "delta": 0.01}
  })");
  const RunConfig cfg = validate_config(doc);
  CHECK(build_system(cfg.system, std::nullopt).epsilon == doctest::Approx(0.01));
  const ScaledSystem s = build_system(cfg.system, 0.001);
  CHECK(s.epsilon == doctest::Approx(0.001));
}

TEST_CASE("shipped configs load") {
  for (const char* name : {"extinction.json", "saint_venant.json", "saint_venant_eps0.json",
                           "savage_hutter.json", "linear_source.json", "spectral.json"}) {
    CHECK_NOTHROW(load_config(std::string(HYPSTAB_CONFIG_DIR) + "/" + name));
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
