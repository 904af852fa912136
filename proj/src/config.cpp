#include "hypstab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hypstab {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items) {
  std::ostringstream out;
  out << "invalid configuration:";
  for (const auto& item : items) out << "\n  - " << item;
  return out.str();
}

// One config section: typed lookups that record problems instead of throwing.
class Section {
 public:
  Section(const json& root, const std::string& name, bool required,
          std::vector<std::string>& problems)
      : name_(name), problems_(problems) {
    if (!root.is_object() || !root.contains(name)) {
      if (required) problems_.push_back("missing required section '" + name + "'");
      return;
    }
    const json& node = root.at(name);
    if (!node.is_object()) {
      problems_.push_back("section '" + name + "' must be an object");
      return;
    }
    node_ = &node;
  }

  bool present() const { return node_ != nullptr; }
  bool has(const std::string& key) const { return node_ && node_->contains(key); }

  std::optional<double> number(const std::string& key, bool required) {
    const json* v = lookup(key, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      problems_.push_back(path(key) + " must be a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<long long> integer(const std::string& key, bool required) {
    const json* v = lookup(key, required);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      problems_.push_back(path(key) + " must be an integer");
      return std::nullopt;
    }
    return v->get<long long>();
  }

  std::optional<std::string> string(const std::string& key, bool required) {
    const json* v = lookup(key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      problems_.push_back(path(key) + " must be a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    const json* v = lookup(key, false);
    if (!v) return std::nullopt;
    bool ok = v->is_array();
    if (ok) {
      for (const auto& item : *v) ok = ok && item.is_number();
    }
    if (!ok) {
      problems_.push_back(path(key) + " must be an array of numbers");
      return std::nullopt;
    }
    return v->get<std::vector<double>>();
  }

  void require(bool condition, const std::string& key, const std::string& message) {
    if (!condition) problems_.push_back(path(key) + " " + message);
  }

  /// Reports keys outside the accepted set.
  void reject_unknown(const std::set<std::string>& known) {
    if (!node_) return;
    for (const auto& [key, value] : node_->items()) {
      if (!known.count(key)) problems_.push_back("unknown key " + path(key));
    }
  }

  std::string path(const std::string& key) const { return name_ + "." + key; }

 private:
  const json* lookup(const std::string& key, bool required) {
    if (node_ && node_->contains(key)) return &node_->at(key);
    if (required) problems_.push_back("missing required field " + path(key));
    return nullptr;
  }

  std::string name_;
  std::vector<std::string>& problems_;
  const json* node_ = nullptr;
};

template <class T>
void assign(std::optional<T> value, T& target) {
  if (value) target = *value;
}

void parse_system(Section& s, SystemConfig& sys, std::vector<std::string>& problems) {
  std::set<std::string> known{"kind", "length"};
  const auto kind = s.string("kind", true);
  const auto length = s.number("length", true);
  if (length) {
    s.require(*length > 0.0, "length", "must be positive");
    sys.length = *length;
  }
  if (!kind) {
    s.reject_unknown({"kind", "length", "family", "gravity", "depth", "velocity", "friction",
                      "slope_amplitude", "slope_shape", "angle_amplitude", "angle_shape",
                      "radius", "speed", "f0", "g0", "a11", "a12", "a21", "a22"});
    return;
  }
  auto shape = [&](const std::string& key, Shape& target) {
    if (auto name = s.string(key, false)) {
      try {
        target = parse_shape(*name);
      } catch (const DomainError& e) {
        problems.push_back(s.path(key) + ": " + e.what());
      }
    }
  };
  if (*kind == "saint_venant") {
    sys.kind = SystemKind::saint_venant;
    auto& p = sys.saint_venant;
    known.insert({"gravity", "depth", "velocity", "friction", "slope_amplitude", "slope_shape",
                  "radius"});
    assign(s.number("gravity", false), p.gravity);
    assign(s.number("depth", false), p.depth);
    assign(s.number("velocity", false), p.velocity);
    assign(s.number("friction", false), p.friction);
    assign(s.number("slope_amplitude", false), p.slope_amplitude);
    assign(s.number("radius", false), p.radius);
    shape("slope_shape", p.slope_shape);
    s.require(p.gravity > 0.0, "gravity", "must be positive");
    s.require(p.depth > 0.0, "depth", "must be positive");
    s.require(p.friction >= 0.0, "friction", "must be nonnegative");
    s.require(p.slope_amplitude >= 0.0, "slope_amplitude", "must be nonnegative");
    s.require(p.radius >= 0.0, "radius", "must be nonnegative (0 selects the default)");
    p.length = sys.length;
  } else if (*kind == "savage_hutter") {
    sys.kind = SystemKind::savage_hutter;
    auto& p = sys.savage_hutter;
    known.insert({"gravity", "depth", "velocity", "angle_amplitude", "angle_shape", "radius"});
    assign(s.number("gravity", false), p.gravity);
    assign(s.number("depth", false), p.depth);
    assign(s.number("velocity", false), p.velocity);
    assign(s.number("angle_amplitude", false), p.angle_amplitude);
    assign(s.number("radius", false), p.radius);
    shape("angle_shape", p.angle_shape);
    s.require(p.gravity > 0.0, "gravity", "must be positive");
    s.require(p.depth > 0.0, "depth", "must be positive");
    s.require(p.angle_amplitude >= 0.0 && p.angle_amplitude < 0.5, "angle_amplitude",
              "must lie in [0, 0.5) radians");
    s.require(p.radius >= 0.0, "radius", "must be nonnegative (0 selects the default)");
    p.length = sys.length;
  } else if (*kind == "custom") {
    sys.kind = SystemKind::custom;
    known.insert("family");
    const auto family = s.string("family", true);
    if (!family) {
      s.reject_unknown(known);
      return;
    }
    if (*family == "constant") {
      sys.family = Family::constant;
      known.insert({"speed", "f0", "g0", "radius"});
      auto& p = sys.constant;
      assign(s.number("speed", false), p.speed);
      assign(s.number("f0", false), p.f0);
      assign(s.number("g0", false), p.g0);
      assign(s.number("radius", false), p.radius);
      s.require(p.speed > 0.0, "speed", "must be positive");
      s.require(p.radius > 0.0, "radius", "must be positive");
    } else if (*family == "linear_source") {
      sys.family = Family::linear_source;
      known.insert({"speed", "a11", "a12", "a21", "a22", "radius"});
      auto& p = sys.linear_source;
      assign(s.number("speed", false), p.speed);
      assign(s.number("a11", false), p.a11);
      assign(s.number("a12", false), p.a12);
      assign(s.number("a21", false), p.a21);
      assign(s.number("a22", false), p.a22);
      assign(s.number("radius", false), p.radius);
      s.require(p.speed > 0.0, "speed", "must be positive");
      s.require(p.radius > 0.0, "radius", "must be positive");
    } else if (*family == "arctan_speed") {
      sys.family = Family::arctan_speed;
      known.insert("radius");
      assign(s.number("radius", false), sys.arctan_speed.radius);
      s.require(sys.arctan_speed.radius > 0.0, "radius", "must be positive");
    } else {
      problems.push_back("system.family must be one of constant, linear_source, arctan_speed (got '" +
                         *family + "')");
    }
  } else {
    problems.push_back("system.kind must be one of saint_venant, savage_hutter, custom (got '" +
                       *kind + "')");
    return;
  }
  s.reject_unknown(known);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : DomainError(join(problems)), problems_(std::move(problems)) {}

std::string kind_name(SystemKind kind) {
  switch (kind) {
    case SystemKind::saint_venant: return "saint_venant";
    case SystemKind::savage_hutter: return "savage_hutter";
    case SystemKind::custom: return "custom";
  }
  return "custom";
}

std::string family_name(Family family) {
  switch (family) {
    case Family::constant: return "constant";
    case Family::linear_source: return "linear_source";
    case Family::arctan_speed: return "arctan_speed";
  }
  return "constant";
}

RunConfig validate_config(const json& doc) {
  std::vector<std::string> problems;
  RunConfig cfg;
  if (!doc.is_object()) {
    throw ConfigError({"configuration must be a JSON object"});
  }
  for (const auto& [key, value] : doc.items()) {
    static const std::set<std::string> sections{"system", "feedback", "grid", "run", "output"};
    if (!sections.count(key)) problems.push_back("unknown section '" + key + "'");
  }

  Section system(doc, "system", true, problems);
  if (system.present()) {
    parse_system(system, cfg.system, problems);
  } else {
    problems.push_back("missing required field system.kind");
    problems.push_back("missing required field system.length");
  }

  Section feedback(doc, "feedback", true, problems);
  {
    const auto gain = feedback.number("gain", true);
    const auto gamma = feedback.number("gamma", true);
    if (gain) {
      feedback.require(*gain > 0.0, "gain", "must be positive (K > 0)");
      cfg.gain = *gain;
    }
    if (gamma) {
      feedback.require(*gamma > 0.0 && *gamma < 1.0, "gamma",
                       "must lie strictly inside (0,1), got " + std::to_string(*gamma));
      cfg.gamma = *gamma;
    }
    feedback.reject_unknown({"gain", "gamma"});
  }

  Section grid(doc, "grid", true, problems);
  {
    const auto n = grid.integer("n_cells", true);
    if (n) {
      grid.require(*n > 0, "n_cells", "must be a positive integer");
      grid.require(*n <= 100000, "n_cells", "must be at most 100000");
      cfg.n_cells = static_cast<int>(*n);
    }
    grid.reject_unknown({"n_cells"});
  }

  Section run(doc, "run", true, problems);
  {
    cfg.epsilon = run.number("epsilon", false);
    if (cfg.epsilon) run.require(*cfg.epsilon >= 0.0, "epsilon", "must be nonnegative");
    if (!cfg.epsilon && cfg.system.kind == SystemKind::custom && system.present()) {
      problems.push_back("missing required field run.epsilon (required for custom systems)");
    }
    const auto T = run.number("final_time", true);
    if (T) {
      run.require(*T > 0.0, "final_time", "must be positive");
      cfg.final_time = *T;
    }
    const auto delta = run.number("delta", true);
    if (delta) {
      run.require(*delta >= 0.0, "delta", "must be nonnegative");
      cfg.delta = *delta;
    }
    if (auto shape = run.string("initial_shape", false)) {
      if (*shape == "cosine") {
        cfg.initial_shape = InitialShape::cosine;
      } else if (*shape == "zero") {
        cfg.initial_shape = InitialShape::zero;
      } else {
        problems.push_back("run.initial_shape must be cosine or zero (got '" + *shape + "')");
      }
    }
    assign(run.number("picard_tol", false), cfg.picard_tol);
    run.require(cfg.picard_tol > 0.0, "picard_tol", "must be positive");
    if (auto it = run.integer("picard_max_iter", false)) cfg.picard_max_iter = static_cast<int>(*it);
    run.require(cfg.picard_max_iter > 0, "picard_max_iter", "must be positive");
    assign(run.number("steady_tol", false), cfg.steady_tol);
    run.require(cfg.steady_tol > 0.0, "steady_tol", "must be positive");
    if (auto it = run.integer("steady_max_iter", false)) cfg.steady_max_iter = static_cast<int>(*it);
    run.require(cfg.steady_max_iter > 0, "steady_max_iter", "must be positive");
    if (auto seed = run.integer("seed", false)) {
      run.require(*seed >= 0, "seed", "must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(*seed);
    }
    if (auto list = run.numbers("epsilons")) {
      for (double e : *list) run.require(e >= 0.0, "epsilons", "entries must be nonnegative");
      cfg.epsilons = *list;
    }
    if (auto n = run.integer("spectral_cells", false)) {
      run.require(*n >= 2, "spectral_cells", "must be at least 2");
      cfg.spectral_cells = static_cast<int>(*n);
    }
    cfg.fit_start = run.number("fit_start", false);
    if (cfg.fit_start) run.require(*cfg.fit_start >= 0.0, "fit_start", "must be nonnegative");
    run.reject_unknown({"epsilon", "final_time", "delta", "initial_shape", "picard_tol",
                        "picard_max_iter", "steady_tol", "steady_max_iter", "seed", "epsilons",
                        "spectral_cells", "fit_start"});
  }

  Section output(doc, "output", false, problems);
  {
    assign(output.string("directory", false), cfg.out_dir);
    assign(output.number("cadence", false), cfg.cadence);
    output.require(cfg.cadence >= 0.0, "cadence", "must be nonnegative");
    if (auto snaps = output.numbers("snapshots")) {
      for (double t : *snaps) {
        output.require(t >= 0.0 && t <= cfg.final_time, "snapshots",
                       "times must lie in [0, run.final_time]");
      }
      cfg.snapshots = *snaps;
    }
    output.reject_unknown({"directory", "cadence", "snapshots"});
  }

  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("malformed JSON in '") + path + "': " + e.what()});
  }
  return validate_config(doc);
}

ScaledSystem build_system(const SystemConfig& sys, std::optional<double> epsilon) {
  switch (sys.kind) {
    case SystemKind::saint_venant: {
      SaintVenantParams p = sys.saint_venant;
      p.length = sys.length;
      if (epsilon) {
        const double base = p.friction + p.slope_amplitude;
        if (base == 0.0 && *epsilon > 0.0) {
          throw DomainError("cannot rescale a Saint-Venant system without friction or slope");
        }
        const double scale = base == 0.0 ? 0.0 : *epsilon / base;
        p.friction *= scale;
        p.slope_amplitude *= scale;
      }
      return sv_system(p);
    }
    case SystemKind::savage_hutter: {
      SavageHutterParams p = sys.savage_hutter;
      p.length = sys.length;
      if (epsilon) {
        if (!(*epsilon < p.gravity)) throw DomainError("epsilon must be below gravity");
        p.angle_amplitude = std::asin(*epsilon / p.gravity);
      }
      return sh_system(p);
    }
    case SystemKind::custom: {
      if (!epsilon) throw DomainError("custom systems need an explicit epsilon");
      ScaledSystem out;
      out.epsilon = *epsilon;
      switch (sys.family) {
        case Family::constant: out.spec = constant_system(sys.constant); break;
        case Family::linear_source: out.spec = linear_source_system(sys.linear_source); break;
        case Family::arctan_speed: out.spec = arctan_speed_system(sys.arctan_speed); break;
      }
      return out;
    }
  }
  throw DomainError("unknown system kind");
}

RunConfig with_epsilon(const RunConfig& config, double epsilon) {
  RunConfig out = config;
  out.epsilon = epsilon;
  return out;
}

}  // namespace hypstab
