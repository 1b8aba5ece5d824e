#pragma once

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wip/params.hpp"
#include "wip/sim.hpp"
#include "wip/state.hpp"

namespace wip {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  Params params;
  InitialState initial;
  TorqueProfile torques;
  double duration = 0;
  double dt = 0;
  std::optional<Model> model;
  std::optional<double> max_abs_error;
};

inline Model parse_model(const std::string& name) {
  if (name == "full") return Model::Full;
  if (name == "reduced") return Model::Reduced;
  if (name == "oracle") return Model::Oracle;
  throw ConfigError("unknown model '" + name + "' (expected full, reduced or oracle)");
}

namespace detail {

using nlohmann::json;

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class Block {
 public:
  Block(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where(key) + ": not finite");
    return x;
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  const json& at(const std::string& key) {
    if (!node_.contains(key)) throw ConfigError(where(key) + ": missing required key");
    seen_.insert(key);
    return node_.at(key);
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  /// Throws on any key that was never read.
  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where(it.key()) + ": unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

inline Params parse_params(const json& node) {
  Block b(node, "params");
  Params p;
  p.m_b = b.number("m_b");
  p.m_W = b.number("m_W");
  p.b = b.number("b");
  p.r = b.number("r");
  p.d = b.number("d");
  p.I_Bxx = b.number("I_Bxx");
  p.I_Byy = b.number("I_Byy");
  p.I_Bz = b.number("I_Bz");
  p.I_Wyy = b.number("I_Wyy");
  p.I_Wzz = b.number("I_Wzz");
  p.g = b.number("g");
  b.finish();
  try {
    validate(p);
  } catch (const InvalidParams& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  return p;
}

inline InitialState parse_initial(const json& node, const Params& p) {
  Block outer(node, "initial");
  const bool full = outer.has("full"), reduced = outer.has("reduced");
  if (full == reduced) throw ConfigError("initial: give exactly one of 'full' or 'reduced'");
  if (full) {
    Block b(outer.at("full"), "initial.full");
    // dependent rates (x_dot, y_dot, theta_dot) follow from the rolling constraints
    const FullState s = admissible_state(
        b.number_or("x", 0), b.number_or("y", 0), b.number_or("theta", 0), b.number("alpha"),
        b.number_or("phi1", 0), b.number_or("phi2", 0), b.number_or("alpha_dot", 0),
        b.number_or("phi1_dot", 0), b.number_or("phi2_dot", 0), p);
    b.finish();
    outer.finish();
    return s;
  }
  Block b(outer.at("reduced"), "initial.reduced");
  ReducedState s;
  s.x = b.number_or("x", 0);
  s.y = b.number_or("y", 0);
  s.theta = b.number_or("theta", 0);
  s.phi = b.number_or("phi", 0);
  s.alpha = b.number("alpha");
  s.alpha_dot = b.number_or("alpha_dot", 0);
  s.p1 = b.number_or("p1", 0);
  s.p2 = b.number_or("p2", 0);
  b.finish();
  outer.finish();
  return s;
}

inline TorqueProfile parse_torques(const json& node, const Params& p) {
  if (!node.is_array()) throw ConfigError("torques: expected an array of segments");
  std::vector<TorqueProfile::Segment> segments;
  for (std::size_t i = 0; i < node.size(); ++i) {
    Block b(node[i], "torques[" + std::to_string(i) + "]");
    const double t = b.number("t");
    const bool by_tau = b.has("tau1") || b.has("tau2");
    const bool by_u = b.has("u1") || b.has("u2");
    if (by_tau && by_u) {
      throw ConfigError(b.where("t") + ": segment mixes tau and u inputs");
    }
    Controls c;
    if (by_u) {
      c = tau_from_u({b.number_or("u1", 0), b.number_or("u2", 0)}, p);
    } else {
      c = {b.number_or("tau1", 0), b.number_or("tau2", 0)};
    }
    b.finish();
    segments.push_back({t, c});
  }
  try {
    return TorqueProfile(std::move(segments));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("torques: ") + e.what());
  }
}

}  // namespace detail

/// Parses a scenario document. Syntax errors carry line and column; schema
/// errors name the offending key path.
inline ScenarioConfig parse_config(const std::string& text) {
  using nlohmann::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream os;
    os << "syntax error at line " << line << ", column " << col;
    throw ConfigError(os.str());
  }

  detail::Block top(root, "config");
  ScenarioConfig cfg;
  cfg.params = detail::parse_params(top.at("params"));
  cfg.initial = detail::parse_initial(top.at("initial"), cfg.params);
  if (top.has("torques")) cfg.torques = detail::parse_torques(top.at("torques"), cfg.params);

  detail::Block sim(top.at("sim"), "sim");
  cfg.duration = sim.number("T");
  cfg.dt = sim.number("dt");
  if (!(cfg.duration >= 0)) throw ConfigError("sim.T: must be non-negative");
  if (!(cfg.dt > 0)) throw ConfigError("sim.dt: must be positive");
  if (sim.has("model")) {
    try {
      cfg.model = parse_model(sim.string("model"));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("sim.model: ") + e.what());
    }
  }
  sim.finish();

  if (top.has("tolerances")) {
    detail::Block tol(top.at("tolerances"), "tolerances");
    cfg.max_abs_error = tol.number("max_abs_error");
    if (!(*cfg.max_abs_error >= 0)) throw ConfigError("tolerances.max_abs_error: must be >= 0");
    tol.finish();
  }
  top.finish();
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace wip
