#pragma once

// JSON experiment configuration. Parsing is strict: every key must be
// known, units are embedded in key names, and a schema_version field is
// required. Errors carry the JSON path of the offending field.

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlan/errors.hpp"
#include "qlan/heat.hpp"
#include "qlan/network.hpp"

namespace qlan {

inline constexpr int kConfigSchemaVersion = 1;

namespace detail {

using nlohmann::json;

// Wraps a JSON object, tracks consumed keys, and rejects leftovers.
class StrictObject {
 public:
  StrictObject(const json& obj, std::string path)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) {
      throw config_error(path_ + ": expected an object");
    }
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& require(const std::string& key) {
    if (!obj_.contains(key)) {
      throw config_error(path_ + ": missing required key '" + key + "'");
    }
    consumed_.insert(key);
    return obj_.at(key);
  }

  const json* optional(const std::string& key) {
    if (!obj_.contains(key)) return nullptr;
    consumed_.insert(key);
    return &obj_.at(key);
  }

  double require_number(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number()) {
      throw config_error(path_ + "." + key + ": expected a number");
    }
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) {
    const json* v = optional(key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) {
      throw config_error(path_ + "." + key + ": expected a number");
    }
    return v->get<double>();
  }

  int int_or(const std::string& key, int fallback) {
    const json* v = optional(key);
    if (v == nullptr) return fallback;
    if (!v->is_number_integer()) {
      throw config_error(path_ + "." + key + ": expected an integer");
    }
    return v->get<int>();
  }

  std::string require_string(const std::string& key) {
    const json& v = require(key);
    if (!v.is_string()) {
      throw config_error(path_ + "." + key + ": expected a string");
    }
    return v.get<std::string>();
  }

  const std::string& path() const { return path_; }

  // call last: any unconsumed key is an error (no silent typo acceptance)
  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (consumed_.find(it.key()) == consumed_.end()) {
        throw config_error(path_ + ": unknown key '" + it.key() + "'");
      }
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> consumed_;
};

inline BathRef parse_bath(const json& v, const std::string& path) {
  if (v.is_number()) {
    const double kelvin = v.get<double>();
    if (kelvin < 0.0) {
      throw config_error(path + ": bath temperature must be >= 0");
    }
    return BathRef::fixed(kelvin);
  }
  if (v.is_string()) {
    const std::string name = v.get<std::string>();
    if (name == "attenuator") return BathRef::named(BathRef::Source::kAttenuator);
    if (name == "alice_mc") return BathRef::named(BathRef::Source::kAliceMc);
    if (name == "bob_mc") return BathRef::named(BathRef::Source::kBobMc);
    if (name == "center") return BathRef::named(BathRef::Source::kCenter);
    throw config_error(path + ": unknown bath '" + name +
                       "' (use attenuator|alice_mc|bob_mc|center or kelvin)");
  }
  throw config_error(path + ": bath must be a name or a temperature in K");
}

inline std::vector<LossSegment> parse_losses(const json& v,
                                             const std::string& path) {
  if (!v.is_array()) throw config_error(path + ": expected an array");
  std::vector<LossSegment> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    StrictObject seg(v[i], p);
    LossSegment s;
    s.epsilon = seg.require_number("epsilon");
    s.bath = parse_bath(seg.require("bath"), p + ".bath");
    seg.finish();
    out.push_back(s);
  }
  return out;
}

inline ResponseFit parse_response(const json& v, const std::string& path) {
  StrictObject obj(v, path);
  ResponseFit fit;
  fit.a = obj.require_number("a");
  fit.b = obj.require_number("b");
  fit.c = obj.require_number("c");
  fit.residual_rms_k = obj.number_or("residual_rms_k", 0.0);
  obj.finish();
  return fit;
}

inline HeatModel parse_heat(const json& v, const std::string& path) {
  StrictObject obj(v, path);
  HeatModel model;
  model.length_m = obj.number_or("length_m", model.length_m);
  model.grid_points = obj.int_or("grid_points", model.grid_points);
  model.boundary_left_k = obj.require_number("boundary_left_k");
  model.boundary_right_k = obj.require_number("boundary_right_k");
  if (const json* c = obj.optional("conductivity")) {
    StrictObject cond(*c, path + ".conductivity");
    const std::string kind = cond.require_string("model");
    if (kind == "linear_in_t") {
      model.conductivity = HeatModel::Conductivity::kLinearInT;
      model.kappa0_w_per_m_k2 =
          cond.number_or("kappa0_w_per_m_k2", model.kappa0_w_per_m_k2);
    } else if (kind == "constant") {
      model.conductivity = HeatModel::Conductivity::kConstant;
      model.constant_lambda_w_per_m_k = cond.require_number("lambda_w_per_m_k");
    } else {
      throw config_error(path +
                         ".conductivity.model: expected linear_in_t|constant");
    }
    cond.finish();
  }
  model.wire_cross_section_m2 =
      obj.number_or("wire_cross_section_m2", model.wire_cross_section_m2);
  model.tube_temperature_k =
      obj.number_or("tube_temperature_k", model.tube_temperature_k);
  model.tube_coupling_w_per_m_k =
      obj.number_or("tube_coupling_w_per_m_k", model.tube_coupling_w_per_m_k);
  model.radiative_coeff_w_per_m_k4 = obj.number_or(
      "radiative_coeff_w_per_m_k4", model.radiative_coeff_w_per_m_k4);
  if (const json* h = obj.optional("heater")) {
    StrictObject heater(*h, path + ".heater");
    model.heater_position_m =
        heater.number_or("position_m", model.heater_position_m);
    model.heater_power_w = heater.require_number("power_w");
    model.heater_width_m = heater.number_or("width_m", model.heater_width_m);
    heater.finish();
  }
  if (const json* s = obj.optional("solver")) {
    StrictObject solver(*s, path + ".solver");
    model.relaxation = solver.number_or("relaxation", model.relaxation);
    model.tolerance_k = solver.number_or("tolerance_k", model.tolerance_k);
    model.max_iterations =
        solver.int_or("max_iterations", model.max_iterations);
    solver.finish();
  }
  obj.finish();
  model.validate();
  return model;
}

inline NodeSpec parse_node(const json& v, const std::string& path,
                           bool is_sender) {
  StrictObject obj(v, path);
  NodeSpec node;
  node.name = obj.require_string("name");
  node.mc_temperature_k = obj.require_number("mc_temperature_k");
  if (is_sender) {
    node.attenuator_temperature_k =
        obj.require_number("attenuator_temperature_k");
    if (const json* l = obj.optional("input_losses")) {
      node.input_losses = parse_losses(*l, path + ".input_losses");
    }
    if (const json* l = obj.optional("pre_splitter_losses")) {
      node.pre_splitter_losses =
          parse_losses(*l, path + ".pre_splitter_losses");
    }
    if (const json* l = obj.optional("local_output_losses")) {
      node.local_output_losses =
          parse_losses(*l, path + ".local_output_losses");
    }
    if (const json* l = obj.optional("launch_losses")) {
      node.launch_losses = parse_losses(*l, path + ".launch_losses");
    }
  } else {
    node.attenuator_temperature_k =
        obj.number_or("attenuator_temperature_k", node.mc_temperature_k);
    if (const json* l = obj.optional("receiver_losses")) {
      node.receiver_losses = parse_losses(*l, path + ".receiver_losses");
    }
  }
  obj.finish();
  return node;
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(const nlohmann::json& root) {
  detail::StrictObject obj(root, "$");
  const int version = obj.int_or("schema_version", -1);
  if (version != kConfigSchemaVersion) {
    throw config_error("$.schema_version: expected " +
                       std::to_string(kConfigSchemaVersion));
  }
  ExperimentConfig config;
  config.seed = static_cast<std::uint64_t>(obj.int_or("seed", 1));
  config.signal_frequency_hz = obj.require_number("signal_frequency_ghz") * 1e9;

  {
    const nlohmann::json& nodes = obj.require("nodes");
    if (!nodes.is_array() || nodes.size() != 2) {
      throw config_error("$.nodes: expected exactly two nodes (sender, receiver)");
    }
    config.alice = detail::parse_node(nodes[0], "$.nodes[0]", true);
    config.bob = detail::parse_node(nodes[1], "$.nodes[1]", false);
  }

  {
    detail::StrictObject link(obj.require("link"), "$.link");
    config.link.length_m = link.require_number("length_m");
    config.link.attenuation_db_per_km =
        link.require_number("attenuation_db_per_km");
    config.link.center_temperature_k =
        link.require_number("center_temperature_k");
    if (const nlohmann::json* mode = link.optional("bath_mode")) {
      const std::string name = mode->get<std::string>();
      if (name == "uniform") {
        config.link.bath_mode = LinkSpec::BathMode::kUniform;
      } else if (name == "profile") {
        config.link.bath_mode = LinkSpec::BathMode::kProfile;
      } else {
        throw config_error("$.link.bath_mode: expected uniform|profile");
      }
    }
    config.link.profile_segments =
        link.int_or("profile_segments", config.link.profile_segments);
    link.finish();
    config.link.signal_frequency_hz = config.signal_frequency_hz;
  }

  {
    detail::StrictObject squeeze(obj.require("squeeze"), "$.squeeze");
    const bool has_r = squeeze.has("r");
    const bool has_target = squeeze.has("target_s_db");
    if (has_r == has_target) {
      throw config_error("$.squeeze: give exactly one of r | target_s_db");
    }
    const double theta = squeeze.number_or("theta_rad", 0.0);
    const double n_added = squeeze.number_or("n_added_photons", 0.0);
    if (has_r) {
      config.squeeze = SqueezeSpec{squeeze.require_number("r"), theta, n_added};
    } else {
      config.squeeze = SqueezeSpec::from_target_db(
          squeeze.require_number("target_s_db"), theta, n_added);
    }
    squeeze.finish();
  }

  {
    const nlohmann::json& taps = obj.require("taps");
    if (!taps.is_array() || taps.empty()) {
      throw config_error("$.taps: expected a non-empty array");
    }
    config.taps.clear();
    for (const auto& t : taps) {
      const std::string name = t.get<std::string>();
      if (name == "hr_input") config.taps.push_back(Tap::kHrInput);
      else if (name == "hr_output") config.taps.push_back(Tap::kHrOutput);
      else if (name == "receiver") config.taps.push_back(Tap::kReceiver);
      else throw config_error("$.taps: unknown tap '" + name + "'");
    }
  }

  if (const nlohmann::json* sweep_json = obj.optional("sweep")) {
    detail::StrictObject sweep(*sweep_json, "$.sweep");
    SweepSpec spec;
    const std::string mode = sweep.require_string("mode");
    if (mode == "full_heating") spec.mode = SweepSpec::Mode::kFullHeating;
    else if (mode == "center_only") spec.mode = SweepSpec::Mode::kCenterOnly;
    else throw config_error("$.sweep.mode: expected full_heating|center_only");
    const nlohmann::json& values = sweep.require("t_center_values_k");
    if (!values.is_array()) {
      throw config_error("$.sweep.t_center_values_k: expected an array");
    }
    for (const auto& v : values) {
      spec.t_center_values_k.push_back(v.get<double>());
    }
    if (const nlohmann::json* fits = sweep.optional("response_fits")) {
      detail::StrictObject fit_obj(*fits, "$.sweep.response_fits");
      if (const nlohmann::json* f = fit_obj.optional("attenuator")) {
        spec.attenuator_response =
            detail::parse_response(*f, "$.sweep.response_fits.attenuator");
      }
      if (const nlohmann::json* f = fit_obj.optional("alice_mc")) {
        spec.alice_mc_response =
            detail::parse_response(*f, "$.sweep.response_fits.alice_mc");
      }
      if (const nlohmann::json* f = fit_obj.optional("bob_mc")) {
        spec.bob_mc_response =
            detail::parse_response(*f, "$.sweep.response_fits.bob_mc");
      }
      if (const nlohmann::json* f = fit_obj.optional("mc_tube")) {
        spec.mc_tube_response =
            detail::parse_response(*f, "$.sweep.response_fits.mc_tube");
      }
      fit_obj.finish();
    }
    sweep.finish();
    config.sweep = std::move(spec);
  }

  if (const nlohmann::json* heat = obj.optional("heat")) {
    config.heat = detail::parse_heat(*heat, "$.heat");
  }

  obj.finish();
  config.validate();
  return config;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::parse_error& err) {
    throw config_error("JSON parse error in '" + path + "': " + err.what());
  }
  return root;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(load_json_file(path));
}

// Heat-only configs: { "schema_version": 1, "heat": {...} }.
inline HeatModel load_heat_config(const std::string& path) {
  const nlohmann::json root = load_json_file(path);
  detail::StrictObject obj(root, "$");
  const int version = obj.int_or("schema_version", -1);
  if (version != kConfigSchemaVersion) {
    throw config_error("$.schema_version: expected " +
                       std::to_string(kConfigSchemaVersion));
  }
  const HeatModel model = detail::parse_heat(obj.require("heat"), "$.heat");
  // tolerate experiment keys so a full config can also drive `heat`
  obj.optional("seed");
  obj.optional("signal_frequency_ghz");
  obj.optional("nodes");
  obj.optional("link");
  obj.optional("squeeze");
  obj.optional("taps");
  obj.optional("sweep");
  obj.finish();
  return model;
}

}  // namespace qlan
