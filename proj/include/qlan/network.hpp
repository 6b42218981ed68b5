#pragma once

// Experiment composition: builds the transfer chain
//
//   L1  ->  S  ->  L2  ->  B(0.5)  ->  L3  ->  C  ->  L4
//
// over a two-node, one-link description, taps intermediate states, and
// sweeps the link center temperature. Mode 0 is the sender's local mode
// (squeezed path), mode 1 enters the balanced splitter as a weak thermal
// state at the attenuator temperature and becomes the transmitted mode.

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlan/gaussian_state.hpp"
#include "qlan/heat.hpp"
#include "qlan/metrics.hpp"
#include "qlan/response_fit.hpp"
#include "qlan/thermal.hpp"

namespace qlan {

// A loss segment couples one mode to a bath, either at a fixed temperature
// or tracking one of the named system temperatures during a sweep.
struct BathRef {
  enum class Source { kFixed, kAttenuator, kAliceMc, kBobMc, kCenter };
  Source source = Source::kFixed;
  double fixed_k = 0.0;

  static BathRef fixed(double kelvin) {
    return BathRef{Source::kFixed, kelvin};
  }
  static BathRef named(Source s) { return BathRef{s, 0.0}; }
};

struct LossSegment {
  double epsilon = 0.0;  // linear loss in [0,1]
  BathRef bath;
};

struct NodeSpec {
  std::string name;
  double mc_temperature_k = 0.0;
  double attenuator_temperature_k = 0.0;
  // sender segments
  std::vector<LossSegment> input_losses;          // before the squeezer (L1)
  std::vector<LossSegment> pre_splitter_losses;   // squeezer -> splitter (L2)
  std::vector<LossSegment> local_output_losses;   // kept mode after the splitter
  std::vector<LossSegment> launch_losses;         // transmitted mode -> cable (L3)
  // receiver segments
  std::vector<LossSegment> receiver_losses;       // cable -> reconstruction (L4)
};

struct LinkSpec {
  double length_m = 6.0;
  double attenuation_db_per_km = 1.01;
  double signal_frequency_hz = 5.65e9;
  enum class BathMode { kUniform, kProfile };
  BathMode bath_mode = BathMode::kUniform;
  double center_temperature_k = 0.110;
  int profile_segments = 128;  // loss discretization in profile mode

  double total_epsilon() const {
    if (!(length_m > 0.0)) throw config_error("link length must be > 0");
    if (attenuation_db_per_km < 0.0) {
      throw config_error("attenuation must be >= 0");
    }
    const double total_db = attenuation_db_per_km * length_m / 1000.0;
    return 1.0 - std::pow(10.0, -total_db / 10.0);
  }
};

struct SqueezeSpec {
  double r = 0.0;
  double theta_rad = 0.0;
  double n_added = 0.0;

  // r = S ln(10) / 20 inverts S = -10 log10(e^{-2r})
  static SqueezeSpec from_target_db(double s_db, double theta_rad,
                                    double n_added) {
    SqueezeSpec s;
    s.r = s_db * std::log(10.0) / 20.0;
    s.theta_rad = theta_rad;
    s.n_added = n_added;
    return s;
  }
};

enum class Tap { kHrInput, kHrOutput, kReceiver };

inline std::string tap_name(Tap tap) {
  switch (tap) {
    case Tap::kHrInput: return "hr_input";
    case Tap::kHrOutput: return "hr_output";
    case Tap::kReceiver: return "receiver";
  }
  throw std::logic_error("unknown tap");
}

struct SweepSpec {
  enum class Mode { kFullHeating, kCenterOnly };
  Mode mode = Mode::kCenterOnly;
  std::vector<double> t_center_values_k;
  // Per-series responses mapping T_center to the measured temperature;
  // required in full-heating mode.
  std::optional<ResponseFit> attenuator_response;
  std::optional<ResponseFit> alice_mc_response;
  std::optional<ResponseFit> bob_mc_response;
  std::optional<ResponseFit> mc_tube_response;
};

struct ExperimentConfig {
  double signal_frequency_hz = 5.65e9;
  NodeSpec alice;  // sender
  NodeSpec bob;    // receiver
  LinkSpec link;
  SqueezeSpec squeeze;
  std::vector<Tap> taps = {Tap::kHrInput, Tap::kHrOutput, Tap::kReceiver};
  std::optional<SweepSpec> sweep;
  std::optional<HeatModel> heat;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(signal_frequency_hz > 0.0)) {
      throw config_error("signal frequency must be > 0");
    }
    if (taps.empty()) throw config_error("taps must be non-empty");
    if (!(squeeze.r >= 0.0)) throw config_error("squeeze r must be >= 0");
    if (!(squeeze.n_added >= 0.0)) {
      throw config_error("squeeze n_added must be >= 0");
    }
    auto check_temps = [](const NodeSpec& node) {
      if (!(node.mc_temperature_k > 0.0)) {
        throw config_error("node '" + node.name +
                           "': mc_temperature_k must be > 0");
      }
    };
    check_temps(alice);
    check_temps(bob);
    if (!(alice.attenuator_temperature_k > 0.0)) {
      throw config_error("sender attenuator temperature must be > 0");
    }
    auto check_losses = [](const std::vector<LossSegment>& segs,
                           const char* which) {
      for (const auto& s : segs) {
        if (!(s.epsilon >= 0.0 && s.epsilon <= 1.0)) {
          throw config_error(std::string(which) +
                             ": epsilon must be in [0,1]");
        }
        if (s.bath.source == BathRef::Source::kFixed &&
            s.bath.fixed_k < 0.0) {
          throw config_error(std::string(which) +
                             ": bath temperature must be >= 0");
        }
      }
    };
    check_losses(alice.input_losses, "input_losses");
    check_losses(alice.pre_splitter_losses, "pre_splitter_losses");
    check_losses(alice.local_output_losses, "local_output_losses");
    check_losses(alice.launch_losses, "launch_losses");
    check_losses(bob.receiver_losses, "receiver_losses");
    (void)link.total_epsilon();
    if (link.bath_mode == LinkSpec::BathMode::kProfile && !heat) {
      throw config_error("profile bath mode requires a heat section");
    }
    if (sweep) {
      if (sweep->t_center_values_k.empty()) {
        throw config_error("sweep temperature list must be non-empty");
      }
      for (std::size_t i = 0; i + 1 < sweep->t_center_values_k.size(); ++i) {
        if (sweep->t_center_values_k[i] > sweep->t_center_values_k[i + 1]) {
          throw config_error("sweep values must be sorted ascending");
        }
      }
      for (double t : sweep->t_center_values_k) {
        if (t < 0.1 || t > 1.0) {
          throw config_error("sweep values must lie within [0.1, 1.0] K");
        }
      }
      if (sweep->mode == SweepSpec::Mode::kFullHeating &&
          (!sweep->attenuator_response || !sweep->alice_mc_response ||
           !sweep->bob_mc_response)) {
        throw config_error(
            "full_heating sweep requires attenuator, alice_mc and bob_mc "
            "response fits");
      }
    }
  }
};

// System temperatures resolved for one operating point.
struct Temperatures {
  double attenuator_k = 0.0;
  double alice_mc_k = 0.0;
  double bob_mc_k = 0.0;
  double center_k = 0.0;
  double tube_k = 0.0;
};

inline Temperatures base_temperatures(const ExperimentConfig& config) {
  Temperatures t;
  t.attenuator_k = config.alice.attenuator_temperature_k;
  t.alice_mc_k = config.alice.mc_temperature_k;
  t.bob_mc_k = config.bob.mc_temperature_k;
  t.center_k = config.link.center_temperature_k;
  t.tube_k = config.heat ? config.heat->tube_temperature_k : 0.052;
  return t;
}

inline double resolve_bath_k(const BathRef& bath, const Temperatures& t) {
  switch (bath.source) {
    case BathRef::Source::kFixed: return bath.fixed_k;
    case BathRef::Source::kAttenuator: return t.attenuator_k;
    case BathRef::Source::kAliceMc: return t.alice_mc_k;
    case BathRef::Source::kBobMc: return t.bob_mc_k;
    case BathRef::Source::kCenter: return t.center_k;
  }
  throw std::logic_error("unknown bath source");
}

struct TransferChain {
  std::vector<ChannelElement> elements;
  // tap -> number of chain elements applied before the state is recorded
  std::vector<std::pair<Tap, std::size_t>> tap_positions;
};

namespace detail {

inline void append_losses(std::vector<ChannelElement>& chain, int mode,
                          const std::vector<LossSegment>& segs,
                          const Temperatures& temps, double frequency_hz) {
  for (const auto& seg : segs) {
    if (seg.epsilon == 0.0) continue;
    const double bath_k = resolve_bath_k(seg.bath, temps);
    chain.push_back(LossOp{mode, seg.epsilon,
                           planck_occupation(frequency_hz, bath_k)});
  }
}

// Cable as a sequence of slices with the local bath taken from the solved
// temperature profile; attenuation in dB splits linearly in length.
inline void append_profile_cable(std::vector<ChannelElement>& chain,
                                 const ExperimentConfig& config,
                                 const Temperatures& temps) {
  HeatModel model = *config.heat;
  model.boundary_left_k = temps.alice_mc_k;
  model.boundary_right_k = temps.bob_mc_k;
  model.tube_temperature_k = temps.tube_k;
  const TemperatureProfile profile =
      solve_profile_pinned_center(model, temps.center_k);
  const int segments = std::max(config.link.profile_segments, 1);
  const double slice_db = config.link.attenuation_db_per_km *
                          config.link.length_m / 1000.0 / segments;
  const double eps_slice = 1.0 - std::pow(10.0, -slice_db / 10.0);
  if (eps_slice == 0.0) return;
  const double dx = config.link.length_m / segments;
  for (int s = 0; s < segments; ++s) {
    const double x_mid = (s + 0.5) * dx;
    const double bath_k = profile.at(x_mid);
    chain.push_back(
        LossOp{1, eps_slice,
               planck_occupation(config.link.signal_frequency_hz, bath_k)});
  }
}

}  // namespace detail

// Emits the ordered element list for the requested taps; the chain is
// truncated after the last tap position.
inline TransferChain build_transfer_chain(const ExperimentConfig& config,
                                          const Temperatures& temps) {
  config.validate();
  const double f = config.signal_frequency_hz;
  TransferChain chain;
  auto mark_tap = [&](Tap tap) {
    chain.tap_positions.emplace_back(tap, chain.elements.size());
  };
  const bool want_hr_input =
      std::find(config.taps.begin(), config.taps.end(), Tap::kHrInput) !=
      config.taps.end();
  const bool want_hr_output =
      std::find(config.taps.begin(), config.taps.end(), Tap::kHrOutput) !=
      config.taps.end();
  const bool want_receiver =
      std::find(config.taps.begin(), config.taps.end(), Tap::kReceiver) !=
      config.taps.end();

  detail::append_losses(chain.elements, 0, config.alice.input_losses, temps,
                        f);
  chain.elements.push_back(SqueezeOp{0, config.squeeze.r,
                                     config.squeeze.theta_rad,
                                     config.squeeze.n_added});
  detail::append_losses(chain.elements, 0, config.alice.pre_splitter_losses,
                        temps, f);
  if (want_hr_input) mark_tap(Tap::kHrInput);
  if (!want_hr_output && !want_receiver) return chain;

  chain.elements.push_back(BeamSplitterOp{0, 1, 0.5});
  if (want_hr_output) mark_tap(Tap::kHrOutput);
  if (!want_receiver) return chain;

  detail::append_losses(chain.elements, 0, config.alice.local_output_losses,
                        temps, f);
  detail::append_losses(chain.elements, 1, config.alice.launch_losses, temps,
                        f);
  if (config.link.bath_mode == LinkSpec::BathMode::kProfile) {
    detail::append_profile_cable(chain.elements, config, temps);
  } else {
    const double eps = config.link.total_epsilon();
    if (eps > 0.0) {
      chain.elements.push_back(
          LossOp{1, eps, planck_occupation(f, temps.center_k)});
    }
  }
  detail::append_losses(chain.elements, 1, config.bob.receiver_losses, temps,
                        f);
  mark_tap(Tap::kReceiver);
  return chain;
}

struct TapRecord {
  Tap tap;
  GaussianState state;
  MetricReport report;
};

struct TransferResult {
  std::vector<TapRecord> taps;

  const TapRecord& at(Tap tap) const {
    for (const auto& rec : taps) {
      if (rec.tap == tap) return rec;
    }
    throw std::invalid_argument("tap '" + tap_name(tap) + "' not recorded");
  }
};

inline TransferResult run_transfer(const ExperimentConfig& config,
                                   const Temperatures& temps) {
  const TransferChain chain = build_transfer_chain(config, temps);
  const double n_att =
      planck_occupation(config.signal_frequency_hz, temps.attenuator_k);
  GaussianState state = make_thermal_state(2, {n_att, n_att});

  TransferResult result;
  std::size_t applied = 0;
  for (const auto& [tap, position] : chain.tap_positions) {
    while (applied < position) {
      state = apply_channel(state, chain.elements[applied]);
      ++applied;
    }
    result.taps.push_back(TapRecord{tap, state, metric_report(state)});
  }
  return result;
}

inline TransferResult run_transfer(const ExperimentConfig& config) {
  return run_transfer(config, base_temperatures(config));
}

struct SweepRow {
  double t_center_k = 0.0;
  double t_att_k = 0.0;
  double t_alice_mc_k = 0.0;
  double t_bob_mc_k = 0.0;
  double s_hr_in_db = 0.0;
  double s_hr_out_db = 0.0;
  double s_receiver_db = 0.0;
  double purity_receiver = 0.0;
  double negativity = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

inline Temperatures sweep_point_temperatures(const ExperimentConfig& config,
                                             double t_center_k) {
  Temperatures temps = base_temperatures(config);
  temps.center_k = t_center_k;
  if (config.sweep &&
      config.sweep->mode == SweepSpec::Mode::kFullHeating) {
    temps.attenuator_k =
        evaluate_fit(*config.sweep->attenuator_response, t_center_k);
    temps.alice_mc_k =
        evaluate_fit(*config.sweep->alice_mc_response, t_center_k);
    temps.bob_mc_k = evaluate_fit(*config.sweep->bob_mc_response, t_center_k);
    if (config.sweep->mc_tube_response) {
      temps.tube_k = evaluate_fit(*config.sweep->mc_tube_response, t_center_k);
    }
    for (double t : {temps.attenuator_k, temps.alice_mc_k, temps.bob_mc_k}) {
      if (!(t > 0.0)) {
        throw config_error("response fit produced a non-positive temperature");
      }
    }
  }
  return temps;
}

// One transfer per center temperature. All three taps are evaluated
// regardless of config.taps so every row is complete.
inline SweepResult sweep_center_temperature(const ExperimentConfig& config,
                                            const std::vector<double>& values) {
  ExperimentConfig full = config;
  full.taps = {Tap::kHrInput, Tap::kHrOutput, Tap::kReceiver};
  if (full.sweep) full.sweep->t_center_values_k = values;
  full.validate();
  if (values.empty()) throw config_error("sweep value list is empty");
  if (!full.sweep) {
    throw config_error("sweep requires a sweep section in the config");
  }

  SweepResult result;
  for (double t_center : values) {
    const Temperatures temps = sweep_point_temperatures(full, t_center);
    const TransferResult transfer = run_transfer(full, temps);
    SweepRow row;
    row.t_center_k = t_center;
    row.t_att_k = temps.attenuator_k;
    row.t_alice_mc_k = temps.alice_mc_k;
    row.t_bob_mc_k = temps.bob_mc_k;
    row.s_hr_in_db = transfer.at(Tap::kHrInput).report.squeezing_db[0];
    row.s_hr_out_db = transfer.at(Tap::kHrOutput).report.squeezing_db[0];
    const TapRecord& receiver = transfer.at(Tap::kReceiver);
    row.s_receiver_db = receiver.report.squeezing_db[1];
    row.purity_receiver = receiver.report.mode_purity[1];
    row.negativity = receiver.report.neg;
    result.rows.push_back(row);
  }
  return result;
}

// --- multi-hop composition over a node/link graph ----------------------

struct Topology {
  struct TopoNode {
    std::string name;
    double insertion_loss_eps = 0.0;
    double bath_k = 0.0;
  };
  struct TopoLink {
    std::string node_a;
    std::string node_b;
    double length_m = 0.0;
    double attenuation_db_per_km = 0.0;
    double bath_k = 0.0;
  };
  double signal_frequency_hz = 5.65e9;
  std::vector<TopoNode> nodes;
  std::vector<TopoLink> links;

  const TopoNode& node(const std::string& name) const {
    for (const auto& n : nodes) {
      if (n.name == name) return n;
    }
    throw config_error("unknown node '" + name + "'");
  }

  const TopoLink* find_link(const std::string& a,
                            const std::string& b) const {
    for (const auto& l : links) {
      if ((l.node_a == a && l.node_b == b) ||
          (l.node_a == b && l.node_b == a)) {
        return &l;
      }
    }
    return nullptr;
  }
};

// Concatenates per-link cable losses and intermediate-node insertion losses
// along a path into one chain acting on `mode`. An empty or single-node
// path yields the identity (empty) chain.
inline std::vector<ChannelElement> compose_multihop(
    const Topology& topology, const std::vector<std::string>& path,
    int mode = 1) {
  std::vector<ChannelElement> chain;
  if (path.size() < 2) return chain;
  const double f = topology.signal_frequency_hz;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    (void)topology.node(path[i]);
    (void)topology.node(path[i + 1]);
    const Topology::TopoLink* link =
        topology.find_link(path[i], path[i + 1]);
    if (link == nullptr) {
      throw config_error("disconnected path: no link between '" + path[i] +
                         "' and '" + path[i + 1] + "'");
    }
    const double total_db =
        link->attenuation_db_per_km * link->length_m / 1000.0;
    const double eps = 1.0 - std::pow(10.0, -total_db / 10.0);
    if (eps > 0.0) {
      chain.push_back(
          LossOp{mode, eps, planck_occupation(f, link->bath_k)});
    }
    // insertion loss at intermediate nodes only
    if (i + 2 < path.size()) {
      const Topology::TopoNode& hop = topology.node(path[i + 1]);
      if (hop.insertion_loss_eps > 0.0) {
        chain.push_back(LossOp{mode, hop.insertion_loss_eps,
                               planck_occupation(f, hop.bath_k)});
      }
    }
  }
  return chain;
}

}  // namespace qlan
