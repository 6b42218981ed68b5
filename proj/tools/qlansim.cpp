// qlansim: command-line front end for the microwave QLAN simulator.
//
//   thresholds  thermal-channel threshold temperatures and occupations
//   transfer    run a squeezed-state transfer, report metrics per tap
//   sweep       sweep the link center temperature, emit a CSV table
//   heat        solve the cable temperature profile, emit a CSV profile
//   fit         fit the sigmoid-blended piecewise-linear response to data
//
// Exit codes: 0 success, 2 input/validation error, 3 numerical
// non-convergence.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qlan/config.hpp"
#include "qlan/heat.hpp"
#include "qlan/io.hpp"
#include "qlan/metrics.hpp"
#include "qlan/network.hpp"
#include "qlan/response_fit.hpp"
#include "qlan/thermal.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    qlan::write_file_atomic(out_path, content);
  }
}

int cmd_thresholds(double freq_ghz, const std::vector<double>& at_kelvin,
                   const std::string& out_path) {
  if (!(freq_ghz > 0.0)) {
    std::cerr << "thresholds: --freq-ghz must be > 0\n";
    return kExitInput;
  }
  const double f = freq_ghz * 1e9;
  const double t_kappa = qlan::threshold_kappa(f);
  std::string csv = qlan::csv_line({"quantity", "value"});
  csv += qlan::csv_line({"frequency_GHz", qlan::format_number(freq_ghz)});
  csv += qlan::csv_line({"t_kappa_mK", qlan::format_number(t_kappa * 1e3)});
  csv += qlan::csv_line(
      {"t_kappa_ratio",
       qlan::format_number(t_kappa * qlan::kBoltzmann / (qlan::kPlanck * f))});
  csv += qlan::csv_line(
      {"t_crossover_K", qlan::format_number(qlan::crossover_temperature(f))});
  csv += qlan::csv_line({"t_sudden_death_K",
                         qlan::format_number(qlan::sudden_death_temperature(f))});
  csv += qlan::csv_line(
      {"t_max_squeezing_input_K",
       qlan::format_number(qlan::max_input_temperature_for_squeezing(f))});
  for (double t : at_kelvin) {
    if (!(t >= 0.0)) {
      std::cerr << "thresholds: --at-kelvin must be >= 0\n";
      return kExitInput;
    }
    csv += qlan::csv_line({"n_th_at_" + qlan::format_number(t) + "_K",
                           qlan::format_number(qlan::planck_occupation(f, t))});
  }
  emit(csv, out_path);
  return kExitOk;
}

json state_json(const qlan::GaussianState& state) {
  json j;
  j["n_modes"] = state.n_modes();
  j["displacement"] = std::vector<double>(
      state.displacement().data(),
      state.displacement().data() + state.displacement().size());
  json rows = json::array();
  for (int r = 0; r < state.covariance().rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < state.covariance().cols(); ++c) {
      row.push_back(state.covariance()(r, c));
    }
    rows.push_back(row);
  }
  j["covariance"] = rows;
  return j;
}

json report_json(const qlan::MetricReport& rep) {
  json j;
  j["squeezing_db"] = rep.squeezing_db;
  j["mode_purity"] = rep.mode_purity;
  j["purity"] = rep.state_purity;
  j["nu_plus"] = rep.nu_plus;
  j["nu_minus"] = rep.nu_minus;
  j["pt_nu_minus"] = rep.pt_nu_minus;
  j["negativity"] = rep.neg;
  j["degenerate_pt"] = rep.degenerate_pt;
  return j;
}

int cmd_transfer(const std::string& config_path, std::string out_prefix) {
  const qlan::ExperimentConfig config =
      qlan::load_experiment_config(config_path);
  const qlan::TransferResult result = qlan::run_transfer(config);

  if (out_prefix.empty()) out_prefix = stem_of(config_path) + "_transfer";
  const std::string json_path = out_prefix + ".json";
  const std::string csv_path = out_prefix + ".csv";

  std::string csv = qlan::csv_line({"tap", "s_mode0_dB", "s_mode1_dB",
                                    "purity_mode0", "purity_mode1",
                                    "purity_state", "negativity"});
  json taps_json;
  for (const auto& rec : result.taps) {
    const auto& rep = rec.report;
    csv += qlan::csv_line({qlan::tap_name(rec.tap),
                           qlan::format_number(rep.squeezing_db[0]),
                           qlan::format_number(rep.squeezing_db[1]),
                           qlan::format_number(rep.mode_purity[0]),
                           qlan::format_number(rep.mode_purity[1]),
                           qlan::format_number(rep.state_purity),
                           qlan::format_number(rep.neg)});
    json tap = report_json(rep);
    tap["state"] = state_json(rec.state);
    taps_json[qlan::tap_name(rec.tap)] = tap;
  }

  json out;
  out["manifest"] = qlan::manifest_json(qlan::make_manifest(
      "transfer", config_path, {json_path, csv_path}, config.seed));
  out["taps"] = taps_json;

  qlan::write_file_atomic(csv_path, csv);
  qlan::write_file_atomic(json_path, out.dump(2) + "\n");
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& t_list,
              std::string out_prefix) {
  const qlan::ExperimentConfig config =
      qlan::load_experiment_config(config_path);
  std::vector<double> values;
  if (!t_list.empty()) {
    std::stringstream ss(t_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        values.push_back(v);
      } catch (const std::exception&) {
        throw qlan::config_error("--t-list: cannot parse '" + item + "'");
      }
    }
    if (values.empty()) throw qlan::config_error("--t-list is empty");
  } else if (config.sweep) {
    values = config.sweep->t_center_values_k;
  }
  if (values.empty()) {
    throw qlan::config_error(
        "no sweep temperatures: give --t-list or a sweep section");
  }

  const qlan::SweepResult result =
      qlan::sweep_center_temperature(config, values);

  if (out_prefix.empty()) out_prefix = stem_of(config_path) + "_sweep";
  const std::string csv_path = out_prefix + ".csv";
  const std::string manifest_path = out_prefix + ".manifest.json";

  std::string csv = qlan::csv_line(
      {"t_center_K", "t_att_K", "t_alice_mc_K", "t_bob_mc_K", "s_hr_in_dB",
       "s_hr_out_dB", "s_receiver_dB", "purity_receiver", "negativity"});
  for (const auto& row : result.rows) {
    csv += qlan::csv_line({qlan::format_number(row.t_center_k),
                           qlan::format_number(row.t_att_k),
                           qlan::format_number(row.t_alice_mc_k),
                           qlan::format_number(row.t_bob_mc_k),
                           qlan::format_number(row.s_hr_in_db),
                           qlan::format_number(row.s_hr_out_db),
                           qlan::format_number(row.s_receiver_db),
                           qlan::format_number(row.purity_receiver),
                           qlan::format_number(row.negativity)});
  }

  json manifest;
  manifest["manifest"] = qlan::manifest_json(qlan::make_manifest(
      "sweep", config_path, {csv_path, manifest_path}, config.seed));

  qlan::write_file_atomic(csv_path, csv);
  qlan::write_file_atomic(manifest_path, manifest.dump(2) + "\n");
  return kExitOk;
}

int cmd_heat(const std::string& config_path, std::string out_path) {
  const qlan::HeatModel model = qlan::load_heat_config(config_path);
  const qlan::TemperatureProfile profile = qlan::solve_profile(model);
  std::string csv = qlan::csv_line({"position_m", "temperature_K"});
  for (std::size_t i = 0; i < profile.positions_m.size(); ++i) {
    csv += qlan::csv_line({qlan::format_number(profile.positions_m[i]),
                           qlan::format_number(profile.temperatures_k[i])});
  }
  if (out_path.empty()) out_path = stem_of(config_path) + "_profile.csv";
  qlan::write_file_atomic(out_path, csv);
  return kExitOk;
}

int cmd_fit(const std::string& data_path, const std::string& out_path) {
  std::ifstream in(data_path);
  if (!in) throw qlan::config_error("cannot open data file '" + data_path + "'");
  std::vector<double> xs, ys;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (char& ch : line) {
      if (ch == ',' || ch == '\t') ch = ' ';
    }
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;  // blank line
    if (first[0] == '#') continue;
    double x = 0.0, y = 0.0;
    std::string rest;
    try {
      std::size_t used = 0;
      x = std::stod(first, &used);
      if (used != first.size()) throw std::invalid_argument(first);
    } catch (const std::exception&) {
      throw qlan::config_error("line " + std::to_string(line_no) +
                               ": cannot parse '" + first + "'");
    }
    if (!(ss >> rest)) {
      throw qlan::config_error("line " + std::to_string(line_no) +
                               ": expected two columns");
    }
    try {
      std::size_t used = 0;
      y = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(rest);
    } catch (const std::exception&) {
      throw qlan::config_error("line " + std::to_string(line_no) +
                               ": cannot parse '" + rest + "'");
    }
    std::string extra;
    if (ss >> extra) {
      throw qlan::config_error("line " + std::to_string(line_no) +
                               ": expected exactly two columns");
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  const qlan::ResponseFit fit = qlan::fit_response(xs, ys);

  json out;
  out["a"] = fit.a;
  out["b"] = fit.b;
  out["c"] = fit.c;
  out["residual_rms_k"] = fit.residual_rms_k;
  out["n_points"] = xs.size();
  std::vector<std::string> outputs;
  if (!out_path.empty()) outputs.push_back(out_path);
  out["manifest"] =
      qlan::manifest_json(qlan::make_manifest("fit", data_path, outputs, 0));
  emit(out.dump(2) + "\n", out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"microwave QLAN cryolink simulator"};
  app.set_version_flag("--version", std::string("qlansim ") + qlan::kToolVersion);
  app.require_subcommand(1);

  auto* thresholds = app.add_subcommand(
      "thresholds", "thermal-channel threshold temperatures");
  double freq_ghz = 0.0;
  std::vector<double> at_kelvin;
  std::string thresholds_out;
  thresholds->add_option("--freq-ghz", freq_ghz, "signal frequency in GHz")
      ->required();
  thresholds->add_option("--at-kelvin", at_kelvin,
                         "also report n_th at these temperatures (K)");
  thresholds->add_option("--out", thresholds_out,
                         "write CSV here instead of stdout");

  auto* transfer =
      app.add_subcommand("transfer", "run a squeezed-state transfer");
  std::string transfer_config, transfer_prefix;
  transfer->add_option("--config", transfer_config, "experiment config JSON")
      ->required();
  transfer->add_option("--out-prefix", transfer_prefix,
                       "output prefix (default: <config stem>_transfer)");

  auto* sweep =
      app.add_subcommand("sweep", "sweep the link center temperature");
  std::string sweep_config, sweep_tlist, sweep_prefix;
  sweep->add_option("--config", sweep_config, "experiment config JSON")
      ->required();
  sweep->add_option("--t-list", sweep_tlist,
                    "comma-separated T_center values in K (overrides config)");
  sweep->add_option("--out-prefix", sweep_prefix,
                    "output prefix (default: <config stem>_sweep)");

  auto* heat = app.add_subcommand("heat", "solve the cable heat equation");
  std::string heat_config, heat_out;
  heat->add_option("--config", heat_config, "heat model config JSON")
      ->required();
  heat->add_option("--out", heat_out,
                   "profile CSV path (default: <config stem>_profile.csv)");

  auto* fit = app.add_subcommand("fit", "fit the temperature response model");
  std::string fit_data, fit_out;
  fit->add_option("--data", fit_data,
                  "two-column data file: T_center_K, measured_K")
      ->required();
  fit->add_option("--out", fit_out, "JSON output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (thresholds->parsed()) {
      return cmd_thresholds(freq_ghz, at_kelvin, thresholds_out);
    }
    if (transfer->parsed()) {
      return cmd_transfer(transfer_config, transfer_prefix);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_config, sweep_tlist, sweep_prefix);
    }
    if (heat->parsed()) return cmd_heat(heat_config, heat_out);
    if (fit->parsed()) return cmd_fit(fit_data, fit_out);
  } catch (const qlan::convergence_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitNoConvergence;
  } catch (const qlan::config_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return 1;
  }
  return kExitOk;
}
