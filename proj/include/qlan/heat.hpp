#pragma once

// Quasi-1D steady-state heat equation for the superconducting cable / MC
// tube system:
//
//   -d/dx( lambda(T) A dT/dx ) = q_coupling + q_radiation + q_heater
//
// with Dirichlet boundaries. Axial conduction is carried by the silver
// thermal straps (the NbTi cable itself conducts negligibly); the cable
// exchanges heat with the MC tube through a distributed linear conductance
// and gray-body radiation, and local heating enters as a Gaussian bump
// normalized to the set power.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlan/constants.hpp"
#include "qlan/errors.hpp"

namespace qlan {

// lambda_Ag(T) = kappa0 * T, the low-temperature metallic law. kappa0 is a
// config parameter; 100 W/(m K^2) is a plausible annealed-silver default.
inline double silver_conductivity(double temperature_k,
                                  double kappa0 = 100.0) {
  if (!(temperature_k > 0.0)) {
    throw std::invalid_argument("temperature must be > 0");
  }
  return kappa0 * temperature_k;
}

struct HeatModel {
  double length_m = 6.0;
  int grid_points = 2001;
  double boundary_left_k = 0.035;
  double boundary_right_k = 0.021;

  // axial conduction: lambda(T) = kappa0*T, or a constant lambda
  enum class Conductivity { kLinearInT, kConstant };
  Conductivity conductivity = Conductivity::kLinearInT;
  double kappa0_w_per_m_k2 = 100.0;
  double constant_lambda_w_per_m_k = 10.0;
  double wire_cross_section_m2 = 4.0e-6;

  // distributed loads
  double tube_temperature_k = 0.052;
  double tube_coupling_w_per_m_k = 2.0e-7;       // g * (T_tube - T)
  double radiative_coeff_w_per_m_k4 = 5.7e-11;   // sigma*e_eff*P lumped

  // local heating / external leak, Gaussian bump carrying heater_power_w
  double heater_position_m = 3.0;
  double heater_power_w = 0.0;
  double heater_width_m = 1.5;

  // solver
  double relaxation = 0.7;
  double tolerance_k = 1e-6;
  int max_iterations = 500;

  double axial_lambda(double t) const {
    return conductivity == Conductivity::kLinearInT
               ? silver_conductivity(t, kappa0_w_per_m_k2)
               : constant_lambda_w_per_m_k;
  }

  void validate() const {
    if (grid_points < 3) throw config_error("grid_points must be >= 3");
    if (!(length_m > 0.0)) throw config_error("length_m must be > 0");
    if (!(boundary_left_k > 0.0) || !(boundary_right_k > 0.0)) {
      throw config_error("boundary temperatures must be > 0");
    }
    if (!(wire_cross_section_m2 > 0.0)) {
      throw config_error("wire_cross_section_m2 must be > 0");
    }
    if (!(tube_temperature_k > 0.0)) {
      throw config_error("tube_temperature_k must be > 0");
    }
    if (tube_coupling_w_per_m_k < 0.0 || radiative_coeff_w_per_m_k4 < 0.0 ||
        heater_power_w < 0.0) {
      throw config_error("load coefficients must be >= 0");
    }
    if (!(heater_width_m > 0.0)) {
      throw config_error("heater_width_m must be > 0");
    }
    if (!(relaxation > 0.0 && relaxation <= 1.0)) {
      throw config_error("relaxation must be in (0,1]");
    }
    if (!(tolerance_k > 0.0) || max_iterations < 1) {
      throw config_error("invalid solver settings");
    }
    if (!std::isfinite(heater_power_w) ||
        !std::isfinite(tube_coupling_w_per_m_k) ||
        !std::isfinite(radiative_coeff_w_per_m_k4)) {
      throw config_error("loads must be finite");
    }
  }
};

struct TemperatureProfile {
  std::vector<double> positions_m;
  std::vector<double> temperatures_k;
  bool converged = false;
  int iterations = 0;

  // linear interpolation, clamped at the ends
  double at(double x) const {
    if (positions_m.size() < 2) return temperatures_k.front();
    if (x <= positions_m.front()) return temperatures_k.front();
    if (x >= positions_m.back()) return temperatures_k.back();
    const double h = positions_m[1] - positions_m[0];
    const std::size_t i = static_cast<std::size_t>((x - positions_m[0]) / h);
    const std::size_t j = std::min(i + 1, positions_m.size() - 1);
    const double w = (x - positions_m[i]) / h;
    return (1.0 - w) * temperatures_k[i] + w * temperatures_k[j];
  }
};

namespace detail {

// Thomas algorithm for a tridiagonal system.
inline std::vector<double> solve_tridiagonal(std::vector<double> sub,
                                             std::vector<double> diag,
                                             std::vector<double> sup,
                                             std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
  }
  return x;
}

// Picard iteration: conduction (with lambda frozen at the previous iterate)
// and the linear tube coupling are implicit, radiation is explicit,
// under-relaxed updates. pinned_center, when >= 0, adds an interior
// Dirichlet node at the grid point nearest length/2 (models a PID heater
// stabilizing the center temperature).
inline TemperatureProfile solve_profile_impl(const HeatModel& model,
                                             double pinned_center) {
  model.validate();
  const int n = model.grid_points;
  const double h = model.length_m / (n - 1);
  const double area = model.wire_cross_section_m2;

  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = i * h;

  // heater bump normalized on the grid so the row sums to the set power
  std::vector<double> q_heater(n, 0.0);
  if (model.heater_power_w > 0.0) {
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dxp = (x[i] - model.heater_position_m) / model.heater_width_m;
      q_heater[i] = std::exp(-0.5 * dxp * dxp);
      norm += q_heater[i] * h;
    }
    for (int i = 0; i < n; ++i) {
      q_heater[i] *= model.heater_power_w / norm;
    }
  }

  const int center_idx = (n - 1) / 2;
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) {
    const double w = static_cast<double>(i) / (n - 1);
    t[i] = (1.0 - w) * model.boundary_left_k + w * model.boundary_right_k;
  }
  if (pinned_center > 0.0) t[center_idx] = pinned_center;

  const double g = model.tube_coupling_w_per_m_k;
  const double crad = model.radiative_coeff_w_per_m_k4;
  const double t_tube = model.tube_temperature_k;
  const double tube4 = t_tube * t_tube * t_tube * t_tube;

  TemperatureProfile profile;
  profile.positions_m = x;

  for (int it = 1; it <= model.max_iterations; ++it) {
    std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(n, 0.0);
    diag[0] = 1.0;
    rhs[0] = model.boundary_left_k;
    diag[n - 1] = 1.0;
    rhs[n - 1] = model.boundary_right_k;
    for (int i = 1; i < n - 1; ++i) {
      const double lam_w = 0.5 * (model.axial_lambda(t[i - 1]) +
                                  model.axial_lambda(t[i])) * area;
      const double lam_e = 0.5 * (model.axial_lambda(t[i]) +
                                  model.axial_lambda(t[i + 1])) * area;
      sub[i] = -lam_w / (h * h);
      sup[i] = -lam_e / (h * h);
      diag[i] = (lam_w + lam_e) / (h * h) + g;
      const double t4 = t[i] * t[i] * t[i] * t[i];
      rhs[i] = q_heater[i] + g * t_tube + crad * (tube4 - t4);
    }
    if (pinned_center > 0.0) {
      sub[center_idx] = sup[center_idx] = 0.0;
      diag[center_idx] = 1.0;
      rhs[center_idx] = pinned_center;
    }
    const std::vector<double> t_solved =
        solve_tridiagonal(sub, diag, sup, rhs);
    double max_change = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t_new =
          model.relaxation * t_solved[i] + (1.0 - model.relaxation) * t[i];
      max_change = std::max(max_change, std::abs(t_new - t[i]));
      t[i] = t_new;
      if (!(t[i] > 0.0)) {
        throw std::invalid_argument(
            "non-positive temperature iterate at x = " +
            std::to_string(x[i]) + " m (unphysical load)");
      }
    }
    if (max_change < model.tolerance_k) {
      profile.temperatures_k = t;
      profile.converged = true;
      profile.iterations = it;
      return profile;
    }
  }
  throw convergence_error("heat solver did not reach " +
                          std::to_string(model.tolerance_k) + " K in " +
                          std::to_string(model.max_iterations) +
                          " iterations");
}

}  // namespace detail

inline TemperatureProfile solve_profile(const HeatModel& model) {
  return detail::solve_profile_impl(model, -1.0);
}

// Profile with the center grid point held at t_center_k (PID-stabilized
// heater); used to weight the cable loss against the local temperature.
inline TemperatureProfile solve_profile_pinned_center(const HeatModel& model,
                                                      double t_center_k) {
  if (!(t_center_k > 0.0)) {
    throw std::invalid_argument("pinned center temperature must be > 0");
  }
  return detail::solve_profile_impl(model, t_center_k);
}

}  // namespace qlan
