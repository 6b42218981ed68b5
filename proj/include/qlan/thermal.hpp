#pragma once

// Planck occupations, threshold temperatures of the thermal microwave
// channel, and the fluctuation-dissipation voltage-variance integral with a
// superconducting dissipation model.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <variant>

#include "qlan/constants.hpp"
#include "qlan/errors.hpp"

namespace qlan {

struct ThermalContext {
  double frequency_hz;   // ordinary frequency f; omega = 2 pi f
  double temperature_k;
};

// Mean thermal photon number n_th = 1/(exp(hf/kT) - 1); 0 at T = 0 by
// continuous extension.
inline double planck_occupation(double frequency_hz, double temperature_k) {
  if (!(frequency_hz > 0.0)) {
    throw std::invalid_argument("frequency must be > 0");
  }
  if (!(temperature_k >= 0.0)) {
    throw std::invalid_argument("temperature must be >= 0");
  }
  if (temperature_k == 0.0) return 0.0;
  const double x = kPlanck * frequency_hz / (kBoltzmann * temperature_k);
  return 1.0 / std::expm1(x);
}

namespace detail {

// Sign of d^3 n_th / dT^3 at fixed frequency. With u = hf/(kB T) the third
// derivative equals u^4 csch^2(u/2)/(4 c^3) * F(u), c = hf/kB, so only
//   F(u) = 6 - 6 u coth(u/2) + u^2 (coth^2(u/2) + csch^2(u/2)/2)
// decides the sign. F < 0 at small u, F > 0 at large u.
inline double planck_d3_sign_fn(double u) {
  const double s = std::sinh(0.5 * u);
  const double coth = std::cosh(0.5 * u) / s;
  const double csch2 = 1.0 / (s * s);
  return 6.0 - 6.0 * u * coth + u * u * (coth * coth + 0.5 * csch2);
}

}  // namespace detail

// Temperature of maximal curvature of the Planck curve, the root of
// d^3 n_th/dT^3 = 0. Scale-invariant: T_kappa = x* hf/kB with
// x* = 0.22266 (the 0.22 of common usage is this coefficient rounded).
inline double threshold_kappa(double frequency_hz) {
  if (!(frequency_hz > 0.0)) {
    throw std::invalid_argument("frequency must be > 0");
  }
  const double c = kPlanck * frequency_hz / kBoltzmann;  // hf/kB in K
  // bracket in T: [0.05, 1.0] * hf/kB, i.e. u in [1, 20]
  double t_lo = 0.05 * c;
  double t_hi = 1.0 * c;
  double f_lo = detail::planck_d3_sign_fn(c / t_lo);
  double f_hi = detail::planck_d3_sign_fn(c / t_hi);
  if (f_lo * f_hi > 0.0) {
    throw convergence_error("threshold_kappa: no sign change in bracket");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (t_lo + t_hi);
    const double f_mid = detail::planck_d3_sign_fn(c / mid);
    if (f_mid == 0.0) return mid;
    if (f_mid * f_lo > 0.0) {
      t_lo = mid;
      f_lo = f_mid;
    } else {
      t_hi = mid;
    }
    if ((t_hi - t_lo) / t_hi < 1e-14) break;
  }
  return 0.5 * (t_lo + t_hi);
}

// Crossover between quantum and classical noise regimes, hf/(2 kB).
inline double crossover_temperature(double frequency_hz) {
  if (!(frequency_hz > 0.0)) {
    throw std::invalid_argument("frequency must be > 0");
  }
  return kPlanck * frequency_hz / (2.0 * kBoltzmann);
}

// Temperature where a channel bath carries one photon, hf/(kB ln 2); above
// it an injected-noise channel suffers sudden death of entanglement.
inline double sudden_death_temperature(double frequency_hz) {
  if (!(frequency_hz > 0.0)) {
    throw std::invalid_argument("frequency must be > 0");
  }
  return kPlanck * frequency_hz / (kBoltzmann * std::log(2.0));
}

// Largest input-line temperature that still allows squeezing below vacuum
// at a balanced splitter output (n_th <= 1/2): hf/(kB ln 3).
inline double max_input_temperature_for_squeezing(double frequency_hz) {
  if (!(frequency_hz > 0.0)) {
    throw std::invalid_argument("frequency must be > 0");
  }
  return kPlanck * frequency_hz / (kBoltzmann * std::log(3.0));
}

// Dissipation spectrum eps(omega) entering the fluctuation-dissipation
// integral. The superconducting kind is the BCS-style exponential
// suppression exp(-h f_gap / (2 kB T)) with a temperature-independent gap
// Delta = hbar omega_gap / 2; it is flat across the narrow signal band.
struct ConstantDissipation {
  double eps0;
};

struct SuperconductingDissipation {
  double prefactor;
  double gap_frequency_hz;  // omega_gap / 2 pi, e.g. 370 GHz for NbTi
  double temperature_k;
};

using DissipationSpectrum =
    std::variant<ConstantDissipation, SuperconductingDissipation>;

// eps(omega) of the suppressed superconducting surface resistance. Valid
// well below the gap frequency.
inline double superconducting_dissipation(double frequency_hz,
                                          double temperature_k,
                                          double gap_frequency_hz,
                                          double prefactor) {
  if (!(frequency_hz > 0.0) || !(gap_frequency_hz > 0.0)) {
    throw std::invalid_argument("frequencies must be > 0");
  }
  if (frequency_hz >= gap_frequency_hz) {
    throw std::invalid_argument(
        "dissipation model requires frequency below the gap frequency");
  }
  if (!(temperature_k > 0.0)) {
    throw std::invalid_argument("temperature must be > 0");
  }
  if (!(prefactor >= 0.0)) {
    throw std::invalid_argument("prefactor must be >= 0");
  }
  // hbar omega_gap / 2 = h f_gap / 2
  const double exponent =
      kPlanck * gap_frequency_hz / (2.0 * kBoltzmann * temperature_k);
  return prefactor * std::exp(-exponent);
}

inline double evaluate_dissipation(const DissipationSpectrum& spectrum,
                                   double omega_rad_s) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantDissipation>) {
          if (!(s.eps0 >= 0.0)) {
            throw std::invalid_argument("eps0 must be >= 0");
          }
          return s.eps0;
        } else {
          return superconducting_dissipation(
              omega_rad_s / (2.0 * kPi), s.temperature_k,
              s.gap_frequency_hz, s.prefactor);
        }
      },
      spectrum);
}

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double fa, double fm,
                               double fb, double whole, double rel_tol,
                               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <=
      15.0 * (rel_tol * std::abs(left + right) + 1e-300)) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    throw convergence_error("fdt quadrature did not converge");
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, rel_tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, rel_tol, depth - 1);
}

}  // namespace detail

// Voltage-fluctuation variance over the band [omega0 - B, omega0 + B]
// (angular frequencies, rad/s):
//   <V^2> = 2 hbar Int coth(hbar omega / (2 kB T)) eps(omega) d omega.
// Units are normalized; the spectrum prefactor absorbs geometry and
// impedance. Adaptive quadrature to relative tolerance 1e-8.
inline double fdt_voltage_variance(double center_temperature_k,
                                   const DissipationSpectrum& spectrum,
                                   double center_omega_rad_s,
                                   double half_bandwidth_rad_s,
                                   double rel_tol = 1e-8) {
  if (!(half_bandwidth_rad_s > 0.0)) {
    throw std::invalid_argument("half bandwidth must be > 0");
  }
  const double a = center_omega_rad_s - half_bandwidth_rad_s;
  const double b = center_omega_rad_s + half_bandwidth_rad_s;
  if (!(a > 0.0)) {
    throw std::invalid_argument("integration band must be positive");
  }
  if (!(center_temperature_k >= 0.0)) {
    throw std::invalid_argument("temperature must be >= 0");
  }
  const auto integrand = [&](double omega) {
    double coth = 1.0;  // T -> 0 limit
    if (center_temperature_k > 0.0) {
      const double x =
          kHbar * omega / (2.0 * kBoltzmann * center_temperature_k);
      coth = 1.0 / std::tanh(x);
    }
    return coth * evaluate_dissipation(spectrum, omega);
  };
  const double fa = integrand(a);
  const double fb = integrand(b);
  const double fm = integrand(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double integral =
      detail::adaptive_simpson(integrand, a, b, fa, fm, fb, whole, rel_tol, 48);
  return 2.0 * kHbar * integral;
}

}  // namespace qlan
