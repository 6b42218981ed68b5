#pragma once

// Physical constants (CODATA 2018 / SI 2019 exact values) and unit
// conventions shared by all modules. Temperatures in K, frequencies in Hz
// unless a parameter name says otherwise.

namespace qlan {

inline constexpr double kPlanck = 6.62607015e-34;         // J s (exact)
inline constexpr double kBoltzmann = 1.380649e-23;        // J/K (exact)
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHbar = kPlanck / (2.0 * kPi);    // J s
inline constexpr double kStefanBoltzmann = 5.670374419e-8;  // W/(m^2 K^4)

// Vacuum quadrature variance. All squeezing levels in dB are
// -10*log10(variance / kVacuumVariance).
inline constexpr double kVacuumVariance = 0.25;

}  // namespace qlan
