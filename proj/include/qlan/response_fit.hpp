#pragma once

// Piecewise-linear temperature response with a sigmoid blend at 0.4 K:
//
//   f(T) = a T + b + (1 + tanh[4 (T - 0.4)])/2 * (c - a) * (T - 0.4)
//
// a is the low-T slope, c the high-T slope, b the offset. The model is
// linear in (a, b, c), so fitting is an exact linear least-squares problem.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qlan/errors.hpp"

namespace qlan {

inline constexpr double kResponseKneeK = 0.4;

struct ResponseFit {
  double a = 0.0;           // low-temperature slope, K/K
  double b = 0.0;           // offset, K
  double c = 0.0;           // high-temperature slope, K/K
  double residual_rms_k = 0.0;
};

namespace detail {

inline double sigmoid_blend(double t) {
  return 0.5 * (1.0 + std::tanh(4.0 * (t - kResponseKneeK)));
}

}  // namespace detail

inline double evaluate_fit(const ResponseFit& fit, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
  return fit.a * t + fit.b +
         detail::sigmoid_blend(t) * (fit.c - fit.a) * (t - kResponseKneeK);
}

// Least-squares estimate of (a, b, c) from (center temperature, measured
// temperature) pairs. Requires at least 4 points with data on both sides of
// the 0.4 K knee; one-sided data leaves the high-T slope unconstrained.
inline ResponseFit fit_response(const std::vector<double>& center_temps_k,
                                const std::vector<double>& measured_temps_k) {
  const std::size_t n = center_temps_k.size();
  if (n != measured_temps_k.size()) {
    throw config_error("fit input lists must have equal length");
  }
  if (n < 4) throw config_error("fit needs at least 4 data points");
  bool below = false, above = false;
  for (double t : center_temps_k) {
    if (t < kResponseKneeK) below = true;
    if (t > kResponseKneeK) above = true;
  }
  if (!below || !above) {
    throw config_error(
        "ill-conditioned fit: data must span both sides of 0.4 K");
  }

  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = center_temps_k[i];
    const double blend = detail::sigmoid_blend(t) * (t - kResponseKneeK);
    design(i, 0) = t - blend;  // coefficient of a
    design(i, 1) = 1.0;        // coefficient of b
    design(i, 2) = blend;      // coefficient of c
    y(i) = measured_temps_k[i];
  }
  const Eigen::Vector3d params = design.colPivHouseholderQr().solve(y);
  ResponseFit fit;
  fit.a = params(0);
  fit.b = params(1);
  fit.c = params(2);
  const Eigen::VectorXd residual = design * params - y;
  fit.residual_rms_k =
      std::sqrt(residual.squaredNorm() / static_cast<double>(n));
  return fit;
}

}  // namespace qlan
