#pragma once

// Scalar figures of merit for Gaussian states: squeezing level, purity,
// two-mode symplectic eigenvalues, and PPT negativity.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qlan/constants.hpp"
#include "qlan/gaussian_state.hpp"

namespace qlan {

// Block form of a two-mode covariance matrix, V = [[A, C], [C^T, B]].
struct TwoModeBlocks {
  Eigen::Matrix2d a;
  Eigen::Matrix2d b;
  Eigen::Matrix2d c;
};

inline TwoModeBlocks two_mode_blocks(const GaussianState& state) {
  if (state.n_modes() != 2) {
    throw std::invalid_argument("block form requires exactly two modes");
  }
  TwoModeBlocks blocks;
  blocks.a = state.covariance().block<2, 2>(0, 0);
  blocks.b = state.covariance().block<2, 2>(2, 2);
  blocks.c = state.covariance().block<2, 2>(0, 2);
  return blocks;
}

namespace detail {

// Smaller eigenvalue of a symmetric 2x2 matrix (rotation-invariant minimum
// quadrature variance of a mode block).
inline double min_eig_2x2(const Eigen::Matrix2d& m) {
  const double half_tr = 0.5 * (m(0, 0) + m(1, 1));
  const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
  return half_tr - std::sqrt(half_diff * half_diff + m(0, 1) * m(1, 0));
}

// nu = sqrt((delta - sqrt(delta^2 - 4 det V)) / 2) with guards for tiny
// negative discriminants from rounding.
inline std::pair<double, double> symplectic_pair(double delta, double det_v) {
  double disc = delta * delta - 4.0 * det_v;
  if (disc < -1e-12) {
    throw std::invalid_argument("invalid two-mode covariance (negative discriminant)");
  }
  disc = std::max(disc, 0.0);
  const double root = std::sqrt(disc);
  const double lo = std::max((delta - root) / 2.0, 0.0);
  const double hi = std::max((delta + root) / 2.0, 0.0);
  return {std::sqrt(hi), std::sqrt(lo)};
}

}  // namespace detail

// Squeezing level in dB: -10 log10(sigma_s^2 / 0.25), where sigma_s^2 is the
// minimum variance of the mode's 2x2 covariance block. Positive values mean
// squeezing below vacuum.
inline double squeezing_level(const GaussianState& state, int mode) {
  state.check_mode(mode);
  const double sigma_s = detail::min_eig_2x2(state.mode_block(mode));
  if (!(sigma_s > 0.0)) {
    throw std::invalid_argument("non-positive quadrature variance");
  }
  return -10.0 * std::log10(sigma_s / kVacuumVariance);
}

// Purity mu = (4^{2N} det V)^{-1/2}; equals 1/sqrt(16 det V) for N = 1.
inline double purity(const GaussianState& state) {
  const double det_v = state.covariance().determinant();
  if (!(det_v > 0.0)) {
    throw std::invalid_argument("covariance determinant must be positive");
  }
  const int n = state.n_modes();
  return 1.0 / std::sqrt(std::pow(4.0, 2 * n) * det_v);
}

// Symplectic eigenvalues (nu_+, nu_-) of a two-mode covariance matrix from
// the invariant Delta = det A + det B + 2 det C.
inline std::pair<double, double> symplectic_eigenvalues(
    const GaussianState& state) {
  const TwoModeBlocks blk = two_mode_blocks(state);
  const double delta = blk.a.determinant() + blk.b.determinant() +
                       2.0 * blk.c.determinant();
  return detail::symplectic_pair(delta, state.covariance().determinant());
}

// Minimum symplectic eigenvalue of the partial transpose, from the PPT
// invariant Delta~ = det A + det B - 2 det C. Values below 1/4 certify
// entanglement.
inline double pt_symplectic_min(const GaussianState& state) {
  const TwoModeBlocks blk = two_mode_blocks(state);
  const double delta = blk.a.determinant() + blk.b.determinant() -
                       2.0 * blk.c.determinant();
  return detail::symplectic_pair(delta, state.covariance().determinant())
      .second;
}

// Negativity N = max[0, (1 - 4 nu~_-)/(8 nu~_-)]. nu~_- is floored at 1e-12
// so that unphysical inputs cannot produce an infinite result.
inline double negativity(const GaussianState& state) {
  const double nu = std::max(pt_symplectic_min(state), 1e-12);
  return std::max(0.0, (1.0 - 4.0 * nu) / (8.0 * nu));
}

// Negativity of a lossless, noiseless split squeezed state as a function of
// the input squeezing level: N = max[(10^{S/10} - 1)/2, 0].
inline double negativity_from_squeezing(double s_db) {
  if (!std::isfinite(s_db)) {
    throw std::invalid_argument("squeezing level must be finite");
  }
  return std::max((std::pow(10.0, s_db / 10.0) - 1.0) / 2.0, 0.0);
}

// Everything the reporting layers need about a tapped state. Two-mode
// fields are NaN for single-mode states.
struct MetricReport {
  std::vector<double> squeezing_db;  // per mode
  std::vector<double> mode_purity;   // per reduced single mode
  double state_purity = 0.0;
  double nu_plus = std::numeric_limits<double>::quiet_NaN();
  double nu_minus = std::numeric_limits<double>::quiet_NaN();
  double pt_nu_minus = std::numeric_limits<double>::quiet_NaN();
  double neg = std::numeric_limits<double>::quiet_NaN();
  bool degenerate_pt = false;  // pt_nu_minus hit the 1e-12 floor
};

inline MetricReport metric_report(const GaussianState& state) {
  MetricReport rep;
  for (int m = 0; m < state.n_modes(); ++m) {
    rep.squeezing_db.push_back(squeezing_level(state, m));
    rep.mode_purity.push_back(purity(partial_trace(state, {m})));
  }
  rep.state_purity = purity(state);
  if (state.n_modes() == 2) {
    const auto nu = symplectic_eigenvalues(state);
    rep.nu_plus = nu.first;
    rep.nu_minus = nu.second;
    rep.pt_nu_minus = pt_symplectic_min(state);
    rep.degenerate_pt = rep.pt_nu_minus < 1e-12;
    rep.neg = negativity(state);
  }
  return rep;
}

}  // namespace qlan
