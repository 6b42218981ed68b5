#pragma once

// N-mode Gaussian states in the quadrature representation and the channel
// operations used by the transfer pipeline: noisy single-mode squeezing,
// two-mode beam splitting, and thermal loss.
//
// Quadrature ordering is interleaved, R = (I_1, Q_1, ..., I_N, Q_N), so each
// mode owns a contiguous 2x2 block of the covariance matrix.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <variant>
#include <vector>

#include "qlan/constants.hpp"

namespace qlan {

// Block-diagonal symplectic form with 2x2 blocks [[0,1],[-1,0]].
inline Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int m = 0; m < n_modes; ++m) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }
  return omega;
}

// Real 2Nx2N matrix M with M Omega M^T = Omega. Carrier for the squeeze,
// rotation and beam-splitter maps.
class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(Eigen::MatrixXd m, double tol = 1e-10)
      : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() % 2 != 0) {
      throw std::invalid_argument("symplectic matrix must be square 2Nx2N");
    }
    const int n = static_cast<int>(matrix_.rows()) / 2;
    const Eigen::MatrixXd omega = symplectic_form(n);
    const double dev =
        (matrix_ * omega * matrix_.transpose() - omega).cwiseAbs().maxCoeff();
    if (dev > tol) {
      throw std::invalid_argument("matrix is not symplectic (|M Omega M^T - Omega| = " +
                                  std::to_string(dev) + ")");
    }
  }

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  int n_modes() const { return static_cast<int>(matrix_.rows()) / 2; }

  // Single-mode squeeze embedded in an N-mode identity. Variances scale by
  // e^{-2r} and e^{+2r} along axes rotated by theta.
  static SymplecticMatrix squeeze(int n_modes, int mode, double r,
                                  double theta) {
    Eigen::Matrix2d rot;
    rot << std::cos(theta), -std::sin(theta), std::sin(theta),
        std::cos(theta);
    Eigen::Matrix2d diag;
    diag << std::exp(-r), 0.0, 0.0, std::exp(r);
    Eigen::MatrixXd full =
        Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    full.block<2, 2>(2 * mode, 2 * mode) = rot * diag * rot.transpose();
    return SymplecticMatrix(std::move(full));
  }

  // Phase-space rotation of a single mode by phi.
  static SymplecticMatrix rotation(int n_modes, int mode, double phi) {
    Eigen::MatrixXd full =
        Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    Eigen::Matrix2d rot;
    rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    full.block<2, 2>(2 * mode, 2 * mode) = rot;
    return SymplecticMatrix(std::move(full));
  }

  // Two-mode mixer with amplitude coefficients sqrt(tau), sqrt(1-tau).
  // tau = 0.5 is the balanced (hybrid ring) case.
  static SymplecticMatrix beam_splitter(int n_modes, int mode_i, int mode_j,
                                        double tau) {
    const double t = std::sqrt(tau);
    const double rr = std::sqrt(1.0 - tau);
    Eigen::MatrixXd full =
        Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    const Eigen::Matrix2d id2 = Eigen::Matrix2d::Identity();
    full.block<2, 2>(2 * mode_i, 2 * mode_i) = t * id2;
    full.block<2, 2>(2 * mode_i, 2 * mode_j) = rr * id2;
    full.block<2, 2>(2 * mode_j, 2 * mode_i) = -rr * id2;
    full.block<2, 2>(2 * mode_j, 2 * mode_j) = t * id2;
    return SymplecticMatrix(std::move(full));
  }

 private:
  Eigen::MatrixXd matrix_;
};

// An N-mode Gaussian state: displacement vector d (length 2N) and symmetric
// covariance matrix V (2N x 2N), vacuum variance 1/4. Immutable once built;
// channel operations return new states.
class GaussianState {
 public:
  GaussianState(Eigen::VectorXd displacement, Eigen::MatrixXd covariance)
      : displacement_(std::move(displacement)),
        covariance_(std::move(covariance)) {
    if (covariance_.rows() != covariance_.cols() ||
        covariance_.rows() % 2 != 0 || covariance_.rows() == 0) {
      throw std::invalid_argument("covariance must be 2Nx2N, N >= 1");
    }
    if (displacement_.size() != covariance_.rows()) {
      throw std::invalid_argument(
          "displacement length must match covariance dimension");
    }
    if (!displacement_.allFinite() || !covariance_.allFinite()) {
      throw std::invalid_argument("state entries must be finite");
    }
    const double asym =
        (covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10) {
      throw std::invalid_argument("covariance asymmetry exceeds 1e-10");
    }
    symmetrize();
  }

  static GaussianState vacuum(int n_modes) {
    return GaussianState(
        Eigen::VectorXd::Zero(2 * n_modes),
        kVacuumVariance *
            Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
  }

  int n_modes() const { return static_cast<int>(covariance_.rows()) / 2; }
  const Eigen::VectorXd& displacement() const { return displacement_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }

  // 2x2 covariance block of one mode.
  Eigen::Matrix2d mode_block(int mode) const {
    check_mode(mode);
    return covariance_.block<2, 2>(2 * mode, 2 * mode);
  }

  // Symplectic eigenvalues: moduli of the eigenvalues of i*Omega*V, one per
  // mode. Physical states have all of them >= 1/4.
  std::vector<double> symplectic_spectrum() const {
    const Eigen::MatrixXd m = symplectic_form(n_modes()) * covariance_;
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
    std::vector<double> nu;
    for (int i = 0; i < m.rows(); ++i) {
      const double v = std::abs(solver.eigenvalues()(i).imag());
      nu.push_back(v);
    }
    // eigenvalues come in +/- i*nu pairs; keep one of each
    std::sort(nu.begin(), nu.end());
    std::vector<double> out;
    for (std::size_t i = nu.size() / 2; i < nu.size(); ++i) out.push_back(nu[i]);
    return out;
  }

  // Heisenberg check: min symplectic eigenvalue >= 1/4 - tol.
  bool is_physical(double tol = 1e-9) const {
    const auto nu = symplectic_spectrum();
    for (double v : nu) {
      if (v < kVacuumVariance - tol) return false;
    }
    return true;
  }

  GaussianState transformed(const SymplecticMatrix& s) const {
    if (s.n_modes() != n_modes()) {
      throw std::invalid_argument("symplectic size does not match state");
    }
    const Eigen::MatrixXd& m = s.matrix();
    return GaussianState(m * displacement_,
                         m * covariance_ * m.transpose());
  }

  void check_mode(int mode) const {
    if (mode < 0 || mode >= n_modes()) {
      throw std::invalid_argument("mode index out of range");
    }
  }

 private:
  void symmetrize() {
    covariance_ = 0.5 * (covariance_ + covariance_.transpose()).eval();
  }

  Eigen::VectorXd displacement_;
  Eigen::MatrixXd covariance_;
};

// Thermal product state with n_th[i] photons in mode i; both quadrature
// variances of mode i equal (1 + 2 n_th)/4.
inline GaussianState make_thermal_state(int n_modes,
                                        const std::vector<double>& photons) {
  if (n_modes < 1) throw std::invalid_argument("n_modes must be >= 1");
  if (static_cast<int>(photons.size()) != n_modes) {
    throw std::invalid_argument("photon list length must equal n_modes");
  }
  Eigen::MatrixXd cov =
      Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int m = 0; m < n_modes; ++m) {
    if (!(photons[m] >= 0.0)) {
      throw std::invalid_argument("thermal photon number must be >= 0");
    }
    const double v = (1.0 + 2.0 * photons[m]) * kVacuumVariance;
    cov(2 * m, 2 * m) = v;
    cov(2 * m + 1, 2 * m + 1) = v;
  }
  return GaussianState(Eigen::VectorXd::Zero(2 * n_modes), std::move(cov));
}

// Ideal squeeze followed by symmetric added noise of n_added photons on the
// same mode (noisy squeezer model; n_added = 0 recovers the unitary case).
inline GaussianState apply_squeeze(const GaussianState& state, int mode,
                                   double r, double theta, double n_added) {
  state.check_mode(mode);
  if (!(r >= 0.0)) throw std::invalid_argument("squeeze factor r must be >= 0");
  if (!(n_added >= 0.0)) {
    throw std::invalid_argument("n_added must be >= 0");
  }
  GaussianState out = state.transformed(
      SymplecticMatrix::squeeze(state.n_modes(), mode, r, theta));
  if (n_added == 0.0) return out;
  Eigen::MatrixXd cov = out.covariance();
  cov(2 * mode, 2 * mode) += 0.5 * n_added;
  cov(2 * mode + 1, 2 * mode + 1) += 0.5 * n_added;
  return GaussianState(out.displacement(), std::move(cov));
}

inline GaussianState apply_rotation(const GaussianState& state, int mode,
                                    double phi) {
  state.check_mode(mode);
  return state.transformed(
      SymplecticMatrix::rotation(state.n_modes(), mode, phi));
}

inline GaussianState apply_beam_splitter(const GaussianState& state,
                                         int mode_i, int mode_j, double tau) {
  state.check_mode(mode_i);
  state.check_mode(mode_j);
  if (mode_i == mode_j) {
    throw std::invalid_argument("beam splitter needs two distinct modes");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("transmissivity tau must be in [0,1]");
  }
  return state.transformed(
      SymplecticMatrix::beam_splitter(state.n_modes(), mode_i, mode_j, tau));
}

// Beam-splitter coupling of one mode to a thermal environment with n_env
// photons: v -> (1-eps) v + eps (1+2 n_env)/4 on the mode's block,
// cross-covariances and displacement scale by sqrt(1-eps).
inline GaussianState apply_loss(const GaussianState& state, int mode,
                                double eps, double n_env) {
  state.check_mode(mode);
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("loss eps must be in [0,1]");
  }
  if (!(n_env >= 0.0)) throw std::invalid_argument("n_env must be >= 0");
  const int dim = 2 * state.n_modes();
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(dim, dim);
  const double scale = std::sqrt(1.0 - eps);
  x(2 * mode, 2 * mode) = scale;
  x(2 * mode + 1, 2 * mode + 1) = scale;
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(dim, dim);
  const double env = eps * (1.0 + 2.0 * n_env) * kVacuumVariance;
  y(2 * mode, 2 * mode) = env;
  y(2 * mode + 1, 2 * mode + 1) = env;
  return GaussianState(x * state.displacement(),
                       x * state.covariance() * x.transpose() + y);
}

// Reduced state over keep_modes, in the order given.
inline GaussianState partial_trace(const GaussianState& state,
                                   const std::vector<int>& keep_modes) {
  if (keep_modes.empty()) {
    throw std::invalid_argument("keep_modes must be non-empty");
  }
  for (int m : keep_modes) state.check_mode(m);
  for (std::size_t i = 0; i < keep_modes.size(); ++i) {
    for (std::size_t j = i + 1; j < keep_modes.size(); ++j) {
      if (keep_modes[i] == keep_modes[j]) {
        throw std::invalid_argument("keep_modes has duplicates");
      }
    }
  }
  const int n_out = static_cast<int>(keep_modes.size());
  Eigen::VectorXd d(2 * n_out);
  Eigen::MatrixXd v(2 * n_out, 2 * n_out);
  for (int a = 0; a < n_out; ++a) {
    d.segment<2>(2 * a) = state.displacement().segment<2>(2 * keep_modes[a]);
    for (int b = 0; b < n_out; ++b) {
      v.block<2, 2>(2 * a, 2 * b) =
          state.covariance().block<2, 2>(2 * keep_modes[a],
                                         2 * keep_modes[b]);
    }
  }
  return GaussianState(std::move(d), std::move(v));
}

// --- channel elements -------------------------------------------------

struct SqueezeOp {
  int mode;
  double r;        // dimensionless squeeze factor, >= 0
  double theta;    // squeezing axis, radians
  double n_added;  // symmetric added noise, photons
};

struct BeamSplitterOp {
  int mode_i;
  int mode_j;
  double tau;  // power transmissivity in [0,1]
};

struct LossOp {
  int mode;
  double eps;    // linear loss in [0,1]
  double n_env;  // environment photons
};

using ChannelElement = std::variant<SqueezeOp, BeamSplitterOp, LossOp>;

inline GaussianState apply_channel(const GaussianState& state,
                                   const ChannelElement& elem) {
  return std::visit(
      [&](const auto& op) -> GaussianState {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, SqueezeOp>) {
          return apply_squeeze(state, op.mode, op.r, op.theta, op.n_added);
        } else if constexpr (std::is_same_v<T, BeamSplitterOp>) {
          return apply_beam_splitter(state, op.mode_i, op.mode_j, op.tau);
        } else {
          return apply_loss(state, op.mode, op.eps, op.n_env);
        }
      },
      elem);
}

inline GaussianState apply_chain(GaussianState state,
                                 const std::vector<ChannelElement>& chain) {
  for (const auto& elem : chain) state = apply_channel(state, elem);
  return state;
}

}  // namespace qlan
