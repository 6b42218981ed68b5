#pragma once

// Seeded quadrature sampling of Gaussian states (emulating heterodyne
// acquisition) and empirical moment / cumulant estimation up to fourth
// order.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "qlan/gaussian_state.hpp"

namespace qlan {

// Rows are records (I_1, Q_1, ..., I_N, Q_N) in quadrature units.
struct QuadratureSamples {
  Eigen::MatrixXd data;
  std::uint64_t seed = 0;

  std::int64_t count() const { return data.rows(); }
  int n_vars() const { return static_cast<int>(data.cols()); }
};

namespace detail {

// Matrix square root factor L with L L^T = V. Cholesky when positive
// definite, eigendecomposition with clamped tiny negatives otherwise (the
// purity-1 edge can be semidefinite to rounding).
inline Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& v) {
  Eigen::LLT<Eigen::MatrixXd> llt(v);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v);
  Eigen::VectorXd lam = es.eigenvalues();
  for (int i = 0; i < lam.size(); ++i) {
    if (lam(i) < -1e-9) {
      throw std::invalid_argument("covariance is not positive semidefinite");
    }
    lam(i) = std::sqrt(std::max(lam(i), 0.0));
  }
  return es.eigenvectors() * lam.asDiagonal();
}

// Standard normal pairs via Box-Muller over mt19937_64. Hand-rolled so the
// stream does not depend on the standard library's distribution
// implementation.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : eng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform_open() {
    // in (0, 1]
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace detail

// Draws `count` records from the multivariate normal defined by the state.
// Deterministic for a fixed seed.
inline QuadratureSamples sample_quadratures(const GaussianState& state,
                                            std::int64_t count,
                                            std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  const int dim = 2 * state.n_modes();
  const Eigen::MatrixXd factor = detail::covariance_factor(state.covariance());
  detail::NormalStream normals(seed);
  QuadratureSamples samples;
  samples.seed = seed;
  samples.data.resize(count, dim);
  Eigen::VectorXd z(dim);
  for (std::int64_t row = 0; row < count; ++row) {
    for (int i = 0; i < dim; ++i) z(i) = normals.next();
    samples.data.row(row) =
        (state.displacement() + factor * z).transpose();
  }
  return samples;
}

inline Eigen::VectorXd sample_mean(const QuadratureSamples& samples) {
  if (samples.count() == 0) throw std::invalid_argument("empty sample set");
  return samples.data.colwise().mean();
}

inline Eigen::MatrixXd sample_covariance(const QuadratureSamples& samples) {
  if (samples.count() == 0) throw std::invalid_argument("empty sample set");
  const Eigen::MatrixXd centered =
      samples.data.rowwise() - samples.data.colwise().mean();
  return centered.transpose() * centered /
         static_cast<double>(samples.count());
}

// Raw moment table <x_1^{k_1} ... x_d^{k_d}> for all multi-indices with
// total order <= max_order.
struct MomentTable {
  int n_vars = 0;
  int max_order = 0;
  std::vector<std::vector<int>> indices;
  std::vector<double> values;

  double value(const std::vector<int>& exponents) const {
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] == exponents) return values[i];
    }
    throw std::invalid_argument("moment index not in table");
  }
};

namespace detail {

inline void enumerate_indices(int n_vars, int budget, std::vector<int>& cur,
                              std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n_vars) {
    out.push_back(cur);
    return;
  }
  for (int k = 0; k <= budget; ++k) {
    cur.push_back(k);
    enumerate_indices(n_vars, budget - k, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

inline MomentTable estimate_moments(const QuadratureSamples& samples,
                                    int max_order) {
  if (samples.count() == 0) throw std::invalid_argument("empty sample set");
  if (max_order < 1 || max_order > 4) {
    throw std::invalid_argument("max_order must be in [1,4]");
  }
  MomentTable table;
  table.n_vars = samples.n_vars();
  table.max_order = max_order;
  {
    std::vector<int> cur;
    detail::enumerate_indices(table.n_vars, max_order, cur, table.indices);
  }
  table.values.assign(table.indices.size(), 0.0);

  const int dim = table.n_vars;
  // per-sample powers x^0..x^max_order for each variable
  std::vector<double> powers(static_cast<std::size_t>(dim) * (max_order + 1));
  for (std::int64_t row = 0; row < samples.count(); ++row) {
    for (int v = 0; v < dim; ++v) {
      double* p = &powers[static_cast<std::size_t>(v) * (max_order + 1)];
      p[0] = 1.0;
      const double x = samples.data(row, v);
      for (int k = 1; k <= max_order; ++k) p[k] = p[k - 1] * x;
    }
    for (std::size_t i = 0; i < table.indices.size(); ++i) {
      double prod = 1.0;
      const std::vector<int>& exps = table.indices[i];
      for (int v = 0; v < dim; ++v) {
        prod *= powers[static_cast<std::size_t>(v) * (max_order + 1) +
                       exps[v]];
      }
      table.values[i] += prod;
    }
  }
  const double inv = 1.0 / static_cast<double>(samples.count());
  for (double& v : table.values) v *= inv;
  return table;
}

// Central moment <prod (x_i - mean_i)^{k_i}>.
inline double central_moment(const QuadratureSamples& samples,
                             const std::vector<int>& exponents) {
  if (samples.count() == 0) throw std::invalid_argument("empty sample set");
  if (static_cast<int>(exponents.size()) != samples.n_vars()) {
    throw std::invalid_argument("exponent list length must match variables");
  }
  const Eigen::VectorXd mean = sample_mean(samples);
  double acc = 0.0;
  for (std::int64_t row = 0; row < samples.count(); ++row) {
    double prod = 1.0;
    for (int v = 0; v < samples.n_vars(); ++v) {
      const double x = samples.data(row, v) - mean(v);
      for (int k = 0; k < exponents[v]; ++k) prod *= x;
    }
    acc += prod;
  }
  return acc / static_cast<double>(samples.count());
}

// Fourth-order joint cumulant
//   k4(i,j,k,l) = m(ijkl) - m(ij)m(kl) - m(ik)m(jl) - m(il)m(jk)
// with central moments m. Vanishes for Gaussian data.
inline double fourth_cumulant(const QuadratureSamples& samples, int i, int j,
                              int k, int l) {
  const int d = samples.n_vars();
  for (int idx : {i, j, k, l}) {
    if (idx < 0 || idx >= d) {
      throw std::invalid_argument("cumulant variable index out of range");
    }
  }
  auto exps = [&](std::initializer_list<int> vars) {
    std::vector<int> e(d, 0);
    for (int v : vars) e[v] += 1;
    return e;
  };
  const double m4 = central_moment(samples, exps({i, j, k, l}));
  const double mij = central_moment(samples, exps({i, j}));
  const double mkl = central_moment(samples, exps({k, l}));
  const double mik = central_moment(samples, exps({i, k}));
  const double mjl = central_moment(samples, exps({j, l}));
  const double mil = central_moment(samples, exps({i, l}));
  const double mjk = central_moment(samples, exps({j, k}));
  return m4 - mij * mkl - mik * mjl - mil * mjk;
}

// k4(i,i,i,i) / var_i^2; zero for Gaussian data.
inline double excess_kurtosis(const QuadratureSamples& samples, int var) {
  std::vector<int> e2(samples.n_vars(), 0);
  e2[var] = 2;
  const double variance = central_moment(samples, e2);
  if (!(variance > 0.0)) {
    throw std::invalid_argument("variance must be positive for kurtosis");
  }
  return fourth_cumulant(samples, var, var, var, var) /
         (variance * variance);
}

}  // namespace qlan
