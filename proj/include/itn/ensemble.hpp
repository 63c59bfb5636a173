#pragma once

// Closed-form mathematics of the factorized weighted exponential random graph
// ensemble, P(G) ∝ exp(-sum_{i != j} theta_ij w_ij) with theta_ij = theta_i theta_j.
//
// Everything here is a pure function of EnsembleParams. Functions are
// templated on the scalar type; `double` is what the pipeline uses.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "itn/error.hpp"
#include "itn/ingest.hpp"

namespace itn {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Fitted per-node fields for one year.
template <typename Scalar = double>
struct EnsembleParams {
  int year = 0;
  std::vector<std::string> countries;
  Vec<Scalar> gdp;    // x_i, millions USD
  Vec<Scalar> theta;  // theta_i
  Scalar total_trade = 0;  // T
  Scalar total_gdp = 0;    // X

  Eigen::Index size() const { return theta.size(); }

  /// GDP shares xi_i = x_i / X.
  Vec<Scalar> shares() const { return gdp / total_gdp; }
};

/// Field conjugate to one directed link, in absolute and relative variables.
template <typename Scalar = double>
struct PairField {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  Scalar theta_ij = 0;
  Scalar eta_ij = 0;  // T * theta_ij = 1 / (xi_i xi_j)
};

/// theta_i = X / (sqrt(T) x_i) from GDPs and total trade alone.
template <typename Scalar = double>
EnsembleParams<Scalar> fit_params(int year, std::vector<std::string> countries, const Vec<Scalar>& gdp,
                                  Scalar total_trade) {
  using std::sqrt;
  if (gdp.size() == 0) throw DataError("fit: no countries");
  if (!(total_trade > Scalar(0))) throw DataError("fit: total trade must be positive");
  for (Eigen::Index i = 0; i < gdp.size(); ++i) {
    if (!(gdp[i] > Scalar(0))) throw ValueError("fit: nonpositive GDP at index " + std::to_string(i));
  }
  EnsembleParams<Scalar> p;
  p.year = year;
  p.countries = std::move(countries);
  p.gdp = gdp;
  p.total_trade = total_trade;
  p.total_gdp = gdp.sum();
  p.theta = (p.total_gdp / sqrt(total_trade)) * gdp.cwiseInverse();
  return p;
}

inline EnsembleParams<double> fit_params(const Snapshot& snapshot) {
  return fit_params<double>(snapshot.year(), snapshot.countries(), snapshot.gdp(), snapshot.total_trade());
}

/// |sum_i 1/theta_i - sqrt(T)| / sqrt(T); zero up to rounding for fitted params.
template <typename Scalar>
Scalar fit_residual(const EnsembleParams<Scalar>& p) {
  using std::abs;
  using std::sqrt;
  const Scalar root = sqrt(p.total_trade);
  return abs(p.theta.cwiseInverse().sum() - root) / root;
}

template <typename Scalar>
PairField<Scalar> pair_field(const EnsembleParams<Scalar>& p, Eigen::Index i, Eigen::Index j) {
  const Scalar theta_ij = p.theta[i] * p.theta[j];
  return {i, j, theta_ij, p.total_trade * theta_ij};
}

/// <w_ij> = 1 / (theta_i theta_j). Throws on i == j.
template <typename Scalar>
Scalar expected_weight(const EnsembleParams<Scalar>& p, Eigen::Index i, Eigen::Index j) {
  if (i == j) throw ValueError("expected_weight: no self-trade (i == j)");
  if (i < 0 || j < 0 || i >= p.size() || j >= p.size()) throw ValueError("expected_weight: index out of range");
  return Scalar(1) / (p.theta[i] * p.theta[j]);
}

/// Dense matrix of <w_ij>, zero diagonal.
template <typename Scalar>
Mat<Scalar> expected_weights(const EnsembleParams<Scalar>& p) {
  const Vec<Scalar> inv = p.theta.cwiseInverse();
  Mat<Scalar> m = inv * inv.transpose();
  m.diagonal().setZero();
  return m;
}

/// <v_ij> = <w_ij> / T = xi_i xi_j.
template <typename Scalar>
Scalar expected_share(const EnsembleParams<Scalar>& p, Eigen::Index i, Eigen::Index j) {
  return expected_weight(p, i, j) / p.total_trade;
}

/// (<s_out>, <s_in>) summed over j != i. Both vectors are equal, and equal
/// (T/X) x_i (1 - xi_i): the self-pair is excluded, so proportionality to x_i
/// carries a relative deviation of xi_i.
template <typename Scalar>
std::pair<Vec<Scalar>, Vec<Scalar>> expected_strengths(const EnsembleParams<Scalar>& p) {
  const Vec<Scalar> inv = p.theta.cwiseInverse();
  const Scalar total = inv.sum();
  Vec<Scalar> out(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) out[i] = inv[i] * (total - inv[i]);
  return {out, out};
}

namespace detail {

template <typename Derived, typename Fn>
void for_each_offdiag(const Eigen::MatrixBase<Derived>& m, Fn&& fn) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j)
        fn(i, j, m(i, j));
      else if (m(i, j) != 0)
        throw ValueError("weights: nonzero diagonal");
}

template <typename Derived, typename Fn>
void for_each_offdiag(const Eigen::SparseMatrixBase<Derived>& m, Fn&& fn) {
  const Derived& d = m.derived();
  for (Eigen::Index k = 0; k < d.outerSize(); ++k)
    for (typename Derived::InnerIterator it(d, k); it; ++it)
      if (it.row() != it.col())
        fn(it.row(), it.col(), it.value());
      else if (it.value() != 0)
        throw ValueError("weights: nonzero diagonal");
}

template <typename Derived>
void check_dims(const Eigen::EigenBase<Derived>& m, Eigen::Index n) {
  if (m.rows() != n || m.cols() != n) throw ValueError("hamiltonian: dimension mismatch");
}

}  // namespace detail

/// H = sum_{i != j} theta_i theta_j w_ij. Accepts dense or sparse weights.
template <typename Scalar, typename Weights>
Scalar hamiltonian(const Weights& w, const EnsembleParams<Scalar>& p) {
  detail::check_dims(w, p.size());
  Scalar h = 0;
  detail::for_each_offdiag(w, [&](Eigen::Index i, Eigen::Index j, auto value) {
    h += p.theta[i] * p.theta[j] * Scalar(value);
  });
  return h;
}

/// H = sum_{i != j} eta_ij v_ij on relative weights v = w / T.
template <typename Scalar, typename Shares>
Scalar hamiltonian_relative(const Shares& v, const EnsembleParams<Scalar>& p) {
  detail::check_dims(v, p.size());
  const Vec<Scalar> xi = p.shares();
  Scalar h = 0;
  detail::for_each_offdiag(v, [&](Eigen::Index i, Eigen::Index j, auto value) {
    h += Scalar(value) / (xi[i] * xi[j]);
  });
  return h;
}

/// ln Z = -sum_{i != j} ln theta_ij, in the log domain.
template <typename Scalar>
Scalar log_partition(const EnsembleParams<Scalar>& p) {
  using std::log;
  // sum_{i != j} (ln theta_i + ln theta_j) = 2 (N - 1) sum_i ln theta_i
  Scalar s = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) s += log(p.theta[i]);
  return -Scalar(2) * Scalar(p.size() - 1) * s;
}

/// Exponential link law theta e^{-theta w}. Throws on w < 0 or theta <= 0.
template <typename Scalar>
Scalar link_weight_density(Scalar theta_ij, Scalar w) {
  using std::exp;
  if (!(theta_ij > Scalar(0))) throw ValueError("link_weight_density: theta must be positive");
  if (w < Scalar(0)) throw ValueError("link_weight_density: negative weight");
  return theta_ij * exp(-theta_ij * w);
}

/// Both sides of the fluctuation-response identity for a link with field eta.
template <typename Scalar = double>
struct FrIdentity {
  Scalar variance;        // <v^2> - <v>^2 = 1/eta^2
  Scalar susceptibility;  // -d<v>/d eta = 1/eta^2
};

template <typename Scalar>
FrIdentity<Scalar> fr_identity_check(Scalar eta) {
  if (!(eta > Scalar(0))) throw ValueError("fr_identity_check: eta must be positive");
  const Scalar mean = Scalar(1) / eta;
  // variance of Exp(rate eta) is mean^2; d(1/eta)/d eta = -1/eta^2
  return {mean * mean, Scalar(1) / (eta * eta)};
}

/// Predicted relative change of <v_ij> given relative changes of xi_i, xi_j.
template <typename Scalar>
constexpr Scalar fr_predict(Scalar rel_dxi_i, Scalar rel_dxi_j) {
  return rel_dxi_i + rel_dxi_j;
}

}  // namespace itn
