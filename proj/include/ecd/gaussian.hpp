#pragma once

// Consistency scores for Gaussian state estimates: NEES and Gaussian ECD.
// Quadratic forms and log-determinants go through a Cholesky factor; no
// explicit inverse is ever formed.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "ecd/error.hpp"
#include "ecd/rng.hpp"
#include "ecd/summation.hpp"

namespace ecd {

/// Predicted mean and covariance of a state together with the true state.
class GaussianPrediction {
 public:
  static constexpr double kSymmetryTolerance = 1e-9;

  GaussianPrediction(Eigen::VectorXd mean, Eigen::MatrixXd covariance, Eigen::VectorXd truth)
      : mean_(std::move(mean)), covariance_(std::move(covariance)), truth_(std::move(truth)) {
    const auto d = mean_.size();
    if (d < 1) throw DataError("state dimension must be at least 1");
    if (truth_.size() != d || covariance_.rows() != d || covariance_.cols() != d) {
      throw DataError("mean, truth and covariance dimensions disagree");
    }
    if (!covariance_.allFinite() || !mean_.allFinite() || !truth_.allFinite()) {
      throw DataError("non-finite value in prediction");
    }
    if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance) {
      throw DataError("covariance is not symmetric");
    }
    factor_.compute(covariance_);
    if (factor_.info() != Eigen::Success) {
      throw DataError("covariance is not positive-definite");
    }
  }

  Eigen::Index dimension() const noexcept { return mean_.size(); }
  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  const Eigen::MatrixXd& covariance() const noexcept { return covariance_; }
  const Eigen::VectorXd& truth() const noexcept { return truth_; }

  /// Lower Cholesky factor L with C = L L^T.
  Eigen::MatrixXd cholesky_lower() const { return factor_.matrixL(); }

  double log_determinant() const {
    const auto& lu = factor_.matrixLLT();
    double s = 0.0;
    for (Eigen::Index i = 0; i < lu.rows(); ++i) s += std::log(lu(i, i));
    return 2.0 * s;
  }

  /// (x - mu)^T C^-1 (x - mu) as the squared norm of L^-1 (x - mu).
  double mahalanobis_sq() const {
    const Eigen::VectorXd whitened =
        factor_.matrixL().solve(Eigen::VectorXd(truth_ - mean_));
    return whitened.squaredNorm();
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  Eigen::VectorXd truth_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
};

inline double mahalanobis_sq(const GaussianPrediction& pred) { return pred.mahalanobis_sq(); }

namespace detail {

inline Eigen::Index common_dimension(std::span<const GaussianPrediction> preds) {
  if (preds.empty()) throw DataError("empty prediction list");
  const Eigen::Index d = preds.front().dimension();
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].dimension() != d) {
      throw DataError("prediction " + std::to_string(i) + " has dimension " +
                      std::to_string(preds[i].dimension()) + ", expected " + std::to_string(d));
    }
  }
  return d;
}

}  // namespace detail

/// Mean squared Mahalanobis residual. A consistent estimator averages d.
inline double nees(std::span<const GaussianPrediction> preds) {
  detail::common_dimension(preds);
  return pairwise_sum_of(preds, [](const GaussianPrediction& p) { return p.mahalanobis_sq(); }) /
         static_cast<double>(preds.size());
}

/// Gaussian ECD, mean of (mahalanobis_sq / 2 - d / 2). Zero when consistent,
/// negative when under-confident, positive when over-confident.
inline double ecd_gaussian(std::span<const GaussianPrediction> preds) {
  const auto d = static_cast<double>(detail::common_dimension(preds));
  return pairwise_sum_of(preds,
                         [d](const GaussianPrediction& p) {
                           return 0.5 * p.mahalanobis_sq() - 0.5 * d;
                         }) /
         static_cast<double>(preds.size());
}

/// log N(truth; mean, C) with the (2 pi)^(d/2) |C|^(1/2) normalisation.
inline double gaussian_log_density(const GaussianPrediction& pred) {
  const auto d = static_cast<double>(pred.dimension());
  return -0.5 * (d * std::log(2.0 * std::numbers::pi) + pred.log_determinant() +
                 pred.mahalanobis_sq());
}

/// Expected log-density of N(., C) under itself: -(d log 2pi + log|C| + d) / 2.
inline double gaussian_negative_entropy(const Eigen::MatrixXd& covariance) {
  if (covariance.rows() < 1 || covariance.rows() != covariance.cols()) {
    throw DataError("covariance must be a non-empty square matrix");
  }
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() >
      GaussianPrediction::kSymmetryTolerance) {
    throw DataError("covariance is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) throw DataError("covariance is not positive-definite");
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < covariance.rows(); ++i) log_det += std::log(llt.matrixLLT()(i, i));
  log_det *= 2.0;
  const auto d = static_cast<double>(covariance.rows());
  return -0.5 * (d * std::log(2.0 * std::numbers::pi) + log_det + d);
}

/// Prediction whose truth is drawn from its own Gaussian, i.e. a perfectly
/// consistent estimate.
inline GaussianPrediction sample_consistent(const Eigen::VectorXd& mean,
                                            const Eigen::MatrixXd& covariance, Rng& rng) {
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) throw DataError("covariance is not positive-definite");
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.standard_normal();
  Eigen::VectorXd truth = mean + llt.matrixL() * z;
  return GaussianPrediction(mean, covariance, std::move(truth));
}

}  // namespace ecd
