#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace lralp {

/// Value function over states, J in R^S.
using ValueVector = Eigen::VectorXd;

/// A-fold stack of per-action value vectors, laid out as A blocks of length S.
using StateActionVector = Eigen::VectorXd;

/// Positive state weights psi, or a probability distribution c over states.
using WeightVector = Eigen::VectorXd;

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

/// Throws unless every entry of psi is strictly positive.
inline void check_positive_weights(const WeightVector& psi) {
  require(psi.size() > 0, "weight vector is empty");
  require((psi.array() > 0.0).all(), "weight vector must be strictly positive");
}

/// Throws unless c is a probability distribution (nonnegative, sums to 1).
inline void check_distribution(const WeightVector& c, double tol = 1e-12) {
  require(c.size() > 0, "distribution vector is empty");
  require((c.array() >= 0.0).all(), "distribution has a negative entry");
  require(std::abs(c.sum() - 1.0) <= tol * static_cast<double>(c.size()) + tol,
          "distribution does not sum to 1");
}

}  // namespace lralp
