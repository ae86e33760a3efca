#pragma once

#include <Eigen/Dense>

#include "lralp/types.hpp"

namespace lralp {

/**
 * Column basis Phi in R^{S x k}; row s is the feature vector phi(s).
 *
 * `ones_certified` records that the constant vector is known to lie in the
 * column span (the feasibility certificate the ALP needs). Constructors that
 * can guarantee it set the flag; everything else leaves it to the caller.
 */
struct BasisMatrix {
  Eigen::MatrixXd phi;  // S x k
  bool ones_certified = false;

  int n_states() const { return static_cast<int>(phi.rows()); }
  int k() const { return static_cast<int>(phi.cols()); }
  Eigen::VectorXd feature(int s) const { return phi.row(s).transpose(); }

  void validate() const {
    require(phi.rows() >= 1 && phi.cols() >= 1, "basis must be nonempty");
    require(phi.allFinite(), "basis entries must be finite");
  }
};

/// Appends psi as an extra column, making it representable by construction.
BasisMatrix augment_with(const BasisMatrix& basis, const WeightVector& psi);

/// Columns 1, s, ..., s^{k-1} over states {0..S-1}, each rescaled to unit
/// max-norm so high powers do not swamp the LP scaling.
BasisMatrix polynomial_basis(int n_states, int k);

/// Indicator (state-aggregation) basis: column j marks the states of cell j.
/// `cell_of` maps each state to its cell in {0..k-1}; every cell nonempty.
BasisMatrix indicator_basis(const Eigen::VectorXi& cell_of, int k);

}  // namespace lralp
