#include "lralp/basis.hpp"

#include <cmath>

namespace lralp {

BasisMatrix augment_with(const BasisMatrix& basis, const WeightVector& psi) {
  basis.validate();
  require(psi.size() == basis.phi.rows(),
          "augment_with: psi length must match the state count");
  BasisMatrix out;
  out.phi.resize(basis.phi.rows(), basis.phi.cols() + 1);
  out.phi.leftCols(basis.phi.cols()) = basis.phi;
  out.phi.rightCols(1) = psi;
  out.ones_certified = basis.ones_certified;
  return out;
}

BasisMatrix polynomial_basis(int n_states, int k) {
  require(n_states >= 1, "polynomial_basis: n_states must be positive");
  require(k >= 1, "polynomial_basis: k must be positive");
  BasisMatrix basis;
  basis.phi.resize(n_states, k);
  for (int s = 0; s < n_states; ++s) {
    double power = 1.0;
    for (int j = 0; j < k; ++j) {
      basis.phi(s, j) = power;
      power *= static_cast<double>(s);
    }
  }
  for (int j = 0; j < k; ++j) {
    const double top = basis.phi.col(j).cwiseAbs().maxCoeff();
    if (top > 0.0) basis.phi.col(j) /= top;
  }
  basis.ones_certified = true;  // column 0 is the constant vector
  return basis;
}

BasisMatrix indicator_basis(const Eigen::VectorXi& cell_of, int k) {
  require(k >= 1, "indicator_basis: k must be positive");
  require(cell_of.size() >= 1, "indicator_basis: empty state set");
  BasisMatrix basis;
  basis.phi.setZero(cell_of.size(), k);
  Eigen::VectorXi count = Eigen::VectorXi::Zero(k);
  for (Eigen::Index s = 0; s < cell_of.size(); ++s) {
    require(cell_of(s) >= 0 && cell_of(s) < k,
            "indicator_basis: cell index out of range");
    basis.phi(s, cell_of(s)) = 1.0;
    ++count(cell_of(s));
  }
  require((count.array() > 0).all(), "indicator_basis: empty cell");
  basis.ones_certified = true;  // columns sum to the constant vector
  return basis;
}

}  // namespace lralp
