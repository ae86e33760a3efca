#include "lralp/alp.hpp"

#include <stdexcept>

#include "lralp/parallel.hpp"

namespace lralp {

LpProblem build_alp(const Mdp& mdp, const BasisMatrix& basis,
                    const WeightVector& c) {
  basis.validate();
  require(basis.phi.rows() == mdp.n_states,
          "build_alp: basis rows must match the state count");
  check_distribution(c);
  require(c.size() == mdp.n_states, "build_alp: c has wrong length");
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  const int k = basis.k();
  LpProblem lp;
  lp.constraints.resize(static_cast<Eigen::Index>(S) * A, k);
  lp.rhs.resize(static_cast<Eigen::Index>(S) * A);
  for (int a = 0; a < A; ++a) {
    lp.constraints.middleRows(static_cast<Eigen::Index>(a) * S, S) =
        basis.phi - mdp.discount * (mdp.transition[a] * basis.phi);
    lp.rhs.segment(static_cast<Eigen::Index>(a) * S, S) = mdp.reward.col(a);
  }
  lp.objective = basis.phi.transpose() * c;
  return lp;
}

AlpSolution solve_alp(const Mdp& mdp, const BasisMatrix& basis,
                      const WeightVector& c) {
  const LpProblem lp = build_alp(mdp, basis, c);
  const LpOutcome outcome = solve_lp(lp);
  if (outcome.status == LpStatus::Infeasible)
    throw std::invalid_argument(
        "solve_alp: infeasible; the constant vector is not in the basis span "
        "(no certificate supplied)");
  if (outcome.status == LpStatus::Unbounded)
    throw std::runtime_error(
        "solve_alp: unbounded despite a distribution objective (internal "
        "error)");
  AlpSolution solution;
  solution.coefficients = outcome.x;
  solution.values = basis.phi * outcome.x;
  solution.objective = outcome.objective;
  return solution;
}

ApproximationError approximation_error(const ValueVector& target,
                                       const BasisMatrix& basis,
                                       const WeightVector& psi) {
  basis.validate();
  const Eigen::Index S = basis.phi.rows();
  require(target.size() == S, "approximation_error: target length mismatch");
  require(psi.size() == S, "approximation_error: psi length mismatch");
  check_positive_weights(psi);
  const int k = basis.k();
  // min t  s.t.  Phi r + t psi >= target,  -Phi r + t psi >= -target.
  LpProblem lp;
  lp.constraints.resize(2 * S, k + 1);
  lp.constraints.topLeftCorner(S, k) = basis.phi;
  lp.constraints.bottomLeftCorner(S, k) = -basis.phi;
  lp.constraints.col(k).head(S) = psi;
  lp.constraints.col(k).tail(S) = psi;
  lp.rhs.resize(2 * S);
  lp.rhs.head(S) = target;
  lp.rhs.tail(S) = -target;
  lp.objective = Eigen::VectorXd::Zero(k + 1);
  lp.objective(k) = 1.0;
  const LpOutcome outcome = solve_lp(lp);
  if (outcome.status != LpStatus::Optimal)
    throw std::runtime_error(
        "approximation_error: Chebyshev program is always solvable (internal "
        "error)");
  return {outcome.objective, outcome.x.head(k)};
}

std::optional<double> least_upper_value(const BasisMatrix& basis,
                                        const ValueVector& target,
                                        int state) {
  require(state >= 0 && state < basis.phi.rows(),
          "least_upper_value: state out of range");
  LpProblem lp{basis.phi, target, basis.feature(state)};
  const LpOutcome outcome = solve_lp(lp);
  if (outcome.status == LpStatus::Unbounded) return std::nullopt;
  if (outcome.status != LpStatus::Optimal)
    throw std::runtime_error(
        "least_upper_value: r = scaled upper bound is always feasible "
        "(internal error)");
  return outcome.objective;
}

std::vector<std::optional<double>> least_upper_values(
    const BasisMatrix& basis, const ValueVector& target) {
  basis.validate();
  require(target.size() == basis.phi.rows(),
          "least_upper_values: target length mismatch");
  const int S = static_cast<int>(basis.phi.rows());
  std::vector<std::optional<double>> values(S);
  // Fixed-size chunks keep results independent of the worker count; within a
  // chunk the solver reuses the previous optimal basis.
  parallel_chunks(S, 64, [&](int begin, int end) {
    Eigen::MatrixXd objectives(basis.k(), end - begin);
    for (int s = begin; s < end; ++s)
      objectives.col(s - begin) = basis.feature(s);
    SimplexSolver solver;
    const auto outcomes = solver.solve_batch(basis.phi, target, objectives);
    for (int s = begin; s < end; ++s) {
      const LpOutcome& outcome = outcomes[s - begin];
      if (outcome.status == LpStatus::Unbounded)
        values[s] = std::nullopt;
      else if (outcome.status == LpStatus::Optimal)
        values[s] = outcome.objective;
      else
        throw std::runtime_error(
            "least_upper_values: infeasible per-state program (internal "
            "error)");
    }
  });
  return values;
}

}  // namespace lralp
