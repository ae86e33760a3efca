#include "lralp/lralp.hpp"

#include <cmath>
#include <stdexcept>

#include "lralp/parallel.hpp"

namespace lralp {

void ReductionMatrix::validate() const {
  require(n_states >= 1 && n_actions >= 1, "ReductionMatrix: empty shape");
  require(m >= 1, "ReductionMatrix: at least one reduced constraint required");
  require(static_cast<int>(blocks.size()) == n_actions,
          "ReductionMatrix: one block per action required");
  for (const auto& block : blocks) {
    require(block.rows() == n_states && block.cols() == m,
            "ReductionMatrix: block must be S x m");
    for (int col = 0; col < block.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(block, col); it; ++it)
        require(it.value() >= 0.0,
                "ReductionMatrix: entries must be nonnegative");
  }
}

Eigen::MatrixXd ReductionMatrix::aggregate(const Eigen::MatrixXd& dense) const {
  require(dense.rows() == n_states, "aggregate: row count mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, dense.cols());
  for (const auto& block : blocks) out += block.transpose() * dense;
  return out;
}

Eigen::VectorXd ReductionMatrix::apply_transpose(
    const Eigen::VectorXd& stacked) const {
  require(stacked.size() ==
              static_cast<Eigen::Index>(n_states) * n_actions,
          "apply_transpose: stacked vector has wrong length");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  for (int a = 0; a < n_actions; ++a)
    out += blocks[a].transpose() *
           stacked.segment(static_cast<Eigen::Index>(a) * n_states, n_states);
  return out;
}

ReductionMatrix ReductionMatrix::full_selection(int n_states, int n_actions) {
  require(n_states >= 1 && n_actions >= 1, "full_selection: empty shape");
  ReductionMatrix W;
  W.n_states = n_states;
  W.n_actions = n_actions;
  W.m = n_states * n_actions;
  W.blocks.reserve(n_actions);
  for (int a = 0; a < n_actions; ++a) {
    Eigen::SparseMatrix<double> block(n_states, W.m);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(n_states);
    for (int s = 0; s < n_states; ++s)
      triplets.emplace_back(s, a * n_states + s, 1.0);
    block.setFromTriplets(triplets.begin(), triplets.end());
    W.blocks.push_back(std::move(block));
  }
  W.is_selection = true;
  W.identical_blocks = n_actions == 1;
  return W;
}

ReductionMatrix ReductionMatrix::from_triplets(
    int n_states, int n_actions, int m,
    const std::vector<std::vector<Eigen::Triplet<double>>>& entries) {
  require(static_cast<int>(entries.size()) == n_actions,
          "from_triplets: one triplet list per action required");
  ReductionMatrix W;
  W.n_states = n_states;
  W.n_actions = n_actions;
  W.m = m;
  W.blocks.reserve(n_actions);
  for (const auto& list : entries) {
    Eigen::SparseMatrix<double> block(n_states, m);
    block.setFromTriplets(list.begin(), list.end());
    W.blocks.push_back(std::move(block));
  }
  W.validate();
  return W;
}

LpProblem build_lralp(const Mdp& mdp, const BasisMatrix& basis,
                      const ReductionMatrix& reduction,
                      const WeightVector& c) {
  basis.validate();
  reduction.validate();
  require(basis.phi.rows() == mdp.n_states,
          "build_lralp: basis rows must match the state count");
  require(reduction.n_states == mdp.n_states &&
              reduction.n_actions == mdp.n_actions,
          "build_lralp: reduction shape must match the MDP");
  check_distribution(c);
  require(c.size() == mdp.n_states, "build_lralp: c has wrong length");

  LpProblem lp;
  lp.constraints = Eigen::MatrixXd::Zero(reduction.m, basis.k());
  lp.rhs = Eigen::VectorXd::Zero(reduction.m);
  for (int a = 0; a < mdp.n_actions; ++a) {
    const Eigen::MatrixXd rows =
        basis.phi - mdp.discount * (mdp.transition[a] * basis.phi);
    lp.constraints += reduction.blocks[a].transpose() * rows;
    lp.rhs += reduction.blocks[a].transpose() * mdp.reward.col(a);
  }
  lp.objective = basis.phi.transpose() * c;
  return lp;
}

LralpSolution solve_lralp(const Mdp& mdp, const BasisMatrix& basis,
                          const ReductionMatrix& reduction,
                          const WeightVector& c) {
  const LpProblem lp = build_lralp(mdp, basis, reduction, c);
  const LpOutcome outcome = solve_lp(lp);
  LralpSolution solution;
  solution.status = outcome.status;
  if (outcome.status == LpStatus::Optimal) {
    solution.coefficients = outcome.x;
    solution.values = basis.phi * outcome.x;
    solution.objective = outcome.objective;
  }
  return solution;
}

namespace {

// Shared machinery for the per-state programs min{r' phi(s) : C r >= h}.
std::vector<std::optional<double>> per_state_batch(
    const BasisMatrix& basis, const Eigen::MatrixXd& constraint_matrix,
    const Eigen::VectorXd& rhs) {
  const int S = static_cast<int>(basis.phi.rows());
  std::vector<std::optional<double>> values(S);
  parallel_chunks(S, 64, [&](int begin, int end) {
    Eigen::MatrixXd objectives(basis.k(), end - begin);
    for (int s = begin; s < end; ++s)
      objectives.col(s - begin) = basis.feature(s);
    SimplexSolver solver;
    const auto outcomes = solver.solve_batch(constraint_matrix, rhs, objectives);
    for (int s = begin; s < end; ++s) {
      const LpOutcome& outcome = outcomes[s - begin];
      if (outcome.status == LpStatus::Unbounded)
        values[s] = std::nullopt;
      else if (outcome.status == LpStatus::Optimal)
        values[s] = outcome.objective;
      else
        throw std::runtime_error(
            "per-state relaxed program infeasible; reduced constraints admit "
            "no representable point");
    }
  });
  return values;
}

}  // namespace

std::vector<std::optional<double>> relaxed_least_upper_values(
    const BasisMatrix& basis, const ReductionMatrix& reduction,
    const ValueVector& target) {
  basis.validate();
  reduction.validate();
  require(target.size() == basis.phi.rows(),
          "relaxed_least_upper_values: target length mismatch");
  const Eigen::MatrixXd constraint_matrix = reduction.aggregate(basis.phi);
  const Eigen::VectorXd rhs = reduction.aggregate(target);
  return per_state_batch(basis, constraint_matrix, rhs);
}

std::optional<double> relaxed_least_upper_value(
    const BasisMatrix& basis, const ReductionMatrix& reduction,
    const ValueVector& target, int state) {
  require(state >= 0 && state < basis.phi.rows(),
          "relaxed_least_upper_value: state out of range");
  const Eigen::MatrixXd constraint_matrix = reduction.aggregate(basis.phi);
  const Eigen::VectorXd rhs = reduction.aggregate(target);
  LpProblem lp{constraint_matrix, rhs, basis.feature(state)};
  const LpOutcome outcome = solve_lp(lp);
  if (outcome.status == LpStatus::Unbounded) return std::nullopt;
  if (outcome.status != LpStatus::Optimal)
    throw std::runtime_error(
        "relaxed_least_upper_value: infeasible per-state program");
  return outcome.objective;
}

std::vector<std::optional<double>> relaxed_backup_projection(
    const Mdp& mdp, const BasisMatrix& basis, const ReductionMatrix& reduction,
    const ValueVector& J) {
  basis.validate();
  reduction.validate();
  require(basis.phi.rows() == mdp.n_states &&
              reduction.n_states == mdp.n_states &&
              reduction.n_actions == mdp.n_actions,
          "relaxed_backup_projection: shape mismatch");
  const Eigen::MatrixXd constraint_matrix = reduction.aggregate(basis.phi);
  const Eigen::VectorXd rhs =
      reduction.apply_transpose(linear_bellman_operator(mdp, J));
  return per_state_batch(basis, constraint_matrix, rhs);
}

ValueVector relaxed_backup_projection_values(const Mdp& mdp,
                                             const BasisMatrix& basis,
                                             const ReductionMatrix& reduction,
                                             const ValueVector& J) {
  const auto per_state = relaxed_backup_projection(mdp, basis, reduction, J);
  ValueVector out(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) {
    if (!per_state[s])
      throw UnboundedProjection(
          "relaxed backup projection unbounded at state " + std::to_string(s));
    out(s) = *per_state[s];
  }
  return out;
}

ValueVector relaxed_backup_fixed_point(const Mdp& mdp,
                                       const BasisMatrix& basis,
                                       const ReductionMatrix& reduction,
                                       const WeightVector& psi,
                                       double tol, long max_iterations) {
  check_positive_weights(psi);
  require(psi.size() == mdp.n_states, "psi has wrong length");
  const double beta = stability_coefficient(mdp, psi);
  require(beta < 1.0,
          "relaxed_backup_fixed_point: stability coefficient must be < 1");
  ValueVector current = relaxed_backup_projection_values(
      mdp, basis, reduction, ValueVector::Zero(mdp.n_states));
  const double stop = tol * (1.0 - beta);
  for (long iteration = 0; iteration < max_iterations; ++iteration) {
    ValueVector next =
        relaxed_backup_projection_values(mdp, basis, reduction, current);
    const double diff = weighted_max_norm(next - current, psi);
    current.swap(next);
    if (diff <= stop) return current;
  }
  throw std::runtime_error(
      "relaxed_backup_fixed_point: no convergence within the iteration "
      "guard");
}

}  // namespace lralp
