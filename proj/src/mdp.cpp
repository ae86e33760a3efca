#include "lralp/mdp.hpp"

#include <cmath>
#include <stdexcept>

namespace lralp {

Mdp::Mdp(int n_states_, int n_actions_,
         std::vector<Eigen::MatrixXd> transition_, Eigen::MatrixXd reward_,
         double discount_, bool strict_rewards)
    : n_states(n_states_),
      n_actions(n_actions_),
      transition(std::move(transition_)),
      reward(std::move(reward_)),
      discount(discount_) {
  validate(strict_rewards);
}

void Mdp::validate(bool strict_rewards) const {
  require(n_states >= 1, "Mdp: n_states must be positive");
  require(n_actions >= 1, "Mdp: n_actions must be positive");
  require(discount > 0.0 && discount < 1.0, "Mdp: discount must be in (0,1)");
  require(static_cast<int>(transition.size()) == n_actions,
          "Mdp: one transition matrix per action required");
  require(reward.rows() == n_states && reward.cols() == n_actions,
          "Mdp: reward must be S x A");
  require(reward.allFinite(), "Mdp: rewards must be finite");
  for (const auto& P : transition) {
    require(P.rows() == n_states && P.cols() == n_states,
            "Mdp: transition matrix must be S x S");
    require(P.allFinite() && (P.array() >= 0.0).all(),
            "Mdp: transition probabilities must be nonnegative");
    for (int s = 0; s < n_states; ++s)
      require(std::abs(P.row(s).sum() - 1.0) <= 1e-12 * n_states,
              "Mdp: transition row does not sum to 1");
  }
  if (strict_rewards)
    require((reward.array() >= 0.0).all() && (reward.array() <= 1.0).all(),
            "Mdp: strict mode requires rewards in [0,1]");
}

void check_policy(const Mdp& mdp, const Policy& u) {
  require(u.action.size() == mdp.n_states, "policy must cover every state");
  require((u.action.array() >= 0).all() &&
              (u.action.array() < mdp.n_actions).all(),
          "policy action out of range");
}

ValueVector apply_policy_operator(const Mdp& mdp, const Policy& u,
                                  const ValueVector& J) {
  check_policy(mdp, u);
  require(J.size() == mdp.n_states, "value vector has wrong length");
  ValueVector out(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) {
    const int a = u.action(s);
    out(s) = mdp.reward(s, a) +
             mdp.discount * mdp.transition[a].row(s).dot(J);
  }
  return out;
}

ValueVector bellman_operator(const Mdp& mdp, const ValueVector& J) {
  require(J.size() == mdp.n_states, "value vector has wrong length");
  ValueVector out = mdp.reward.col(0) + mdp.discount * (mdp.transition[0] * J);
  for (int a = 1; a < mdp.n_actions; ++a)
    out = out.cwiseMax(mdp.reward.col(a) +
                       mdp.discount * (mdp.transition[a] * J));
  return out;
}

StateActionVector linear_bellman_operator(const Mdp& mdp,
                                          const ValueVector& J) {
  require(J.size() == mdp.n_states, "value vector has wrong length");
  StateActionVector out(static_cast<Eigen::Index>(mdp.n_states) *
                        mdp.n_actions);
  for (int a = 0; a < mdp.n_actions; ++a)
    out.segment(static_cast<Eigen::Index>(a) * mdp.n_states, mdp.n_states) =
        mdp.reward.col(a) + mdp.discount * (mdp.transition[a] * J);
  return out;
}

StateActionVector stack_states(const Mdp& mdp, const ValueVector& J) {
  require(J.size() == mdp.n_states, "value vector has wrong length");
  StateActionVector out(static_cast<Eigen::Index>(mdp.n_states) *
                        mdp.n_actions);
  for (int a = 0; a < mdp.n_actions; ++a)
    out.segment(static_cast<Eigen::Index>(a) * mdp.n_states, mdp.n_states) = J;
  return out;
}

Policy greedy_policy(const Mdp& mdp, const ValueVector& J) {
  require(J.size() == mdp.n_states, "value vector has wrong length");
  Eigen::MatrixXd backups(mdp.n_states, mdp.n_actions);
  for (int a = 0; a < mdp.n_actions; ++a)
    backups.col(a) =
        mdp.reward.col(a) + mdp.discount * (mdp.transition[a] * J);
  Policy u;
  u.action.resize(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) {
    int best = 0;
    for (int a = 1; a < mdp.n_actions; ++a)
      if (backups(s, a) > backups(s, best)) best = a;  // ties keep lowest a
    u.action(s) = best;
  }
  return u;
}

ValueVector policy_value(const Mdp& mdp, const Policy& u) {
  check_policy(mdp, u);
  const int S = mdp.n_states;
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(S, S);
  ValueVector g(S);
  for (int s = 0; s < S; ++s) {
    const int a = u.action(s);
    system.row(s) -= mdp.discount * mdp.transition[a].row(s);
    g(s) = mdp.reward(s, a);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  ValueVector J = lu.solve(g);
  const double residual = (J - apply_policy_operator(mdp, u, J))
                              .cwiseAbs()
                              .maxCoeff();
  if (!J.allFinite() || residual > 1e-9 * (1.0 + J.cwiseAbs().maxCoeff()))
    throw std::runtime_error(
        "policy_value: evaluation system solved poorly (internal error)");
  return J;
}

ExactSolution solve_exact(const Mdp& mdp, double tol) {
  require(tol > 0.0, "solve_exact: tolerance must be positive");
  const double alpha = mdp.discount;
  // Stopping rule ||J_{t+1} - J_t|| <= tol (1-alpha) / (2 alpha) guarantees
  // ||J_t - J*|| <= tol / 2 by the standard contraction error bound.
  const double stop = tol * (1.0 - alpha) / (2.0 * alpha);
  ValueVector J = ValueVector::Zero(mdp.n_states);
  const long max_sweeps = 100000000;
  for (long sweep = 0; sweep < max_sweeps; ++sweep) {
    ValueVector next = bellman_operator(mdp, J);
    const double diff = (next - J).cwiseAbs().maxCoeff();
    J.swap(next);
    if (diff <= stop) break;
  }
  // Evaluate the greedy policy exactly; a couple of improvement rounds absorb
  // the rare case where near-ties leave the first greedy policy short of the
  // residual contract.
  ExactSolution solution;
  solution.policy = greedy_policy(mdp, J);
  solution.values = policy_value(mdp, solution.policy);
  for (int round = 0; round < 50; ++round) {
    const double residual =
        (bellman_operator(mdp, solution.values) - solution.values)
            .cwiseAbs()
            .maxCoeff();
    if (residual <= tol) return solution;
    Policy improved = greedy_policy(mdp, solution.values);
    if ((improved.action.array() == solution.policy.action.array()).all())
      break;
    solution.policy = improved;
    solution.values = policy_value(mdp, solution.policy);
  }
  throw std::runtime_error(
      "solve_exact: fixed-point residual not met (internal error)");
}

ValueVector solve_exact_lp(const Mdp& mdp, const WeightVector& c) {
  check_positive_weights(c);
  require(c.size() == mdp.n_states, "weight vector has wrong length");
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  LpProblem lp;
  lp.constraints.resize(static_cast<Eigen::Index>(S) * A, S);
  lp.rhs.resize(static_cast<Eigen::Index>(S) * A);
  for (int a = 0; a < A; ++a) {
    lp.constraints.middleRows(static_cast<Eigen::Index>(a) * S, S) =
        Eigen::MatrixXd::Identity(S, S) - mdp.discount * mdp.transition[a];
    lp.rhs.segment(static_cast<Eigen::Index>(a) * S, S) = mdp.reward.col(a);
  }
  lp.objective = c;
  const LpOutcome outcome = solve_lp(lp);
  if (outcome.status != LpStatus::Optimal)
    throw std::runtime_error(
        "solve_exact_lp: the exact LP must be solvable (internal error)");
  return outcome.x;
}

double weighted_one_norm(const ValueVector& J, const WeightVector& c) {
  require(J.size() == c.size(), "weighted_one_norm: length mismatch");
  require((c.array() >= 0.0).all(), "weighted_one_norm: c must be >= 0");
  return c.dot(J.cwiseAbs());
}

double weighted_max_norm(const ValueVector& J, const WeightVector& psi) {
  require(J.size() == psi.size(), "weighted_max_norm: length mismatch");
  check_positive_weights(psi);
  return (J.cwiseAbs().array() / psi.array()).maxCoeff();
}

double stability_coefficient(const Mdp& mdp, const WeightVector& psi) {
  require(psi.size() == mdp.n_states, "weight vector has wrong length");
  check_positive_weights(psi);
  double worst = 0.0;
  for (const auto& P : mdp.transition)
    worst = std::max(worst, ((P * psi).array() / psi.array()).maxCoeff());
  return mdp.discount * worst;
}

}  // namespace lralp
