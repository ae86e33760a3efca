#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "lralp/lp.hpp"
#include "lralp/types.hpp"

namespace lralp {

/**
 * Finite discounted MDP: S states, A actions, per-action row-stochastic
 * transition matrices and reward vectors, discount in (0, 1).
 *
 * Immutable after construction; all operations below are pure functions and
 * safe to call concurrently on the same instance.
 */
struct Mdp {
  int n_states = 0;
  int n_actions = 0;
  std::vector<Eigen::MatrixXd> transition;  // A matrices, each S x S
  Eigen::MatrixXd reward;                   // S x A, column a = g_a
  double discount = 0.0;

  Mdp() = default;
  Mdp(int n_states, int n_actions, std::vector<Eigen::MatrixXd> transition,
      Eigen::MatrixXd reward, double discount, bool strict_rewards = false);

  /// Throws on malformed data. With strict_rewards, also requires every
  /// reward in [0, 1]; off by default since cost-based models break it.
  void validate(bool strict_rewards = false) const;
};

/// Deterministic stationary policy: one action index per state.
struct Policy {
  Eigen::VectorXi action;  // entries in {0, ..., A-1}
};

void check_policy(const Mdp& mdp, const Policy& u);

/// T_u J = g_u + alpha P_u J.
ValueVector apply_policy_operator(const Mdp& mdp, const Policy& u,
                                  const ValueVector& J);

/// (T J)(s) = max_a (T_a J)(s).
ValueVector bellman_operator(const Mdp& mdp, const ValueVector& J);

/// The A-fold stack of per-action backups: block a holds g_a + alpha P_a J.
/// Affine in J; its componentwise max over blocks is the Bellman operator.
StateActionVector linear_bellman_operator(const Mdp& mdp,
                                          const ValueVector& J);

/// Stacks J A-fold, matching the layout of linear_bellman_operator.
StateActionVector stack_states(const Mdp& mdp, const ValueVector& J);

/// Greedy policy w.r.t. J; ties resolved to the lowest action index.
Policy greedy_policy(const Mdp& mdp, const ValueVector& J);

/// Exact value of a policy via the linear system (I - alpha P_u) J = g_u.
ValueVector policy_value(const Mdp& mdp, const Policy& u);

struct ExactSolution {
  ValueVector values;
  Policy policy;
};

/**
 * Optimal value function and a greedy optimal policy. Value iteration runs
 * until the error bound guarantees sup-norm error tol/2, then the greedy
 * policy is evaluated exactly (and improved if the residual asks for it).
 * The returned values satisfy ||J - TJ||_inf <= tol.
 */
ExactSolution solve_exact(const Mdp& mdp, double tol = 1e-9);

/**
 * The same optimum through the linear program min{c'J : J >= TJ}, written as
 * stacked per-action rows and handed to the LP backend. c must be strictly
 * positive for the LP to pin down J* in every coordinate.
 */
ValueVector solve_exact_lp(const Mdp& mdp, const WeightVector& c);

/// sum_s c(s) |J(s)|.
double weighted_one_norm(const ValueVector& J, const WeightVector& c);

/// max_s |J(s)| / psi(s): weights divide, they do not multiply.
double weighted_max_norm(const ValueVector& J, const WeightVector& psi);

/// Discounted stability coefficient alpha * max_a ||P_a psi||_{inf,psi}.
/// Contraction arguments require the returned value to be below one; the
/// caller checks, this only computes.
double stability_coefficient(const Mdp& mdp, const WeightVector& psi);

}  // namespace lralp
