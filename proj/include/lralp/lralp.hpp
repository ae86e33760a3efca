#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <optional>
#include <vector>

#include "lralp/alp.hpp"
#include "lralp/basis.hpp"
#include "lralp/lp.hpp"
#include "lralp/mdp.hpp"

namespace lralp {

/**
 * Constraint-reduction matrix W = (W_1, ..., W_A), one nonnegative S x m
 * block per action. Column i of the stacked SA x m matrix describes how the
 * original per-(state, action) constraints are combined into reduced
 * constraint i.
 *
 * `is_selection` marks 0/1 columns that indicate single (s, a) pairs or a
 * per-state selection replicated across actions; `identical_blocks` marks
 * W_1 = ... = W_A.
 */
struct ReductionMatrix {
  int n_states = 0;
  int n_actions = 0;
  int m = 0;
  std::vector<Eigen::SparseMatrix<double>> blocks;  // A blocks, each S x m
  bool is_selection = false;
  bool identical_blocks = false;

  void validate() const;

  /// Sum over actions of W_a' M for a dense S x p matrix M; this is the
  /// aggregated "W'E"-style product used by every constraint assembly.
  Eigen::MatrixXd aggregate(const Eigen::MatrixXd& dense) const;

  /// W' h for a stacked state-action vector h (length S*A).
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& stacked) const;

  /// One indicator column per (s, a) pair; m = S*A, no relaxation at all.
  static ReductionMatrix full_selection(int n_states, int n_actions);

  /// Builds blocks from per-action triplet lists (state, column, value).
  static ReductionMatrix from_triplets(
      int n_states, int n_actions, int m,
      const std::vector<std::vector<Eigen::Triplet<double>>>& entries);
};

/**
 * The linearly relaxed approximate linear program
 *
 *     min (Phi' c)' r   s.t.  sum_a W_a' Phi r >= sum_a W_a'(g_a + alpha P_a Phi r),
 *
 * i.e. m nonnegative combinations of the ALP rows. Entry (i, j) of the
 * constraint matrix is sum_a w_ia'(phi_j - alpha P_a phi_j).
 */
LpProblem build_lralp(const Mdp& mdp, const BasisMatrix& basis,
                      const ReductionMatrix& reduction, const WeightVector& c);

/// Outcome of the relaxed program. Unbounded is a legitimate result and is
/// reported as a status, never clamped into a fake solution.
struct LralpSolution {
  LpStatus status = LpStatus::Optimal;
  Eigen::VectorXd coefficients;  // r-hat, when Optimal
  ValueVector values;            // Phi r-hat, when Optimal
  double objective = std::numeric_limits<double>::quiet_NaN();
};

LralpSolution solve_lralp(const Mdp& mdp, const BasisMatrix& basis,
                          const ReductionMatrix& reduction,
                          const WeightVector& c);

/// Per-state value min{r' phi(s) : (sum_a W_a') Phi r >= (sum_a W_a') target}:
/// the relaxed counterpart of least_upper_values. Empty entries mark states
/// whose program is unbounded below.
std::vector<std::optional<double>> relaxed_least_upper_values(
    const BasisMatrix& basis, const ReductionMatrix& reduction,
    const ValueVector& target);

std::optional<double> relaxed_least_upper_value(
    const BasisMatrix& basis, const ReductionMatrix& reduction,
    const ValueVector& target, int state);

/**
 * One application of the relaxed backup projection: per state,
 *
 *     min{ r' phi(s) :  (sum_a W_a') Phi r >= W' H J },
 *
 * where H J is the stacked per-action backup of J. Aggregating the stacked
 * backup by W' (rather than re-stacking a maximum) is the form under which
 * the operator is monotone and a psi-weighted contraction.
 */
std::vector<std::optional<double>> relaxed_backup_projection(
    const Mdp& mdp, const BasisMatrix& basis, const ReductionMatrix& reduction,
    const ValueVector& J);

/// relaxed_backup_projection for callers that require finiteness everywhere;
/// throws UnboundedProjection if any state comes back unbounded.
ValueVector relaxed_backup_projection_values(const Mdp& mdp,
                                             const BasisMatrix& basis,
                                             const ReductionMatrix& reduction,
                                             const ValueVector& J);

class UnboundedProjection : public std::runtime_error {
 public:
  explicit UnboundedProjection(const std::string& what)
      : std::runtime_error(what) {}
};

/**
 * Fixed point of the relaxed backup projection, by iteration from the
 * projection of the zero vector. Requires the stability coefficient of psi
 * to be below one; stops once successive iterates differ by at most
 * tol * (1 - beta_psi) in the psi-weighted max norm, which leaves a fixed
 * point residual of the same order.
 */
ValueVector relaxed_backup_fixed_point(const Mdp& mdp,
                                       const BasisMatrix& basis,
                                       const ReductionMatrix& reduction,
                                       const WeightVector& psi,
                                       double tol = 1e-9,
                                       long max_iterations = 100000);

}  // namespace lralp
