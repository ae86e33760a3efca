#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <vector>

#include "lralp/basis.hpp"
#include "lralp/lralp.hpp"
#include "lralp/mdp.hpp"

namespace lralp {

/**
 * Conic cover of the feature rows: a selected state set S0 and nonnegative
 * coefficients Lambda with phi(s) = sum_{s' in S0} Lambda(s, s') phi(s') for
 * every state. Rows of selected states are unit indicators.
 *
 * A cover certifies that every per-state relaxed program built from the
 * selection of S0 is bounded; zeta = max row sum controls the coarse form of
 * the deviation bound.
 */
struct ConicCover {
  std::vector<int> states;              // S0, ordered
  Eigen::SparseMatrix<double> lambda;   // S x |S0|
  double residual_max = 0.0;            // max_s ||phi(s) - (Lambda Phi_0)(s)||_inf
  double zeta = 0.0;                    // max_s sum_{s'} Lambda(s, s')

  /// Lambda psi, the psi-weighted row sums used by the deviation bound.
  Eigen::VectorXd weighted_row_sums(const WeightVector& psi) const;
};

struct ConicMembership {
  bool feasible = false;
  Eigen::VectorXd lambda;      // minimizing sum_s' lambda(s') psi(s') when feasible
  double infeasibility = 0.0;  // min_{lambda >= 0} ||Phi_0' lambda - phi(s)||_1
};

/**
 * Decides whether phi(state) lies in the conic span of {phi(s') : s' in S0}.
 * When feasible, the returned coefficients minimize the psi-weighted row sum,
 * which directly tightens the cover's contribution to the deviation bound;
 * pass nullptr for unweighted coefficients.
 */
ConicMembership conic_membership(const BasisMatrix& basis,
                                 const std::vector<int>& selected, int state,
                                 const WeightVector* psi = nullptr);

struct GreedyCoverResult {
  ConicCover cover;
  std::vector<int> uncovered;  // nonempty iff the budget ran out
  bool complete() const { return uncovered.empty(); }
};

/**
 * Greedy cover construction: repeatedly adds the state with the largest
 * conic infeasibility until everything is covered or the budget is spent.
 * States are ranked by decreasing feature magnitude so extreme rays seed the
 * cone first (a heuristic; minimum-cardinality covers are not attempted).
 * A partial result is a valid outcome, with the uncovered states listed.
 */
GreedyCoverResult greedy_conic_cover(const BasisMatrix& basis,
                                     const WeightVector& psi, int budget,
                                     double tol = 1e-9);

/**
 * Cross-shaped cover for a two-factor state space S1 x S2 with separable
 * features phi(s1, s2) = (h1(s1), h2(s2)). Each factor must contain a zero
 * point h_i = 0; the cover is S1 x {z2} union {z1} x S2, of size at most
 * |S1| + |S2|, with coefficient rows that split a state into its two factor
 * projections. States are indexed row-major: s = s1 * |S2| + s2.
 */
struct SeparableCover {
  BasisMatrix basis;  // (|S1| |S2|) x 2
  ConicCover cover;
};

SeparableCover separable_cover(const Eigen::VectorXd& h1,
                               const Eigen::VectorXd& h2);

/**
 * Selection reduction per the cover hypothesis: identical blocks across
 * actions, column i the indicator of states[i]. Each reduced row is the sum
 * over actions of the original rows of that state. Duplicate states are
 * dropped (the feasible region does not change); the count is reported
 * through `duplicates_removed` when non-null.
 */
ReductionMatrix selection_reduction(const std::vector<int>& states,
                                    int n_states, int n_actions,
                                    int* duplicates_removed = nullptr);

/**
 * Selection that keeps each chosen state's per-action rows separately:
 * one indicator column per (state, action) pair, m = |states| * A. Unlike
 * selection_reduction, nothing is summed across actions, which keeps the
 * reduced cone much richer; the queue benchmark depends on this (summing
 * across actions averages the drift terms and leaves its spread-anchored
 * programs unbounded).
 */
ReductionMatrix per_action_selection(const std::vector<int>& states,
                                     int n_states, int n_actions,
                                     int* duplicates_removed = nullptr);

/// Constraint-sampling distributions for the baseline selector.
struct SamplingDistribution {
  enum class Kind { IdealOccupancy, Geometric };
  Kind kind = Kind::Geometric;
  int anchor = 0;
  Eigen::VectorXd weights;  // a probability distribution over states
};

/// Row anchor' (1-alpha)(I - alpha P_u)^{-1} of the discounted occupancy of
/// policy u: the idealized distribution that needs the optimal policy.
SamplingDistribution ideal_occupancy_distribution(const Mdp& mdp,
                                                  const Policy& u, int anchor);

/// weights(s) proportional to (1-alpha) alpha^{|anchor - s|}, normalized.
SamplingDistribution geometric_distribution(int n_states, double alpha,
                                            int anchor);

/// Draws m states i.i.d. from the distribution (with replacement, then
/// deduplicated) and returns their selection reduction. Deterministic for a
/// fixed seed.
ReductionMatrix sampled_reduction(const SamplingDistribution& distribution,
                                  int m, std::uint64_t seed, int n_actions,
                                  int* duplicates_removed = nullptr);

}  // namespace lralp
