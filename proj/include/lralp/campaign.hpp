#pragma once

#include <cstdint>
#include <vector>

#include "lralp/bounds.hpp"
#include "lralp/cover.hpp"
#include "lralp/queue_bench.hpp"
#include "lralp/rng.hpp"

namespace lralp {

/// Random row-stochastic MDP with uniform rewards in [0, 1].
Mdp random_mdp(Rng& rng, int n_states, int n_actions, double discount);

/// Random basis with a leading constant column (span-certified) and
/// unit-scaled Gaussian feature columns.
BasisMatrix random_basis(Rng& rng, int n_states, int k);

/// Random probability distribution with full support.
WeightVector random_distribution(Rng& rng, int n_states);

/**
 * Random positive weight vector with stability coefficient below one for the
 * given MDP: a jittered constant vector, with the jitter shrunk until the
 * coefficient check passes (jitter zero gives exactly the discount).
 */
WeightVector random_stable_weights(Rng& rng, const Mdp& mdp);

/// Random nonempty subset of {0..n_states-1} of the given size.
std::vector<int> random_state_subset(Rng& rng, int n_states, int size);

struct CampaignConfig {
  int instances = 200;
  std::uint64_t seed = 8271828;
  // The state range stays well above the basis size: the bound addresses the
  // approximation regime, and with k >= S exactly representable optima make
  // its right-hand side collapse (see the pinned counterexample in the bound
  // tests).
  int min_states = 10;
  int max_states = 25;
  int max_actions = 3;
  int max_k = 5;  // includes the appended psi column
};

/**
 * Randomized verification campaign over (MDP, basis augmented with psi,
 * selection reduction) triples. Per instance it evaluates the relaxation
 * error bound, the approximation lemma ||J* - J*_full||_{inf,psi} <= 2 eps,
 * and, when the greedy cover certifies the whole feature set within the
 * instance size, the cover deviation bound.
 */
struct CampaignResult {
  int instances = 0;
  int bound_violations = 0;      // realized error above the finite rhs
  int lemma_violations = 0;      // approximation lemma misses
  int infinite_rhs = 0;          // vacuous bounds (deviation infinite)
  int uncorrelated_infinite = 0; // infinite rhs without an unbounded program
  int unsolved_relaxations = 0;  // finite rhs but no LRALP optimum
  int cover_instances = 0;
  int cover_violations = 0;      // cover bound misses
  int cover_monotone_violations = 0;  // relaxed values above full values
  double worst_ratio = 0.0;      // max realized / rhs over finite instances
  std::vector<BoundReport> reports;
  bool all_bounds_hold() const {
    return bound_violations == 0 && lemma_violations == 0 &&
           uncorrelated_infinite == 0 && unsolved_relaxations == 0;
  }
};

CampaignResult run_bound_campaign(const CampaignConfig& config);

/**
 * Operator-level checks of the relaxed backup projection on one instance:
 * monotonicity and the psi-shift inequality on random pairs, the contraction
 * factor against the stability coefficient, the fixed-point residual, and
 * dominance of the relaxed solution over the fixed point.
 */
struct ProjectionSuiteResult {
  int pairs = 0;
  bool monotone = true;
  bool shift_holds = true;
  double worst_contraction_ratio = 0.0;  // max ||GJ1-GJ2|| / ||J1-J2||
  double fixed_point_residual = 0.0;
  bool solution_dominates_fixed_point = true;
  double beta_psi = 0.0;
};

ProjectionSuiteResult run_projection_suite(const Mdp& mdp,
                                           const BasisMatrix& basis,
                                           const ReductionMatrix& reduction,
                                           const WeightVector& psi, Rng& rng,
                                           int pairs);

}  // namespace lralp
