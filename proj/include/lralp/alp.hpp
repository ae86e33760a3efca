#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "lralp/basis.hpp"
#include "lralp/lp.hpp"
#include "lralp/mdp.hpp"

namespace lralp {

/**
 * Approximate linear program over the basis:
 *
 *     min (Phi' c)' r   s.t.  (Phi - alpha P_a Phi) r >= g_a  for every a,
 *
 * stacked action-major into S*A rows. Feasible whenever the constant vector
 * lies in the column span of Phi.
 */
LpProblem build_alp(const Mdp& mdp, const BasisMatrix& basis,
                    const WeightVector& c);

struct AlpSolution {
  Eigen::VectorXd coefficients;  // r
  ValueVector values;            // Phi r
  double objective = 0.0;        // c' Phi r
};

/// Solves the ALP. Throws on Infeasible (the span certificate was missing or
/// wrong) and on Unbounded (impossible for positive c; internal error).
AlpSolution solve_alp(const Mdp& mdp, const BasisMatrix& basis,
                      const WeightVector& c);

struct ApproximationError {
  double eps = 0.0;              // min_r ||target - Phi r||_{inf,psi}
  Eigen::VectorXd coefficients;  // an attaining r
};

/// Best psi-weighted max-norm approximation of `target` in the span of the
/// basis, as the Chebyshev linear program over (r, t).
ApproximationError approximation_error(const ValueVector& target,
                                       const BasisMatrix& basis,
                                       const WeightVector& psi);

/// Per-state value min{r' phi(s) : Phi r >= target}. The pointwise least
/// basis-representable upper bound on `target`; empty when that state's
/// program is unbounded below.
std::optional<double> least_upper_value(const BasisMatrix& basis,
                                        const ValueVector& target, int state);

/// Batch form over all states, sharing the constraint system. Evaluation is
/// chunked; identical results for any thread count.
std::vector<std::optional<double>> least_upper_values(
    const BasisMatrix& basis, const ValueVector& target);

}  // namespace lralp
