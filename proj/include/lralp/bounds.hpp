#pragma once

#include <limits>
#include <optional>

#include "lralp/cover.hpp"
#include "lralp/lralp.hpp"
#include "lralp/mdp.hpp"

namespace lralp {

/**
 * All quantities of the relaxation error bound, computed from scratch:
 *
 *   realized_error = ||J* - J-hat||_{1,c}
 *   error_bound_rhs = (2 c'psi / (1 - beta_psi)) (2.5 eps + dev_alp_lralp)
 *
 * with eps the best psi-weighted approximation of J* in the basis span and
 * dev_alp_lralp the psi-weighted deviation between the full and relaxed
 * least-upper values of J*. IEEE infinity is a legal value for the deviation
 * and the bound; it must coincide with an unbounded per-state program.
 */
struct BoundReport {
  double eps = 0.0;
  double beta_psi = 0.0;
  double c_dot_psi = 0.0;
  double dev_alp_lralp = 0.0;
  double error_bound_rhs = std::numeric_limits<double>::infinity();
  double realized_error = std::numeric_limits<double>::quiet_NaN();
  double empirical_ratio = std::numeric_limits<double>::quiet_NaN();
  bool lralp_solved = false;      // the relaxed program had an optimum
  bool pointwise_unbounded = false;  // some relaxed least-upper value was -inf
  bool bound_holds = false;       // realized_error <= rhs + 1e-6 (inf counts)

  struct CoverPieces {
    double lhs = 0.0;              // dev_alp_lralp again, for the cover bound
    double alp_gap = 0.0;          // ||J*_full - J*||_{inf,psi}
    double lambda_psi_norm = 0.0;  // ||Lambda psi||_{inf,psi}
    double zeta = 0.0;
    double rhs = 0.0;              // alp_gap + (1 + lambda_psi_norm) eps
    double coarse_rhs = 0.0;       // alp_gap + (1 + ||psi||_inf zeta) eps
    bool holds = false;
  };
  std::optional<CoverPieces> cover;
};

/**
 * Evaluates the relaxation error bound for a nonnegative reduction matrix.
 * Hypotheses are enforced, not warned about: c must be a distribution, psi
 * strictly positive with stability coefficient below one, and psi must be
 * representable in the basis (within 1e-8); violations throw.
 *
 * An unbounded relaxed program is not an error: the deviation and the bound
 * become infinite and the report says so.
 */
BoundReport evaluate_error_bound(const Mdp& mdp, const BasisMatrix& basis,
                                 const ReductionMatrix& reduction,
                                 const WeightVector& c,
                                 const WeightVector& psi);

/**
 * Evaluates the conic-cover deviation bound for a selection reduction whose
 * states coincide with the cover's: requires identical 0/1 blocks and a
 * certified cover (residual <= 1e-8). `j_star` is the exact value vector the
 * least-upper programs are anchored at.
 */
BoundReport::CoverPieces evaluate_cover_bound(const BasisMatrix& basis,
                                              const ReductionMatrix& reduction,
                                              const ConicCover& cover,
                                              const WeightVector& psi,
                                              const ValueVector& j_star);

}  // namespace lralp
