#include "lralp/bounds.hpp"

#include <cmath>

namespace lralp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// psi-weighted max deviation between a dense vector and per-state LP values
// that may contain unbounded entries; -inf entries make the deviation +inf.
double weighted_deviation(const ValueVector& reference,
                          const std::vector<std::optional<double>>& values,
                          const WeightVector& psi, bool* any_unbounded) {
  double worst = 0.0;
  for (int s = 0; s < reference.size(); ++s) {
    if (!values[s]) {
      if (any_unbounded != nullptr) *any_unbounded = true;
      return kInf;
    }
    worst = std::max(worst, std::abs(reference(s) - *values[s]) / psi(s));
  }
  return worst;
}

}  // namespace

BoundReport evaluate_error_bound(const Mdp& mdp, const BasisMatrix& basis,
                                 const ReductionMatrix& reduction,
                                 const WeightVector& c,
                                 const WeightVector& psi) {
  check_distribution(c);
  check_positive_weights(psi);
  require(c.size() == mdp.n_states && psi.size() == mdp.n_states,
          "evaluate_error_bound: weight length mismatch");
  reduction.validate();

  BoundReport report;
  report.beta_psi = stability_coefficient(mdp, psi);
  require(report.beta_psi < 1.0,
          "evaluate_error_bound: stability coefficient of psi must be < 1");
  // psi must be representable in the basis; the approximation program both
  // checks it and certifies the coefficient vector.
  const ApproximationError psi_fit = approximation_error(psi, basis, psi);
  require(psi_fit.eps <= 1e-8,
          "evaluate_error_bound: psi is not in the column span of the basis "
          "(augment the basis with psi)");
  report.c_dot_psi = c.dot(psi);

  const ExactSolution exact = solve_exact(mdp);
  const ApproximationError fit =
      approximation_error(exact.values, basis, psi);
  report.eps = fit.eps;

  const auto full = least_upper_values(basis, exact.values);
  const auto relaxed =
      relaxed_least_upper_values(basis, reduction, exact.values);
  ValueVector full_values(mdp.n_states);
  bool full_unbounded = false;
  for (int s = 0; s < mdp.n_states; ++s) {
    if (!full[s]) {
      full_unbounded = true;
      break;
    }
    full_values(s) = *full[s];
  }
  require(!full_unbounded,
          "evaluate_error_bound: the unrelaxed least-upper program must be "
          "bounded when psi is representable");
  report.dev_alp_lralp =
      weighted_deviation(full_values, relaxed, psi, &report.pointwise_unbounded);

  report.error_bound_rhs = 2.0 * report.c_dot_psi / (1.0 - report.beta_psi) *
                           (2.5 * report.eps + report.dev_alp_lralp);

  const LralpSolution relaxed_solution = solve_lralp(mdp, basis, reduction, c);
  report.lralp_solved = relaxed_solution.status == LpStatus::Optimal;
  if (report.lralp_solved)
    report.realized_error =
        weighted_one_norm(exact.values - relaxed_solution.values, c);

  if (std::isinf(report.error_bound_rhs)) {
    report.bound_holds = true;  // vacuous; correlation is reported alongside
    report.empirical_ratio = 0.0;
  } else if (report.lralp_solved) {
    report.bound_holds =
        report.realized_error <= report.error_bound_rhs + 1e-6;
    report.empirical_ratio =
        report.error_bound_rhs > 0.0
            ? report.realized_error / report.error_bound_rhs
            : (report.realized_error <= 1e-6 ? 0.0 : kInf);
  } else {
    // Finite bound but no optimum: the relaxed program was unbounded or
    // infeasible, which the bound hypotheses exclude. Flag, do not assert.
    report.bound_holds = false;
  }
  return report;
}

BoundReport::CoverPieces evaluate_cover_bound(const BasisMatrix& basis,
                                              const ReductionMatrix& reduction,
                                              const ConicCover& cover,
                                              const WeightVector& psi,
                                              const ValueVector& j_star) {
  basis.validate();
  check_positive_weights(psi);
  reduction.validate();
  require(reduction.is_selection && reduction.identical_blocks,
          "evaluate_cover_bound: reduction must select states identically "
          "across actions");
  require(cover.residual_max <= 1e-8,
          "evaluate_cover_bound: cover is not certified (residual too large)");
  require(static_cast<int>(cover.states.size()) == reduction.m,
          "evaluate_cover_bound: cover and reduction disagree on the "
          "selected states");

  BoundReport::CoverPieces pieces;
  const ApproximationError fit = approximation_error(j_star, basis, psi);

  const auto full = least_upper_values(basis, j_star);
  const auto relaxed = relaxed_least_upper_values(basis, reduction, j_star);
  ValueVector full_values(j_star.size());
  for (int s = 0; s < j_star.size(); ++s) {
    require(static_cast<bool>(full[s]) && static_cast<bool>(relaxed[s]),
            "evaluate_cover_bound: a certified cover guarantees bounded "
            "per-state programs");
    full_values(s) = *full[s];
  }
  pieces.lhs = weighted_deviation(full_values, relaxed, psi, nullptr);
  pieces.alp_gap = weighted_max_norm(full_values - j_star, psi);
  pieces.lambda_psi_norm =
      weighted_max_norm(cover.weighted_row_sums(psi), psi);
  pieces.zeta = cover.zeta;
  pieces.rhs = pieces.alp_gap + (1.0 + pieces.lambda_psi_norm) * fit.eps;
  pieces.coarse_rhs =
      pieces.alp_gap +
      (1.0 + psi.maxCoeff() * cover.zeta) * fit.eps;
  pieces.holds = pieces.lhs <= pieces.rhs + 1e-6;
  return pieces;
}

}  // namespace lralp
