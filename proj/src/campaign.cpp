#include "lralp/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lralp {

Mdp random_mdp(Rng& rng, int n_states, int n_actions, double discount) {
  std::vector<Eigen::MatrixXd> transition(n_actions,
                                          Eigen::MatrixXd(n_states, n_states));
  Eigen::MatrixXd reward(n_states, n_actions);
  for (int a = 0; a < n_actions; ++a) {
    for (int s = 0; s < n_states; ++s) {
      double total = 0.0;
      for (int t = 0; t < n_states; ++t) {
        // Exponential weights give a dense Dirichlet-like row.
        double draw = rng.uniform();
        while (draw <= 0.0) draw = rng.uniform();
        transition[a](s, t) = -std::log(draw);
        total += transition[a](s, t);
      }
      transition[a].row(s) /= total;
      reward(s, a) = rng.uniform();
    }
  }
  return Mdp(n_states, n_actions, std::move(transition), std::move(reward),
             discount);
}

BasisMatrix random_basis(Rng& rng, int n_states, int k) {
  BasisMatrix basis;
  basis.phi.resize(n_states, k);
  basis.phi.col(0).setOnes();
  for (int j = 1; j < k; ++j) {
    for (int s = 0; s < n_states; ++s) basis.phi(s, j) = rng.normal();
    const double top = basis.phi.col(j).cwiseAbs().maxCoeff();
    if (top > 0.0) basis.phi.col(j) /= top;
  }
  basis.ones_certified = true;
  return basis;
}

WeightVector random_distribution(Rng& rng, int n_states) {
  WeightVector c(n_states);
  for (int s = 0; s < n_states; ++s) c(s) = 0.05 + rng.uniform();
  return c / c.sum();
}

WeightVector random_stable_weights(Rng& rng, const Mdp& mdp) {
  WeightVector jitter(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) jitter(s) = rng.uniform();
  double scale = 0.5;
  for (int attempt = 0; attempt < 60; ++attempt) {
    const WeightVector psi =
        WeightVector::Ones(mdp.n_states) + scale * jitter;
    if (stability_coefficient(mdp, psi) < 1.0) return psi;
    scale *= 0.5;
  }
  return WeightVector::Ones(mdp.n_states);  // beta = discount < 1
}

std::vector<int> random_state_subset(Rng& rng, int n_states, int size) {
  std::vector<int> all(n_states);
  std::iota(all.begin(), all.end(), 0);
  for (int i = n_states - 1; i > 0; --i)
    std::swap(all[i], all[rng.uniform_int(i + 1)]);
  size = std::min(std::max(size, 1), n_states);
  all.resize(size);
  std::sort(all.begin(), all.end());
  return all;
}

CampaignResult run_bound_campaign(const CampaignConfig& config) {
  require(config.instances >= 1, "campaign: need at least one instance");
  Rng rng(config.seed);
  CampaignResult result;
  result.reports.reserve(config.instances);

  for (int instance = 0; instance < config.instances; ++instance) {
    const int S = config.min_states +
                  rng.uniform_int(config.max_states - config.min_states + 1);
    const int A = 1 + rng.uniform_int(config.max_actions);
    const int base_k =
        1 + rng.uniform_int(std::min(config.max_k - 1, std::max(S - 1, 1)));
    const double alpha = rng.uniform(0.3, 0.9);

    const Mdp mdp = random_mdp(rng, S, A, alpha);
    const WeightVector psi = random_stable_weights(rng, mdp);
    const BasisMatrix basis = augment_with(random_basis(rng, S, base_k), psi);
    const WeightVector c = random_distribution(rng, S);

    // Half the instances select cover states (finite programs guaranteed),
    // half select random subsets, which exercises the unbounded paths.
    std::vector<int> selected;
    if (rng.uniform() < 0.5) {
      selected = greedy_conic_cover(basis, psi, S).cover.states;
      const int extras = rng.uniform_int(3);
      for (int extra = 0; extra < extras; ++extra)
        selected.push_back(rng.uniform_int(S));
    } else {
      selected = random_state_subset(rng, S, 1 + rng.uniform_int(S));
    }
    const ReductionMatrix reduction = selection_reduction(selected, S, A);

    BoundReport report = evaluate_error_bound(mdp, basis, reduction, c, psi);

    if (std::isinf(report.error_bound_rhs)) {
      ++result.infinite_rhs;
      if (!report.pointwise_unbounded) ++result.uncorrelated_infinite;
    } else if (!report.lralp_solved) {
      ++result.unsolved_relaxations;
    } else {
      if (!report.bound_holds) ++result.bound_violations;
      result.worst_ratio = std::max(result.worst_ratio, report.empirical_ratio);
    }

    // Approximation lemma: the full least-upper values stay within 2 eps.
    {
      const ExactSolution exact = solve_exact(mdp);
      const auto full = least_upper_values(basis, exact.values);
      ValueVector full_values(S);
      for (int s = 0; s < S; ++s) full_values(s) = full[s].value();
      const double gap = weighted_max_norm(full_values - exact.values, psi);
      if (gap > 2.0 * report.eps + 1e-6) ++result.lemma_violations;

      // Cover-certified subset: check the deviation bound as well.
      const GreedyCoverResult greedy = greedy_conic_cover(basis, psi, S);
      if (greedy.complete() && greedy.cover.residual_max <= 1e-8) {
        const ReductionMatrix cover_reduction =
            selection_reduction(greedy.cover.states, S, A);
        BoundReport::CoverPieces pieces = evaluate_cover_bound(
            basis, cover_reduction, greedy.cover, psi, exact.values);
        ++result.cover_instances;
        if (!pieces.holds) ++result.cover_violations;
        if (pieces.lhs < -1e-9) ++result.cover_monotone_violations;
        const auto relaxed = relaxed_least_upper_values(
            basis, cover_reduction, exact.values);
        for (int s = 0; s < S; ++s)
          if (!relaxed[s] || *relaxed[s] > full_values(s) + 1e-7)
            ++result.cover_monotone_violations;
        report.cover = pieces;
      }
    }

    result.reports.push_back(std::move(report));
    ++result.instances;
  }
  return result;
}

ProjectionSuiteResult run_projection_suite(const Mdp& mdp,
                                           const BasisMatrix& basis,
                                           const ReductionMatrix& reduction,
                                           const WeightVector& psi, Rng& rng,
                                           int pairs) {
  ProjectionSuiteResult result;
  result.pairs = pairs;
  result.beta_psi = stability_coefficient(mdp, psi);
  const int S = mdp.n_states;

  auto random_value = [&](double span) {
    ValueVector J(S);
    for (int s = 0; s < S; ++s) J(s) = rng.uniform(-span, span);
    return J;
  };

  for (int pair = 0; pair < pairs; ++pair) {
    const ValueVector j1 = random_value(2.0);
    ValueVector j2 = random_value(2.0);
    const ValueVector g1 =
        relaxed_backup_projection_values(mdp, basis, reduction, j1);
    ValueVector g2 =
        relaxed_backup_projection_values(mdp, basis, reduction, j2);

    // Contraction ratio in the psi-weighted norm.
    const double denom = weighted_max_norm(j1 - j2, psi);
    if (denom > 1e-12) {
      const double ratio = weighted_max_norm(g1 - g2, psi) / denom;
      result.worst_contraction_ratio =
          std::max(result.worst_contraction_ratio, ratio);
    }

    // Monotonicity: compare against a dominating perturbation of j1.
    ValueVector above = j1;
    for (int s = 0; s < S; ++s) above(s) += rng.uniform();
    const ValueVector g_above =
        relaxed_backup_projection_values(mdp, basis, reduction, above);
    if (((g_above - g1).array() < -1e-8).any()) result.monotone = false;

    // psi-shift: G(J + t psi) <= G J + beta t psi.
    const double t = rng.uniform(0.0, 2.0);
    const ValueVector g_shift = relaxed_backup_projection_values(
        mdp, basis, reduction, j1 + t * psi);
    const ValueVector allowance =
        g1 + result.beta_psi * t * psi +
        ValueVector::Constant(S, 1e-7);
    if ((g_shift.array() > allowance.array()).any())
      result.shift_holds = false;
  }

  const ValueVector fixed_point =
      relaxed_backup_fixed_point(mdp, basis, reduction, psi);
  result.fixed_point_residual = weighted_max_norm(
      relaxed_backup_projection_values(mdp, basis, reduction, fixed_point) -
          fixed_point,
      psi);

  const WeightVector uniform = WeightVector::Constant(S, 1.0 / S);
  const LralpSolution solution = solve_lralp(mdp, basis, reduction, uniform);
  if (solution.status == LpStatus::Optimal) {
    if (((solution.values - fixed_point).array() < -1e-7).any())
      result.solution_dominates_fixed_point = false;
  }
  return result;
}

}  // namespace lralp
