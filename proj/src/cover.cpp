#include "lralp/cover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "lralp/rng.hpp"

namespace lralp {

Eigen::VectorXd ConicCover::weighted_row_sums(const WeightVector& psi) const {
  Eigen::VectorXd selected_psi(states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    selected_psi(i) = psi(states[i]);
  return lambda * selected_psi;
}

ConicMembership conic_membership(const BasisMatrix& basis,
                                 const std::vector<int>& selected, int state,
                                 const WeightVector* psi) {
  basis.validate();
  require(state >= 0 && state < basis.phi.rows(),
          "conic_membership: state out of range");
  const int k = basis.k();
  const int n0 = static_cast<int>(selected.size());
  const Eigen::VectorXd target = basis.feature(state);

  ConicMembership result;
  if (n0 == 0) {
    // The cone of the empty set is {0}.
    result.feasible = target.cwiseAbs().maxCoeff() == 0.0;
    result.lambda.resize(0);
    result.infeasibility = target.cwiseAbs().sum();
    return result;
  }

  Eigen::MatrixXd selected_features(k, n0);  // columns phi(s'), s' in S0
  for (int i = 0; i < n0; ++i) {
    require(selected[i] >= 0 && selected[i] < basis.phi.rows(),
            "conic_membership: selected state out of range");
    selected_features.col(i) = basis.feature(selected[i]);
  }

  // Exact membership with the weighted-row-sum objective:
  //   min sum_i lambda_i psi(s'_i)  s.t.  Phi_0' lambda = phi(s), lambda >= 0.
  {
    LpProblem lp;
    lp.constraints.resize(2 * k + n0, n0);
    lp.constraints.topRows(k) = selected_features;
    lp.constraints.middleRows(k, k) = -selected_features;
    lp.constraints.bottomRows(n0) = Eigen::MatrixXd::Identity(n0, n0);
    lp.rhs.resize(2 * k + n0);
    lp.rhs.head(k) = target;
    lp.rhs.segment(k, k) = -target;
    lp.rhs.tail(n0).setZero();
    lp.objective.setOnes(n0);
    if (psi != nullptr)
      for (int i = 0; i < n0; ++i) lp.objective(i) = (*psi)(selected[i]);
    const LpOutcome outcome = solve_lp(lp);
    if (outcome.status == LpStatus::Optimal) {
      result.feasible = true;
      result.lambda = outcome.x.cwiseMax(0.0);
      result.infeasibility = 0.0;
      return result;
    }
  }

  // Not in the cone; measure the violation as the l1 distance
  //   min ||Phi_0' lambda - phi(s)||_1  over lambda >= 0,
  // via the split  Phi_0' lambda + pos - neg = phi(s).
  {
    const int n = n0 + 2 * k;
    LpProblem lp;
    lp.constraints.setZero(2 * k + n, n);
    lp.constraints.topLeftCorner(k, n0) = selected_features;
    lp.constraints.block(0, n0, k, k) = Eigen::MatrixXd::Identity(k, k);
    lp.constraints.block(0, n0 + k, k, k) = -Eigen::MatrixXd::Identity(k, k);
    lp.constraints.middleRows(k, k) = -lp.constraints.topRows(k);
    lp.constraints.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
    lp.rhs.setZero(2 * k + n);
    lp.rhs.head(k) = target;
    lp.rhs.segment(k, k) = -target;
    lp.objective.setZero(n);
    lp.objective.tail(2 * k).setOnes();
    const LpOutcome outcome = solve_lp(lp);
    if (outcome.status != LpStatus::Optimal)
      throw std::runtime_error(
          "conic_membership: violation program must be solvable (internal "
          "error)");
    result.feasible = false;
    result.infeasibility = std::max(outcome.objective, 0.0);
    return result;
  }
}

namespace {

// Assembles Lambda, zeta, and the worst residual for a chosen state set.
ConicCover finalize_cover(const BasisMatrix& basis,
                          const std::vector<int>& selected,
                          const WeightVector& psi,
                          const std::vector<char>& skip_membership) {
  const int S = static_cast<int>(basis.phi.rows());
  const int n0 = static_cast<int>(selected.size());
  ConicCover cover;
  cover.states = selected;
  std::vector<int> position_of(S, -1);
  for (int i = 0; i < n0; ++i) position_of[selected[i]] = i;

  std::vector<Eigen::Triplet<double>> triplets;
  double zeta = 0.0;
  double residual_max = 0.0;
  for (int s = 0; s < S; ++s) {
    if (position_of[s] >= 0) {
      triplets.emplace_back(s, position_of[s], 1.0);
      zeta = std::max(zeta, 1.0);
      continue;
    }
    if (skip_membership[s]) {
      // Left uncovered by a spent budget; the zero row records nothing and
      // the residual reflects the miss.
      residual_max =
          std::max(residual_max, basis.feature(s).cwiseAbs().maxCoeff());
      continue;
    }
    const ConicMembership membership =
        conic_membership(basis, selected, s, &psi);
    require(membership.feasible,
            "finalize_cover: state reported covered fails membership");
    double row_sum = 0.0;
    Eigen::VectorXd reconstructed = Eigen::VectorXd::Zero(basis.k());
    for (int i = 0; i < n0; ++i) {
      const double value = membership.lambda(i);
      if (value != 0.0) {
        triplets.emplace_back(s, i, value);
        row_sum += value;
        reconstructed += value * basis.feature(selected[i]);
      }
    }
    zeta = std::max(zeta, row_sum);
    residual_max = std::max(
        residual_max,
        (reconstructed - basis.feature(s)).cwiseAbs().maxCoeff());
  }
  cover.lambda.resize(S, n0);
  cover.lambda.setFromTriplets(triplets.begin(), triplets.end());
  cover.zeta = zeta;
  cover.residual_max = residual_max;
  return cover;
}

}  // namespace

GreedyCoverResult greedy_conic_cover(const BasisMatrix& basis,
                                     const WeightVector& psi, int budget,
                                     double tol) {
  basis.validate();
  require(budget >= 1, "greedy_conic_cover: budget must be positive");
  require(psi.size() == basis.phi.rows(),
          "greedy_conic_cover: psi length mismatch");
  check_positive_weights(psi);
  const int S = static_cast<int>(basis.phi.rows());

  // Rank by decreasing feature magnitude (max-norm, then 1-norm) so that the
  // most extreme rays are preferred among equal violations.
  std::vector<int> rank_of(S);
  {
    std::vector<int> order(S);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      const double max_a = basis.feature(a).cwiseAbs().maxCoeff();
      const double max_b = basis.feature(b).cwiseAbs().maxCoeff();
      if (max_a != max_b) return max_a > max_b;
      const double one_a = basis.feature(a).cwiseAbs().sum();
      const double one_b = basis.feature(b).cwiseAbs().sum();
      if (one_a != one_b) return one_a > one_b;
      return a < b;
    });
    for (int i = 0; i < S; ++i) rank_of[order[i]] = i;
  }

  std::vector<int> selected;
  std::vector<char> covered(S, 0);
  std::vector<double> violation(S, 0.0);
  while (static_cast<int>(selected.size()) < budget) {
    int pick = -1;
    for (int s = 0; s < S; ++s) {
      if (covered[s]) continue;
      const ConicMembership membership =
          conic_membership(basis, selected, s, nullptr);
      const double scale = 1.0 + basis.feature(s).cwiseAbs().maxCoeff();
      if (membership.feasible || membership.infeasibility <= tol * scale) {
        covered[s] = 1;
        continue;
      }
      violation[s] = membership.infeasibility;
      if (pick < 0 || violation[s] > violation[pick] ||
          (violation[s] == violation[pick] && rank_of[s] < rank_of[pick]))
        pick = s;
    }
    if (pick < 0) break;  // everything covered
    selected.push_back(pick);
    covered[pick] = 1;
  }

  GreedyCoverResult result;
  std::vector<char> skip(S, 0);
  for (int s = 0; s < S; ++s) {
    if (covered[s]) continue;
    // Budget exhausted: re-test against the final set before giving up.
    const ConicMembership membership =
        conic_membership(basis, selected, s, nullptr);
    const double scale = 1.0 + basis.feature(s).cwiseAbs().maxCoeff();
    if (!membership.feasible && membership.infeasibility > tol * scale) {
      result.uncovered.push_back(s);
      skip[s] = 1;
    }
  }
  result.cover = finalize_cover(basis, selected, psi, skip);
  return result;
}

SeparableCover separable_cover(const Eigen::VectorXd& h1,
                               const Eigen::VectorXd& h2) {
  const int S1 = static_cast<int>(h1.size());
  const int S2 = static_cast<int>(h2.size());
  require(S1 >= 1 && S2 >= 1, "separable_cover: empty factor");
  int z1 = -1, z2 = -1;
  for (int i = 0; i < S1 && z1 < 0; ++i)
    if (h1(i) == 0.0) z1 = i;
  for (int i = 0; i < S2 && z2 < 0; ++i)
    if (h2(i) == 0.0) z2 = i;
  require(z1 >= 0 && z2 >= 0,
          "separable_cover: each factor needs a zero point h_i = 0");

  SeparableCover out;
  const int S = S1 * S2;
  out.basis.phi.resize(S, 2);
  for (int s1 = 0; s1 < S1; ++s1)
    for (int s2 = 0; s2 < S2; ++s2) {
      out.basis.phi(s1 * S2 + s2, 0) = h1(s1);
      out.basis.phi(s1 * S2 + s2, 1) = h2(s2);
    }

  // The cross S1 x {z2} union {z1} x S2, without the duplicate center.
  std::vector<int> selected;
  std::vector<int> position_of(S, -1);
  auto add = [&](int s1, int s2) {
    const int s = s1 * S2 + s2;
    if (position_of[s] < 0) {
      position_of[s] = static_cast<int>(selected.size());
      selected.push_back(s);
    }
  };
  for (int s1 = 0; s1 < S1; ++s1) add(s1, z2);
  for (int s2 = 0; s2 < S2; ++s2) add(z1, s2);

  std::vector<Eigen::Triplet<double>> triplets;
  double zeta = 0.0;
  for (int s1 = 0; s1 < S1; ++s1)
    for (int s2 = 0; s2 < S2; ++s2) {
      const int s = s1 * S2 + s2;
      if (position_of[s] >= 0) {
        triplets.emplace_back(s, position_of[s], 1.0);
        zeta = std::max(zeta, 1.0);
        continue;
      }
      // phi(s1, s2) = phi(s1, z2) + phi(z1, s2) exactly.
      triplets.emplace_back(s, position_of[s1 * S2 + z2], 1.0);
      triplets.emplace_back(s, position_of[z1 * S2 + s2], 1.0);
      zeta = std::max(zeta, 2.0);
    }
  out.cover.states = selected;
  out.cover.lambda.resize(S, static_cast<int>(selected.size()));
  out.cover.lambda.setFromTriplets(triplets.begin(), triplets.end());
  out.cover.zeta = zeta;
  out.cover.residual_max = 0.0;
  return out;
}

ReductionMatrix selection_reduction(const std::vector<int>& states,
                                    int n_states, int n_actions,
                                    int* duplicates_removed) {
  require(!states.empty(), "selection_reduction: empty state set");
  std::vector<int> unique;
  std::set<int> seen;
  for (int s : states) {
    require(s >= 0 && s < n_states, "selection_reduction: state out of range");
    if (seen.insert(s).second) unique.push_back(s);
  }
  if (duplicates_removed != nullptr)
    *duplicates_removed = static_cast<int>(states.size() - unique.size());

  const int m = static_cast<int>(unique.size());
  std::vector<std::vector<Eigen::Triplet<double>>> entries(n_actions);
  for (int a = 0; a < n_actions; ++a)
    for (int i = 0; i < m; ++i) entries[a].emplace_back(unique[i], i, 1.0);
  ReductionMatrix W =
      ReductionMatrix::from_triplets(n_states, n_actions, m, entries);
  W.is_selection = true;
  W.identical_blocks = true;
  return W;
}

ReductionMatrix per_action_selection(const std::vector<int>& states,
                                     int n_states, int n_actions,
                                     int* duplicates_removed) {
  require(!states.empty(), "per_action_selection: empty state set");
  std::vector<int> unique;
  std::set<int> seen;
  for (int s : states) {
    require(s >= 0 && s < n_states,
            "per_action_selection: state out of range");
    if (seen.insert(s).second) unique.push_back(s);
  }
  if (duplicates_removed != nullptr)
    *duplicates_removed = static_cast<int>(states.size() - unique.size());

  const int m = static_cast<int>(unique.size()) * n_actions;
  std::vector<std::vector<Eigen::Triplet<double>>> entries(n_actions);
  for (int a = 0; a < n_actions; ++a)
    for (std::size_t i = 0; i < unique.size(); ++i)
      entries[a].emplace_back(unique[i],
                              a * static_cast<int>(unique.size()) +
                                  static_cast<int>(i),
                              1.0);
  ReductionMatrix W = ReductionMatrix::from_triplets(
      n_states, n_actions, m, entries);
  W.is_selection = true;
  W.identical_blocks = n_actions == 1;
  return W;
}

SamplingDistribution ideal_occupancy_distribution(const Mdp& mdp,
                                                  const Policy& u,
                                                  int anchor) {
  check_policy(mdp, u);
  require(anchor >= 0 && anchor < mdp.n_states,
          "ideal_occupancy_distribution: anchor out of range");
  const int S = mdp.n_states;
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(S, S);
  for (int s = 0; s < S; ++s)
    system.row(s) -= mdp.discount * mdp.transition[u.action(s)].row(s);
  // anchor' (1-alpha) (I - alpha P_u)^{-1}  ==  solve the transposed system.
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(S);
  rhs(anchor) = 1.0 - mdp.discount;
  SamplingDistribution dist;
  dist.kind = SamplingDistribution::Kind::IdealOccupancy;
  dist.anchor = anchor;
  dist.weights = system.transpose().partialPivLu().solve(rhs);
  dist.weights = dist.weights.cwiseMax(0.0);  // clear roundoff negatives
  dist.weights /= dist.weights.sum();
  return dist;
}

SamplingDistribution geometric_distribution(int n_states, double alpha,
                                            int anchor) {
  require(n_states >= 1, "geometric_distribution: empty state space");
  require(alpha > 0.0 && alpha < 1.0, "geometric_distribution: bad alpha");
  require(anchor >= 0 && anchor < n_states,
          "geometric_distribution: anchor out of range");
  SamplingDistribution dist;
  dist.kind = SamplingDistribution::Kind::Geometric;
  dist.anchor = anchor;
  dist.weights.resize(n_states);
  for (int s = 0; s < n_states; ++s)
    dist.weights(s) =
        (1.0 - alpha) * std::pow(alpha, std::abs(anchor - s));
  dist.weights /= dist.weights.sum();
  return dist;
}

ReductionMatrix sampled_reduction(const SamplingDistribution& distribution,
                                  int m, std::uint64_t seed, int n_actions,
                                  int* duplicates_removed) {
  require(m >= 1, "sampled_reduction: m must be positive");
  check_distribution(distribution.weights, 1e-9);
  Rng rng(seed);
  std::vector<int> draws;
  draws.reserve(m);
  for (int i = 0; i < m; ++i)
    draws.push_back(rng.categorical(distribution.weights));
  return selection_reduction(draws,
                             static_cast<int>(distribution.weights.size()),
                             n_actions, duplicates_removed);
}

}  // namespace lralp
