#include <doctest.h>

#include <Eigen/Dense>

#include "lralp/campaign.hpp"
#include "lralp/mdp.hpp"
#include "lralp/rng.hpp"
#include "oracles.hpp"

using namespace lralp;

namespace {

Mdp two_state_swap(double discount) {
  // P swaps the states under action 0; action 1 holds still.
  std::vector<Eigen::MatrixXd> P(2);
  P[0].resize(2, 2);
  P[0] << 0, 1, 1, 0;
  P[1] = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd g(2, 2);
  g << 1.0, 0.5, 0.0, 0.25;
  return Mdp(2, 2, std::move(P), std::move(g), discount);
}

Policy constant_policy(int n_states, int action) {
  Policy u;
  u.action = Eigen::VectorXi::Constant(n_states, action);
  return u;
}

}  // namespace

TEST_CASE("constructor validation") {
  std::vector<Eigen::MatrixXd> P(1, Eigen::MatrixXd::Identity(2, 2));
  Eigen::MatrixXd g(2, 1);
  g << 0.5, 2.0;
  CHECK_THROWS_AS(Mdp(2, 1, P, g, 1.0), std::invalid_argument);  // discount
  CHECK_THROWS_AS(Mdp(2, 1, P, g, 0.9, /*strict_rewards=*/true),
                  std::invalid_argument);  // reward above 1 in strict mode
  CHECK_NOTHROW(Mdp(2, 1, P, g, 0.9));
  auto bad = P;
  bad[0](0, 0) = 0.5;  // row no longer stochastic
  CHECK_THROWS_AS(Mdp(2, 1, bad, g, 0.9), std::invalid_argument);
}

TEST_CASE("policy backup operator") {
  const Mdp mdp = two_state_swap(0.5);
  const Policy swap = constant_policy(2, 0);

  ValueVector J(2);
  J << 2.0, 4.0;
  // Hand product: (1 + 0.5*4, 0 + 0.5*2).
  const ValueVector out = apply_policy_operator(mdp, swap, J);
  CHECK(out(0) == doctest::Approx(3.0));
  CHECK(out(1) == doctest::Approx(1.0));

  // J = 0 returns the rewards of the chosen actions.
  const ValueVector at_zero =
      apply_policy_operator(mdp, swap, ValueVector::Zero(2));
  CHECK(at_zero(0) == doctest::Approx(1.0));
  CHECK(at_zero(1) == doctest::Approx(0.0));

  ValueVector wrong(3);
  wrong.setZero();
  CHECK_THROWS_AS(apply_policy_operator(mdp, swap, wrong),
                  std::invalid_argument);
}

TEST_CASE("bellman operator") {
  Rng rng(7);
  SUBCASE("single action reduces to the policy operator") {
    const Mdp mdp = random_mdp(rng, 5, 1, 0.7);
    ValueVector J(5);
    for (int s = 0; s < 5; ++s) J(s) = rng.normal();
    const ValueVector via_max = bellman_operator(mdp, J);
    const ValueVector via_policy =
        apply_policy_operator(mdp, constant_policy(5, 0), J);
    CHECK((via_max - via_policy).cwiseAbs().maxCoeff() == doctest::Approx(0));
  }
  SUBCASE("brute force over actions") {
    const Mdp mdp = random_mdp(rng, 5, 3, 0.8);
    ValueVector J(5);
    for (int s = 0; s < 5; ++s) J(s) = rng.normal();
    const ValueVector out = bellman_operator(mdp, J);
    for (int s = 0; s < 5; ++s) {
      double best = -1e100;
      for (int a = 0; a < 3; ++a)
        best = std::max(best, mdp.reward(s, a) +
                                  0.8 * mdp.transition[a].row(s).dot(J));
      CHECK(out(s) == doctest::Approx(best));
    }
  }
}

TEST_CASE("stacked backup operator") {
  Rng rng(8);
  const Mdp mdp = random_mdp(rng, 6, 3, 0.75);
  ValueVector J(6);
  for (int s = 0; s < 6; ++s) J(s) = rng.normal();

  const StateActionVector stacked = linear_bellman_operator(mdp, J);
  SUBCASE("blockwise max equals the Bellman operator") {
    const ValueVector T = bellman_operator(mdp, J);
    for (int s = 0; s < 6; ++s) {
      double best = stacked(s);
      for (int a = 1; a < 3; ++a) best = std::max(best, stacked(a * 6 + s));
      CHECK(best == doctest::Approx(T(s)));
    }
  }
  SUBCASE("affine shift by a constant") {
    const double t = 1.7;
    const StateActionVector shifted =
        linear_bellman_operator(mdp, J + t * ValueVector::Ones(6));
    const StateActionVector expected =
        stacked + mdp.discount * t *
                      stack_states(mdp, ValueVector::Ones(6));
    CHECK((shifted - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("psi-shift inequality with the stability coefficient") {
    const WeightVector psi = random_stable_weights(rng, mdp);
    const double beta = stability_coefficient(mdp, psi);
    const double t = 0.9;
    const StateActionVector shifted =
        linear_bellman_operator(mdp, J + t * psi);
    const StateActionVector allowance =
        stacked + beta * t * stack_states(mdp, psi);
    CHECK((shifted.array() <= allowance.array() + 1e-10).all());
  }
}

TEST_CASE("greedy policy") {
  Rng rng(9);
  SUBCASE("ties resolve to the first action") {
    std::vector<Eigen::MatrixXd> P(3, Eigen::MatrixXd::Identity(2, 2));
    Eigen::MatrixXd g(2, 3);
    g.setConstant(0.4);
    const Mdp mdp(2, 3, P, g, 0.9);
    const Policy u = greedy_policy(mdp, ValueVector::Zero(2));
    CHECK((u.action.array() == 0).all());
  }
  SUBCASE("greedy with respect to the exact optimum is optimal") {
    for (int trial = 0; trial < 10; ++trial) {
      const Mdp mdp = random_mdp(rng, 6, 3, rng.uniform(0.3, 0.9));
      const ExactSolution solution = solve_exact(mdp);
      const Policy u = greedy_policy(mdp, solution.values);
      const ValueVector value = policy_value(mdp, u);
      CHECK((value - solution.values).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("policy evaluation") {
  SUBCASE("self-loop geometric series") {
    std::vector<Eigen::MatrixXd> P(1, Eigen::MatrixXd::Identity(1, 1));
    Eigen::MatrixXd g(1, 1);
    g << 0.3;
    const Mdp mdp(1, 1, P, g, 0.8);
    const ValueVector J = policy_value(mdp, constant_policy(1, 0));
    CHECK(J(0) == doctest::Approx(0.3 / 0.2));
  }
  SUBCASE("zero rewards give zero value") {
    Rng rng(10);
    Mdp mdp = random_mdp(rng, 4, 2, 0.9);
    mdp.reward.setZero();
    const ValueVector J = policy_value(mdp, constant_policy(4, 1));
    CHECK(J.cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("matches the truncated series oracle") {
    Rng rng(11);
    for (int trial = 0; trial < 8; ++trial) {
      const Mdp mdp = random_mdp(rng, 6, 3, rng.uniform(0.3, 0.85));
      Policy u;
      u.action.resize(6);
      for (int s = 0; s < 6; ++s) u.action(s) = rng.uniform_int(3);
      const ValueVector direct = policy_value(mdp, u);
      const ValueVector series = oracle::policy_value_series(mdp, u);
      CHECK((direct - series).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("exact solver") {
  SUBCASE("single state closed form") {
    std::vector<Eigen::MatrixXd> P(1, Eigen::MatrixXd::Identity(1, 1));
    Eigen::MatrixXd g(1, 1);
    g << 1.0;
    const Mdp mdp(1, 1, P, g, 0.9);
    const ExactSolution solution = solve_exact(mdp);
    CHECK(solution.values(0) == doctest::Approx(10.0));
  }
  SUBCASE("fixed point residual and LP-mode agreement") {
    Rng rng(12);
    for (int trial = 0; trial < 12; ++trial) {
      const Mdp mdp =
          random_mdp(rng, 3 + rng.uniform_int(8), 1 + rng.uniform_int(3),
                     rng.uniform(0.2, 0.9));
      const ExactSolution solution = solve_exact(mdp);
      const double residual =
          (bellman_operator(mdp, solution.values) - solution.values)
              .cwiseAbs()
              .maxCoeff();
      CHECK(residual <= 1e-9);
      const WeightVector c =
          WeightVector::Constant(mdp.n_states, 1.0 / mdp.n_states);
      const ValueVector via_lp = solve_exact_lp(mdp, c);
      CHECK((via_lp - solution.values).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("weighted norms") {
  ValueVector J(3);
  J << 1.0, -2.0, 3.0;
  CHECK(weighted_one_norm(J, WeightVector::Constant(3, 1.0 / 3.0)) ==
        doctest::Approx(2.0));
  CHECK(weighted_one_norm(ValueVector::Zero(3),
                          WeightVector::Constant(3, 1.0 / 3.0)) ==
        doctest::Approx(0.0));
  WeightVector point = WeightVector::Zero(3);
  point(1) = 1.0;
  CHECK(weighted_one_norm(J, point) == doctest::Approx(2.0));

  ValueVector K(2);
  K << 2.0, -6.0;
  WeightVector psi(2);
  psi << 1.0, 3.0;
  CHECK(weighted_max_norm(K, psi) == doctest::Approx(2.0));
  CHECK(weighted_max_norm(K, WeightVector::Ones(2)) == doctest::Approx(6.0));
  // J = t psi recovers |t|.
  CHECK(weighted_max_norm(-1.3 * psi, psi) == doctest::Approx(1.3));
  psi(0) = 0.0;
  CHECK_THROWS_AS(weighted_max_norm(K, psi), std::invalid_argument);
}

TEST_CASE("stability coefficient") {
  Rng rng(13);
  SUBCASE("constant weights give the discount") {
    const Mdp mdp = random_mdp(rng, 5, 2, 0.77);
    CHECK(stability_coefficient(mdp, WeightVector::Ones(5)) ==
          doctest::Approx(0.77));
  }
  SUBCASE("absorbing chain is insensitive to the weights") {
    std::vector<Eigen::MatrixXd> P(2, Eigen::MatrixXd::Identity(1, 1));
    Eigen::MatrixXd g(1, 2);
    g.setZero();
    const Mdp mdp(1, 2, P, g, 0.6);
    WeightVector psi(1);
    psi << 17.0;
    CHECK(stability_coefficient(mdp, psi) == doctest::Approx(0.6));
  }
  SUBCASE("matches the exhaustive loop") {
    const Mdp mdp = random_mdp(rng, 6, 3, 0.85);
    WeightVector psi(6);
    for (int s = 0; s < 6; ++s) psi(s) = 0.5 + rng.uniform();
    double worst = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int s = 0; s < 6; ++s)
        worst = std::max(worst,
                         mdp.transition[a].row(s).dot(psi) / psi(s));
    CHECK(stability_coefficient(mdp, psi) == doctest::Approx(0.85 * worst));
  }
}

TEST_CASE("operator properties on random instances") {
  Rng rng(14);
  for (int trial = 0; trial < 6; ++trial) {
    const Mdp mdp = random_mdp(rng, 7, 3, rng.uniform(0.3, 0.9));
    const WeightVector psi = random_stable_weights(rng, mdp);
    const double beta = stability_coefficient(mdp, psi);

    ValueVector j1(7), j2(7);
    for (int s = 0; s < 7; ++s) {
      j1(s) = rng.normal();
      j2(s) = rng.normal();
    }

    // Monotonicity of T and the stacked backup.
    const ValueVector low = j1.cwiseMin(j2);
    const ValueVector high = j1.cwiseMax(j2);
    CHECK(((bellman_operator(mdp, high) - bellman_operator(mdp, low))
               .array() >= -1e-12)
              .all());
    CHECK(((linear_bellman_operator(mdp, high) -
            linear_bellman_operator(mdp, low))
               .array() >= -1e-12)
              .all());

    // Weighted-norm contraction.
    const double lhs = weighted_max_norm(
        bellman_operator(mdp, j1) - bellman_operator(mdp, j2), psi);
    CHECK(lhs <= beta * weighted_max_norm(j1 - j2, psi) + 1e-10);

    // Superharmonic dominance: J >= TJ implies J >= J*.
    const ExactSolution solution = solve_exact(mdp);
    ValueVector J = solution.values + rng.uniform() * ValueVector::Ones(7);
    for (int s = 0; s < 7; ++s) J(s) += 0.2 * rng.uniform();
    if (((J - bellman_operator(mdp, J)).array() >= 0).all())
      CHECK(((J - solution.values).array() >= -1e-9).all());

    // ||J||_{1,c} <= (c' psi) ||J||_{inf,psi}.
    const WeightVector c = random_distribution(rng, 7);
    CHECK(weighted_one_norm(j1, c) <=
          c.dot(psi) * weighted_max_norm(j1, psi) + 1e-12);
  }
}
