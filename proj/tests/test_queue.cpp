#include <doctest.h>

#include <sstream>

#include "lralp/io.hpp"
#include "lralp/queue_bench.hpp"

using namespace lralp;

TEST_CASE("configuration validation") {
  QueueConfig config = QueueConfig::defaults(50);
  CHECK_NOTHROW(config.validate());
  CHECK(config.effective_discount() == doctest::Approx(1.0 - 1.0 / 50));
  CHECK(config.effective_scale() == doctest::Approx(50.0));

  SUBCASE("arrival plus service above one is rejected") {
    config.arrival_p = 0.4;  // 0.4 + 0.8 > 1
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  }
  SUBCASE("descending rates are rejected") {
    config.service_rates << 0.8, 0.6, 0.4, 0.2;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  }
  SUBCASE("unstabilizable queue is rejected") {
    config.service_rates << 0.05, 0.1, 0.12, 0.15;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  }
}

TEST_CASE("transition and reward structure") {
  QueueConfig config = QueueConfig::defaults(8);
  const Mdp mdp = build_queue_mdp(config);
  mdp.validate();  // row sums at the boundaries included

  SUBCASE("interior rows follow the birth-death pattern") {
    for (int a = 0; a < 4; ++a) {
      const double q = config.service_rates(a);
      for (int s = 1; s < 7; ++s) {
        CHECK(mdp.transition[a](s, s + 1) == doctest::Approx(0.2));
        CHECK(mdp.transition[a](s, s - 1) == doctest::Approx(q));
        CHECK(mdp.transition[a](s, s) == doctest::Approx(1.0 - 0.2 - q));
      }
    }
  }
  SUBCASE("boundary rows keep the missing mass in place") {
    for (int a = 0; a < 4; ++a) {
      CHECK(mdp.transition[a](0, 1) == doctest::Approx(0.2));
      CHECK(mdp.transition[a](0, 0) == doctest::Approx(0.8));
      const double q = config.service_rates(a);
      CHECK(mdp.transition[a](7, 6) == doctest::Approx(q));
      CHECK(mdp.transition[a](7, 7) == doctest::Approx(1.0 - q));
    }
  }
  SUBCASE("reward of the fastest action at an empty queue") {
    CHECK(mdp.reward(0, 3) == doctest::Approx(-0.512));  // -(0 + 0.8^3)
  }
  SUBCASE("queue cost scales with the configured divisor") {
    CHECK(mdp.reward(5, 0) ==
          doctest::Approx(-(5.0 / 8.0 + 0.2 * 0.2 * 0.2)));
  }
}

TEST_CASE("polynomial features") {
  const BasisMatrix basis = polynomial_basis(12, 4);
  CHECK(basis.k() == 4);
  CHECK(basis.ones_certified);
  SUBCASE("first column is constant one") {
    CHECK((basis.phi.col(0).array() == 1.0).all());
  }
  SUBCASE("columns are powers rescaled to unit max") {
    for (int j = 0; j < 4; ++j) {
      CHECK(basis.phi.col(j).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
      for (int s = 0; s < 12; ++s)
        CHECK(basis.phi(s, j) * std::pow(11.0, j) ==
              doctest::Approx(std::pow(static_cast<double>(s), j)));
    }
  }
  SUBCASE("single feature is the constant column") {
    const BasisMatrix flat = polynomial_basis(5, 1);
    CHECK((flat.phi.array() == 1.0).all());
  }
}

TEST_CASE("spread anchor states scale proportionally") {
  const std::vector<int> full = lra_spread_states(1000);
  REQUIRE(full.size() == 6);
  CHECK(full[0] == 1);
  CHECK(full[1] == 200);
  CHECK(full[2] == 400);
  CHECK(full[3] == 600);
  CHECK(full[4] == 800);
  CHECK(full[5] == 999);

  const std::vector<int> desk = lra_spread_states(100);
  REQUIRE(desk.size() == 6);
  CHECK(desk[0] == 1);
  CHECK(desk[5] == 99);
}

TEST_CASE("lookahead policies on a small queue") {
  QueueConfig config = QueueConfig::defaults(30);
  const QueueContext context = make_queue_context(config);

  SUBCASE("spread variant is deterministic and near optimal at the bottom") {
    const LookaheadResult first =
        lookahead_policy(context, LookaheadVariant::LRA, 0);
    const LookaheadResult second =
        lookahead_policy(context, LookaheadVariant::LRA, 99);
    CHECK((first.policy.action.array() == second.policy.action.array()).all());
    // Its exact value never exceeds the optimum.
    const ValueVector value = policy_value(context.mdp, first.policy);
    CHECK(((context.exact.values - value).array() >= -1e-8).all());
  }
  SUBCASE("sampled variants are seed-deterministic") {
    const LookaheadResult a =
        lookahead_policy(context, LookaheadVariant::CS, 7);
    const LookaheadResult b =
        lookahead_policy(context, LookaheadVariant::CS, 7);
    CHECK((a.policy.action.array() == b.policy.action.array()).all());
    const LookaheadResult ideal =
        lookahead_policy(context, LookaheadVariant::CSIdeal, 7);
    const ValueVector value = policy_value(context.mdp, ideal.policy);
    CHECK(((context.exact.values - value).array() >= -1e-8).all());
  }
}

TEST_CASE("experiment table and summary") {
  QueueConfig config = QueueConfig::defaults(24);
  const ExperimentResult result = run_experiment(config, {1, 2, 3});
  CHECK(result.gap_lra >= 0.0);
  REQUIRE(result.gap_cs.size() == 3);
  REQUIRE(result.j_cs.size() == 3);
  for (double gap : result.gap_cs) CHECK(gap >= 0.0);
  for (const auto& value : result.j_cs)
    CHECK(((result.j_star - value).array() >= -1e-8).all());

  // The optimal value decreases with the queue length for this cost
  // structure; record it as an observation of the model.
  bool monotone = true;
  for (int s = 0; s + 1 < 24; ++s)
    monotone = monotone && result.j_star(s + 1) <= result.j_star(s) + 1e-9;
  CHECK(monotone);

  std::ostringstream table;
  io::write_experiment_table(table, result);
  std::istringstream lines(table.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line ==
        "state,J_star,J_LRA,J_CS_mean,J_CS_std,J_CS_ideal_mean,J_CS_ideal_std,"
        "u_star,u_LRA,u_CS_mode,u_CS_ideal_mode");
  int rows = 0;
  while (std::getline(lines, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 24);

  std::ostringstream summary;
  io::write_experiment_summary(summary, result);
  CHECK(summary.str().find("seed,gap_LRA,gap_CS,gap_CS_ideal") == 0);
}
