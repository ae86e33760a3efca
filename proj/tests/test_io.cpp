#include <doctest.h>

#include <nlohmann/json.hpp>

#include "lralp/campaign.hpp"
#include "lralp/io.hpp"

using namespace lralp;

TEST_CASE("doubles survive the shortest-decimal round trip") {
  Rng rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const double value = std::exp(rng.uniform(-30.0, 30.0)) *
                         (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform();
    CHECK(std::stod(io::format_double(value)) == value);
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("mdp json round trip is exact") {
  Rng rng(72);
  const Mdp mdp = random_mdp(rng, 7, 3, 0.875);
  const Mdp back = io::mdp_from_json(io::mdp_to_json(mdp));
  CHECK(back.n_states == 7);
  CHECK(back.n_actions == 3);
  CHECK(back.discount == 0.875);
  for (int a = 0; a < 3; ++a)
    CHECK((back.transition[a] - mdp.transition[a]).cwiseAbs().maxCoeff() ==
          0.0);
  CHECK((back.reward - mdp.reward).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("basis json round trip recertifies the span") {
  Rng rng(73);
  const BasisMatrix basis = random_basis(rng, 6, 3);
  const BasisMatrix back = io::basis_from_json(io::basis_to_json(basis));
  CHECK((back.phi - basis.phi).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.ones_certified);

  BasisMatrix no_ones;
  no_ones.phi.resize(3, 1);
  no_ones.phi << 1.0, 0.0, 0.0;
  const BasisMatrix back2 = io::basis_from_json(io::basis_to_json(no_ones));
  CHECK_FALSE(back2.ones_certified);
}

TEST_CASE("reduction json round trip keeps entries and flags") {
  SUBCASE("selection replicated across actions") {
    const ReductionMatrix W = selection_reduction({1, 4, 2}, 6, 3);
    const ReductionMatrix back =
        io::reduction_from_json(io::reduction_to_json(W), 6, 3);
    CHECK(back.m == 3);
    CHECK(back.is_selection);
    CHECK(back.identical_blocks);
    for (int a = 0; a < 3; ++a)
      CHECK((Eigen::MatrixXd(back.blocks[a]) - Eigen::MatrixXd(W.blocks[a]))
                .cwiseAbs()
                .maxCoeff() == 0.0);
  }
  SUBCASE("full per-pair selection") {
    const ReductionMatrix W = ReductionMatrix::full_selection(4, 2);
    const ReductionMatrix back =
        io::reduction_from_json(io::reduction_to_json(W), 4, 2);
    CHECK(back.is_selection);
    CHECK_FALSE(back.identical_blocks);
    CHECK(back.m == 8);
  }
  SUBCASE("general nonnegative weights are not a selection") {
    std::vector<std::vector<Eigen::Triplet<double>>> entries(2);
    entries[0].emplace_back(0, 0, 0.5);
    entries[0].emplace_back(1, 0, 0.5);
    entries[1].emplace_back(0, 0, 0.25);
    const ReductionMatrix W = ReductionMatrix::from_triplets(3, 2, 1, entries);
    const ReductionMatrix back =
        io::reduction_from_json(io::reduction_to_json(W), 3, 2);
    CHECK_FALSE(back.is_selection);
    CHECK_FALSE(back.identical_blocks);
    CHECK((Eigen::MatrixXd(back.blocks[0]) - Eigen::MatrixXd(W.blocks[0]))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("cover json round trip") {
  Rng rng(74);
  const BasisMatrix basis = random_basis(rng, 8, 2);
  const GreedyCoverResult greedy =
      greedy_conic_cover(basis, WeightVector::Ones(8), 8);
  REQUIRE(greedy.complete());
  const ConicCover back =
      io::cover_from_json(io::cover_to_json(greedy.cover), 8);
  CHECK(back.states == greedy.cover.states);
  CHECK(back.zeta == greedy.cover.zeta);
  CHECK(back.residual_max == greedy.cover.residual_max);
  CHECK((Eigen::MatrixXd(back.lambda) - Eigen::MatrixXd(greedy.cover.lambda))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("bound report row carries its header") {
  BoundReport report;
  report.eps = 0.25;
  report.realized_error = 0.5;
  report.error_bound_rhs = std::numeric_limits<double>::infinity();
  const std::string csv = io::bound_report_csv(report);
  CHECK(csv.find("eps,beta_psi") == 0);
  CHECK(csv.find("inf") != std::string::npos);
  // Exactly two lines: header and row.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}
