#include "lralp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lralp::io {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  const auto result =
      std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

json mdp_to_json(const Mdp& mdp) {
  json transition = json::array();
  json reward = json::array();
  for (int a = 0; a < mdp.n_actions; ++a) {
    json rows = json::array();
    for (int s = 0; s < mdp.n_states; ++s) {
      json row = json::array();
      for (int t = 0; t < mdp.n_states; ++t)
        row.push_back(mdp.transition[a](s, t));
      rows.push_back(std::move(row));
    }
    transition.push_back(std::move(rows));
    json g = json::array();
    for (int s = 0; s < mdp.n_states; ++s) g.push_back(mdp.reward(s, a));
    reward.push_back(std::move(g));
  }
  return json{{"n_states", mdp.n_states},
              {"n_actions", mdp.n_actions},
              {"discount", mdp.discount},
              {"transition", std::move(transition)},
              {"reward", std::move(reward)}};
}

Mdp mdp_from_json(const json& document) {
  const int S = document.at("n_states").get<int>();
  const int A = document.at("n_actions").get<int>();
  require(S >= 1 && A >= 1, "mdp_from_json: empty shape");
  std::vector<Eigen::MatrixXd> transition(A, Eigen::MatrixXd(S, S));
  Eigen::MatrixXd reward(S, A);
  const json& P = document.at("transition");
  const json& g = document.at("reward");
  require(static_cast<int>(P.size()) == A && static_cast<int>(g.size()) == A,
          "mdp_from_json: per-action arrays have wrong length");
  for (int a = 0; a < A; ++a) {
    require(static_cast<int>(P[a].size()) == S &&
                static_cast<int>(g[a].size()) == S,
            "mdp_from_json: per-state arrays have wrong length");
    for (int s = 0; s < S; ++s) {
      require(static_cast<int>(P[a][s].size()) == S,
              "mdp_from_json: transition row has wrong length");
      for (int t = 0; t < S; ++t)
        transition[a](s, t) = P[a][s][t].get<double>();
      reward(s, a) = g[a][s].get<double>();
    }
  }
  return Mdp(S, A, std::move(transition), std::move(reward),
             document.at("discount").get<double>());
}

json basis_to_json(const BasisMatrix& basis) {
  json columns = json::array();
  for (int j = 0; j < basis.k(); ++j) {
    json column = json::array();
    for (int s = 0; s < basis.n_states(); ++s)
      column.push_back(basis.phi(s, j));
    columns.push_back(std::move(column));
  }
  return json{{"n_states", basis.n_states()},
              {"k", basis.k()},
              {"columns", std::move(columns)}};
}

BasisMatrix basis_from_json(const json& document) {
  const int S = document.at("n_states").get<int>();
  const int k = document.at("k").get<int>();
  require(S >= 1 && k >= 1, "basis_from_json: empty shape");
  const json& columns = document.at("columns");
  require(static_cast<int>(columns.size()) == k,
          "basis_from_json: column count mismatch");
  BasisMatrix basis;
  basis.phi.resize(S, k);
  for (int j = 0; j < k; ++j) {
    require(static_cast<int>(columns[j].size()) == S,
            "basis_from_json: column length mismatch");
    for (int s = 0; s < S; ++s) basis.phi(s, j) = columns[j][s].get<double>();
  }
  basis.validate();
  // Certify the constant vector by least squares; exact bases stay certified
  // through a round-trip.
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(S);
  const Eigen::VectorXd fit =
      basis.phi.colPivHouseholderQr().solve(ones);
  basis.ones_certified = (basis.phi * fit - ones).cwiseAbs().maxCoeff() <= 1e-10;
  return basis;
}

json reduction_to_json(const ReductionMatrix& reduction) {
  json blocks = json::array();
  for (int a = 0; a < reduction.n_actions; ++a) {
    json entries = json::array();
    const auto& block = reduction.blocks[a];
    for (int col = 0; col < block.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(block, col); it; ++it)
        entries.push_back(json::array(
            {static_cast<int>(it.row()), static_cast<int>(it.col()),
             it.value()}));
    blocks.push_back(json{{"action", a}, {"entries", std::move(entries)}});
  }
  return json{{"m", reduction.m}, {"blocks", std::move(blocks)}};
}

ReductionMatrix reduction_from_json(const json& document, int n_states,
                                    int n_actions) {
  const int m = document.at("m").get<int>();
  require(m >= 1, "reduction_from_json: m must be positive");
  std::vector<std::vector<Eigen::Triplet<double>>> entries(n_actions);
  for (const json& block : document.at("blocks")) {
    const int a = block.at("action").get<int>();
    require(a >= 0 && a < n_actions, "reduction_from_json: action out of range");
    for (const json& entry : block.at("entries")) {
      require(entry.size() == 3, "reduction_from_json: entry must be a triple");
      const int s = entry[0].get<int>();
      const int col = entry[1].get<int>();
      require(s >= 0 && s < n_states && col >= 0 && col < m,
              "reduction_from_json: entry index out of range");
      entries[a].emplace_back(s, col, entry[2].get<double>());
    }
  }
  ReductionMatrix W =
      ReductionMatrix::from_triplets(n_states, n_actions, m, entries);

  // Re-derive the structural flags by inspection.
  W.identical_blocks = true;
  for (int a = 1; a < n_actions && W.identical_blocks; ++a) {
    const Eigen::MatrixXd diff =
        Eigen::MatrixXd(W.blocks[a]) - Eigen::MatrixXd(W.blocks[0]);
    if (diff.cwiseAbs().maxCoeff() != 0.0) W.identical_blocks = false;
  }
  W.is_selection = true;
  for (int col = 0; col < W.m && W.is_selection; ++col) {
    int total_nonzeros = 0;
    int unit_entries = 0;
    int replicated_state = -2;  // -2 unset, -1 broken
    for (int a = 0; a < n_actions; ++a) {
      int state = -1;
      int nonzeros = 0;
      for (Eigen::SparseMatrix<double>::InnerIterator it(W.blocks[a], col); it;
           ++it) {
        if (it.value() == 0.0) continue;
        ++nonzeros;
        ++total_nonzeros;
        state = static_cast<int>(it.row());
        if (it.value() == 1.0) ++unit_entries;
      }
      if (nonzeros == 1 && (replicated_state == -2 || replicated_state == state))
        replicated_state = state;
      else
        replicated_state = -1;
    }
    const bool single_pair = total_nonzeros == 1 && unit_entries == 1;
    const bool replicated = replicated_state >= 0 &&
                            total_nonzeros == n_actions &&
                            unit_entries == n_actions;
    if (!(single_pair || replicated)) W.is_selection = false;
  }
  return W;
}

json cover_to_json(const ConicCover& cover) {
  json lambda = json::array();
  for (int col = 0; col < cover.lambda.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(cover.lambda, col); it;
         ++it)
      lambda.push_back(json::array({static_cast<int>(it.row()),
                                    static_cast<int>(it.col()), it.value()}));
  return json{{"states", cover.states},
              {"lambda", std::move(lambda)},
              {"zeta", cover.zeta},
              {"residual_max", cover.residual_max}};
}

ConicCover cover_from_json(const json& document, int n_states) {
  ConicCover cover;
  cover.states = document.at("states").get<std::vector<int>>();
  const int n0 = static_cast<int>(cover.states.size());
  std::vector<Eigen::Triplet<double>> triplets;
  for (const json& entry : document.at("lambda")) {
    require(entry.size() == 3, "cover_from_json: entry must be a triple");
    const int s = entry[0].get<int>();
    const int col = entry[1].get<int>();
    require(s >= 0 && s < n_states && col >= 0 && col < n0,
            "cover_from_json: entry index out of range");
    triplets.emplace_back(s, col, entry[2].get<double>());
  }
  cover.lambda.resize(n_states, n0);
  cover.lambda.setFromTriplets(triplets.begin(), triplets.end());
  cover.zeta = document.at("zeta").get<double>();
  cover.residual_max = document.at("residual_max").get<double>();
  return cover;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json document;
  in >> document;
  return document;
}

void save_json_file(const std::string& path, const json& document) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << document.dump(2) << '\n';
}

std::string bound_report_csv(const BoundReport& report) {
  std::ostringstream out;
  out << "eps,beta_psi,c_dot_psi,dev_alp_lralp,error_bound_rhs,"
         "realized_error,empirical_ratio,lralp_solved,pointwise_unbounded,"
         "bound_holds,cover_lhs,cover_rhs,cover_coarse_rhs,lambda_psi_norm,"
         "zeta,cover_holds\n";
  out << format_double(report.eps) << ',' << format_double(report.beta_psi)
      << ',' << format_double(report.c_dot_psi) << ','
      << format_double(report.dev_alp_lralp) << ','
      << format_double(report.error_bound_rhs) << ','
      << format_double(report.realized_error) << ','
      << format_double(report.empirical_ratio) << ','
      << (report.lralp_solved ? 1 : 0) << ','
      << (report.pointwise_unbounded ? 1 : 0) << ','
      << (report.bound_holds ? 1 : 0) << ',';
  if (report.cover) {
    out << format_double(report.cover->lhs) << ','
        << format_double(report.cover->rhs) << ','
        << format_double(report.cover->coarse_rhs) << ','
        << format_double(report.cover->lambda_psi_norm) << ','
        << format_double(report.cover->zeta) << ','
        << (report.cover->holds ? 1 : 0);
  } else {
    out << ",,,,,";
  }
  out << '\n';
  return out.str();
}

namespace {

int action_mode(const std::vector<Policy>& policies, int state) {
  std::vector<int> counts;
  for (const Policy& u : policies) {
    const int a = u.action(state);
    if (a >= static_cast<int>(counts.size())) counts.resize(a + 1, 0);
    ++counts[a];
  }
  int best = 0;
  for (int a = 1; a < static_cast<int>(counts.size()); ++a)
    if (counts[a] > counts[best]) best = a;
  return best;
}

void mean_std(const std::vector<ValueVector>& values, int state, double* mean,
              double* stddev) {
  const int n = static_cast<int>(values.size());
  double sum = 0.0;
  for (const auto& v : values) sum += v(state);
  *mean = sum / n;
  if (n < 2) {
    *stddev = 0.0;
    return;
  }
  double varsum = 0.0;
  for (const auto& v : values) varsum += (v(state) - *mean) * (v(state) - *mean);
  *stddev = std::sqrt(varsum / (n - 1));
}

}  // namespace

void write_experiment_table(std::ostream& out,
                            const ExperimentResult& result) {
  out << "state,J_star,J_LRA,J_CS_mean,J_CS_std,J_CS_ideal_mean,"
         "J_CS_ideal_std,u_star,u_LRA,u_CS_mode,u_CS_ideal_mode\n";
  for (int s = 0; s < result.config.n_states; ++s) {
    double cs_mean, cs_std, ideal_mean, ideal_std;
    mean_std(result.j_cs, s, &cs_mean, &cs_std);
    mean_std(result.j_cs_ideal, s, &ideal_mean, &ideal_std);
    out << s << ',' << format_double(result.j_star(s)) << ','
        << format_double(result.j_lra(s)) << ',' << format_double(cs_mean)
        << ',' << format_double(cs_std) << ',' << format_double(ideal_mean)
        << ',' << format_double(ideal_std) << ',' << result.u_star.action(s)
        << ',' << result.u_lra.action(s) << ','
        << action_mode(result.u_cs, s) << ','
        << action_mode(result.u_cs_ideal, s) << '\n';
  }
}

void write_experiment_summary(std::ostream& out,
                              const ExperimentResult& result) {
  out << "seed,gap_LRA,gap_CS,gap_CS_ideal\n";
  for (std::size_t i = 0; i < result.seeds.size(); ++i)
    out << result.seeds[i] << ',' << format_double(result.gap_lra) << ','
        << format_double(result.gap_cs[i]) << ','
        << format_double(result.gap_cs_ideal[i]) << '\n';
}

void write_value_csv(std::ostream& out, const ValueVector& values,
                     const Policy* policy) {
  out << (policy != nullptr ? "state,value,action\n" : "state,value\n");
  for (int s = 0; s < values.size(); ++s) {
    out << s << ',' << format_double(values(s));
    if (policy != nullptr) out << ',' << policy->action(s);
    out << '\n';
  }
}

}  // namespace lralp::io
