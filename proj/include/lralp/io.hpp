#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "lralp/basis.hpp"
#include "lralp/bounds.hpp"
#include "lralp/cover.hpp"
#include "lralp/lralp.hpp"
#include "lralp/mdp.hpp"
#include "lralp/queue_bench.hpp"

namespace lralp::io {

using nlohmann::json;

// JSON document schemas (states and actions are zero-based everywhere):
//   MDP:    {n_states, n_actions, discount, transition: A x S x S,
//            reward: A x S}
//   basis:  {n_states, k, columns: k arrays of length S}
//   W:      {m, blocks: [{action, entries: [[state, column, value], ...]}]}
//   cover:  {states, lambda: [[state, column, value], ...], zeta,
//            residual_max}
// Doubles are written in shortest round-trip decimal form.

json mdp_to_json(const Mdp& mdp);
Mdp mdp_from_json(const json& document);

json basis_to_json(const BasisMatrix& basis);
/// Re-derives the span certificate on load by least squares against the
/// constant vector, so certified files stay certified without extra fields.
BasisMatrix basis_from_json(const json& document);

json reduction_to_json(const ReductionMatrix& reduction);
ReductionMatrix reduction_from_json(const json& document, int n_states,
                                    int n_actions);

json cover_to_json(const ConicCover& cover);
ConicCover cover_from_json(const json& document, int n_states);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& document);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Header plus one flat row with every bound-report quantity.
std::string bound_report_csv(const BoundReport& report);

/// Per-state comparison table of the queue experiment.
void write_experiment_table(std::ostream& out, const ExperimentResult& result);

/// Per-seed weighted-1-norm gaps of the queue experiment.
void write_experiment_summary(std::ostream& out,
                              const ExperimentResult& result);

/// Two-column state/value table, used by the solve commands.
void write_value_csv(std::ostream& out, const ValueVector& values,
                     const Policy* policy = nullptr);

}  // namespace lralp::io
