#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "json.hpp"

#include "bethe/bp.hpp"
#include "bethe/learning.hpp"
#include "bethe/model.hpp"

namespace bethe::io {

using json = nlohmann::json;

/// {"n", "edges": [[i, j], ...], "h", "J"}; edges must already be sorted.
json to_json(const IsingModel& model);
IsingModel model_from_json(const json& j);

/// Graph-only view of a model document (h and J may be absent).
Graph graph_from_json(const json& j);

/// {"qi_plus", "qij_pp"}
json to_json(const Pseudomarginals& q);
Pseudomarginals marginals_from_json(const json& j);

/// {"beliefs", "converged", "iterations", "final_delta"}
json to_json(const BPResult& result);

/// One JSON object per line: {iter, h, J, qi_plus, qij_pp, converged, mismatch_inf}.
void write_trajectory_jsonl(std::ostream& out, const LearningTrajectory& trajectory);

/// Run description stored next to a trajectory file: graph, target and options.
json trajectory_metadata(const LearningTrajectory& trajectory);

/// Rebuilds a trajectory from its JSON-lines body and metadata. Moment
/// mismatches are recomputed from the stored target and beliefs.
LearningTrajectory read_trajectory(std::istream& lines, const json& metadata);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// "# key=value" lines in key order.
std::string metadata_header(const std::map<std::string, std::string>& meta);

}  // namespace bethe::io
