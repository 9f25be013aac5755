#pragma once

// JSON bindings for the report types. All floating-point values are rounded
// to 12 significant digits before serialization so outputs are stable.

#include <json.hpp>

#include "qfern/cuts.hpp"
#include "qfern/format.hpp"
#include "qfern/graph.hpp"
#include "qfern/matrix.hpp"
#include "qfern/rewire.hpp"
#include "qfern/sync.hpp"

namespace qfern {

using nlohmann::json;

inline json json_doubles(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(round12(v));
  return out;
}

inline json json_matrix(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(round12(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline Matrix matrix_from_json(const json& j) {
  std::size_t rows = j.size();
  std::size_t cols = rows ? j.at(0).size() : 0;
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t jx = 0; jx < cols; ++jx) m(i, jx) = j.at(i).at(jx).get<double>();
  return m;
}

inline void to_json(json& j, const Edge& e) { j = json::array({e.u, e.v, round12(e.w)}); }
inline void from_json(const json& j, Edge& e) {
  e.u = j.at(0).get<std::size_t>();
  e.v = j.at(1).get<std::size_t>();
  e.w = j.at(2).get<double>();
}

inline void to_json(json& j, const WeightedGraph& g) {
  j = json{{"n", g.n}, {"directed", g.directed}, {"edges", edge_list(g)}};
}
inline void from_json(const json& j, WeightedGraph& g) {
  g = make_graph(j.at("n").get<std::size_t>(), j.at("directed").get<bool>());
  for (const auto& item : j.at("edges")) {
    Edge e = item.get<Edge>();
    g.weights(e.u, e.v) = e.w;
    if (!g.directed) g.weights(e.v, e.u) = e.w;
  }
}

inline void to_json(json& j, const CutResult& c) {
  j = json{{"side_a", c.side_a},
           {"side_b", c.side_b},
           {"boundary_weight", round12(c.boundary_weight)},
           {"ratio", round12(c.ratio)},
           {"normalization", c.normalization == CutNormalization::MinSide ? "min_side" : "size_only"}};
}
inline void from_json(const json& j, CutResult& c) {
  c.side_a = j.at("side_a").get<std::vector<std::size_t>>();
  c.side_b = j.at("side_b").get<std::vector<std::size_t>>();
  c.boundary_weight = j.at("boundary_weight").get<double>();
  c.ratio = j.at("ratio").get<double>();
  c.normalization = j.at("normalization").get<std::string>() == "min_side"
                        ? CutNormalization::MinSide
                        : CutNormalization::SizeOnly;
}

inline void to_json(json& j, const IterationRecord& r) {
  j = json{{"step", r.step},         {"removed", r.removed}, {"accepted", r.accepted},
           {"h", round12(r.h)},      {"lambda2", round12(r.lambda2)},
           {"r_total", round12(r.r_total)}};
  j["added"] = r.added ? json(*r.added) : json(nullptr);
}
inline void from_json(const json& j, IterationRecord& r) {
  r.step = j.at("step").get<std::size_t>();
  r.removed = j.at("removed").get<Edge>();
  r.accepted = j.at("accepted").get<bool>();
  r.h = j.at("h").get<double>();
  r.lambda2 = j.at("lambda2").get<double>();
  r.r_total = j.at("r_total").get<double>();
  r.added = j.at("added").is_null() ? std::nullopt : std::optional<Edge>(j.at("added").get<Edge>());
}

inline void to_json(json& j, const RewiringReport& r) {
  j = json{{"initial_graph", r.initial_graph},
           {"final_graph", r.final_graph},
           {"final_asoft", json_matrix(r.final_asoft)},
           {"initial_h", round12(r.initial_h)},
           {"final_h", round12(r.final_h)},
           {"initial_r_total", round12(r.initial_r_total)},
           {"final_r_total", round12(r.final_r_total)},
           {"iterations", r.iterations}};
}
inline void from_json(const json& j, RewiringReport& r) {
  r.initial_graph = j.at("initial_graph").get<WeightedGraph>();
  r.final_graph = j.at("final_graph").get<WeightedGraph>();
  r.final_asoft = matrix_from_json(j.at("final_asoft"));
  r.initial_h = j.at("initial_h").get<double>();
  r.final_h = j.at("final_h").get<double>();
  r.initial_r_total = j.at("initial_r_total").get<double>();
  r.final_r_total = j.at("final_r_total").get<double>();
  r.iterations = j.at("iterations").get<std::vector<IterationRecord>>();
}

inline void to_json(json& j, const SyncAnalysis& a) {
  j = json{{"omega", json_doubles(a.omega)},
           {"x", json_doubles(a.x)},
           {"edges", a.edges},
           {"edge_diffs", json_doubles(a.edge_diffs)},
           {"einf_norm", round12(a.einf_norm)},
           {"lambda2_bound", round12(a.lambda2_bound)},
           {"stable", a.stable},
           {"degenerate_lambda2", a.degenerate_lambda2}};
}
inline void from_json(const json& j, SyncAnalysis& a) {
  a.omega = j.at("omega").get<std::vector<double>>();
  a.x = j.at("x").get<std::vector<double>>();
  a.edges = j.at("edges").get<std::vector<Edge>>();
  a.edge_diffs = j.at("edge_diffs").get<std::vector<double>>();
  a.einf_norm = j.at("einf_norm").get<double>();
  a.lambda2_bound = j.at("lambda2_bound").get<double>();
  a.stable = j.at("stable").get<bool>();
  a.degenerate_lambda2 = j.at("degenerate_lambda2").get<bool>();
}

inline void to_json(json& j, const FlaggedPair& p) {
  j = json::array({p.u, p.v, round12(p.r)});
}
inline void from_json(const json& j, FlaggedPair& p) {
  p.u = j.at(0).get<std::size_t>();
  p.v = j.at(1).get<std::size_t>();
  p.r = j.at(2).get<double>();
}

inline void to_json(json& j, const DesyncReport& r) {
  j = json{{"resistance", json_matrix(r.resistance.values)},
           {"threshold", round12(r.threshold)},
           {"flagged_pairs", r.flagged_pairs},
           {"flagged_nodes", r.flagged_nodes},
           {"phase_estimates", json_matrix(r.phase_estimates)},
           {"phase_estimate_note", "heuristic estimate: R_uv * |omega_u - omega_v|"}};
}
inline void from_json(const json& j, DesyncReport& r) {
  r.resistance.values = matrix_from_json(j.at("resistance"));
  r.threshold = j.at("threshold").get<double>();
  r.flagged_pairs = j.at("flagged_pairs").get<std::vector<FlaggedPair>>();
  r.flagged_nodes = j.at("flagged_nodes").get<std::vector<std::size_t>>();
  r.phase_estimates = matrix_from_json(j.at("phase_estimates"));
}

inline void to_json(json& j, const StabilizerResult& s) {
  j = json{{"attached", s.attached},
           {"delta_lambda2", round12(s.delta_lambda2)},
           {"delta_max_flagged_r", round12(s.delta_max_flagged_r)}};
}

inline void to_json(json& j, const SimulationResult& s) {
  j = json{{"theta", json_doubles(s.theta)},
           {"locked", s.locked},
           {"max_edge_phase_diff", round12(s.max_edge_phase_diff)}};
}
inline void from_json(const json& j, SimulationResult& s) {
  s.theta = j.at("theta").get<std::vector<double>>();
  s.locked = j.at("locked").get<bool>();
  s.max_edge_phase_diff = j.at("max_edge_phase_diff").get<double>();
}

}  // namespace qfern
