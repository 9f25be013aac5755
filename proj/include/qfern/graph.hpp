#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfern/matrix.hpp"

namespace qfern {

// The one graph representation shared by every module: a dense non-negative
// weight matrix with a zero diagonal. Undirected graphs keep the matrix
// exactly symmetric. Values are immutable by convention once built.
struct WeightedGraph {
  std::size_t n = 0;
  Matrix weights;  // n x n
  bool directed = false;
};

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double w = 0.0;

  bool operator==(const Edge&) const = default;
};

WeightedGraph make_graph(std::size_t n, bool directed = false);

// Nonzero entries in deterministic order: (u,v) with u < v for undirected
// graphs, every nonzero entry row-major for directed ones.
std::vector<Edge> edge_list(const WeightedGraph& g);

// Random DAG: each pair (i, j) with i < j carries a unit edge independently
// with probability p, so the adjacency matrix is strictly upper triangular.
// Same (n, p, seed) gives a bit-identical graph.
WeightedGraph random_dag(std::size_t n, double p, std::uint64_t seed);

// (W + W^T) / 2; idempotent on undirected inputs.
WeightedGraph symmetrize(const WeightedGraph& g);

// Connectivity of the underlying undirected graph (edges in either direction).
bool is_connected(const WeightedGraph& g);
std::size_t component_count(const WeightedGraph& g);

// Line-oriented text format: header "n <count> directed|undirected", then one
// edge per line "u v w". Comments start with '#'. load(save(g)) == g exactly.
WeightedGraph load_graph(const std::string& path);
void save_graph(const WeightedGraph& g, const std::string& path);

struct DotOptions {
  // Per-node scalar shown as the label and binned into 5 quantile color
  // buckets. Must have length n when present.
  std::optional<std::vector<double>> node_values;
  // Nodes drawn with a red outline (e.g. flagged regions, added stabilizer).
  std::vector<std::size_t> emphasized;
};

std::string export_dot(const WeightedGraph& g);
std::string export_dot(const WeightedGraph& g, const DotOptions& options);

}  // namespace qfern
