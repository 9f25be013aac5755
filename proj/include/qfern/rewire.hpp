#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfern/cuts.hpp"
#include "qfern/graph.hpp"
#include "qfern/matrix.hpp"

namespace qfern {

enum class GradientMode {
  Signed,  // gradient[i][j] = -f[i]*f[j]
  Abs,     // gradient[i][j] = -|f[i]*f[j]|
};

enum class CandidatePolicy {
  CrossPartition,  // absent edges between the two Fiedler sides
  AllNonEdges,
};

struct RewiringConfig {
  double alpha = 0.05;
  GradientMode gradient_mode = GradientMode::Signed;
  std::size_t max_iterations = 50;
  std::size_t patience = 0;  // 0 disables early stopping
  std::uint64_t seed = 0;
  CandidatePolicy candidate_policy = CandidatePolicy::CrossPartition;
};

struct IterationRecord {
  std::size_t step = 0;
  Edge removed;
  std::optional<Edge> added;
  bool accepted = false;
  double h = 0.0;        // state after the accept/restore decision
  double lambda2 = 0.0;
  double r_total = 0.0;
};

struct RewiringReport {
  WeightedGraph initial_graph;
  WeightedGraph final_graph;
  Matrix final_asoft;
  double initial_h = 0.0;
  double final_h = 0.0;
  double initial_r_total = 0.0;
  double final_r_total = 0.0;
  std::vector<IterationRecord> iterations;
};

// Symmetric gradient with zero diagonal built from the outer product of the
// Fiedler vector.
Matrix fiedler_gradient(const std::vector<double>& fiedler, GradientMode mode);

// a + alpha*gradient, then symmetrized, clamped at zero and the diagonal
// forced back to zero; preserves the weight-matrix invariants.
Matrix asoft_update(const Matrix& a, const Matrix& gradient, double alpha);

struct SoftAdjacencyStep {
  WeightedGraph asoft;
  double lambda2_before = 0.0;
  double lambda2_after = 0.0;
};

// One gradient step on the (symmetrized) adjacency matrix.
SoftAdjacencyStep qfern_once(const WeightedGraph& g, const RewiringConfig& config);

// Edge-swap optimization: remove a random edge, add the absent cross-
// partition edge that maximizes the Cheeger constant, keep the swap only if
// it strictly improves h (or ties h and strictly lowers total resistance)
// while staying connected.
RewiringReport rewire_optimize(const WeightedGraph& g, const RewiringConfig& config);

// "step,h,lambda2,r_total,accepted" per-iteration trace.
std::string trace_csv(const RewiringReport& report);

}  // namespace qfern
