#pragma once

#include <string>
#include <vector>

#include "qfern/graph.hpp"
#include "qfern/spectral.hpp"

namespace qfern {

// Natural frequencies, centered on construction so the mean-free requirement
// of the stability analysis always holds; the raw input is kept for reports.
struct FrequencyVector {
  std::vector<double> omega;     // centered
  std::vector<double> original;  // as supplied

  static FrequencyVector centered(std::vector<double> raw);
};

struct SyncAnalysis {
  std::vector<double> omega;       // centered input
  std::vector<double> x;           // pseudoinverse applied to omega
  std::vector<Edge> edges;         // edge order for edge_diffs
  std::vector<double> edge_diffs;  // |x_u - x_v| per edge
  double einf_norm = 0.0;          // max over edges
  double lambda2_bound = 0.0;      // max_{i>=2} |f_i . omega| / lambda2
  bool stable = false;             // einf_norm < 1
  bool degenerate_lambda2 = false;
};

// Evaluates the edgewise-max stability condition on L^+ omega.
SyncAnalysis einf_norm_condition(const WeightedGraph& g, const FrequencyVector& omega);

struct ThresholdPolicy {
  enum class Kind { Absolute, Quantile };
  Kind kind = Kind::Quantile;
  double value = 0.8;

  static ThresholdPolicy absolute(double t) { return {Kind::Absolute, t}; }
  static ThresholdPolicy quantile(double q) { return {Kind::Quantile, q}; }
};

struct FlaggedPair {
  std::size_t u = 0;
  std::size_t v = 0;
  double r = 0.0;
};

struct DesyncReport {
  ResistanceMatrix resistance;
  double threshold = 0.0;
  std::vector<FlaggedPair> flagged_pairs;    // R above threshold, nonzero frequency mismatch
  std::vector<std::size_t> flagged_nodes;    // endpoints of flagged pairs, sorted
  Matrix phase_estimates;                    // R_uv * |omega_u - omega_v| (heuristic estimate)
};

DesyncReport detect_desync_regions(const WeightedGraph& g, const FrequencyVector& omega,
                                   const ThresholdPolicy& policy);

// "u,v,R,phase_estimate" rows for the flagged pairs.
std::string flagged_csv(const DesyncReport& report);

struct StabilizerResult {
  WeightedGraph graph;                  // grown by one node (id n)
  std::vector<std::size_t> attached;    // the k nodes wired to the new one
  double delta_lambda2 = 0.0;           // lambda2(new) - lambda2(old); sign not guaranteed
  double delta_max_flagged_r = 0.0;     // change in max R over the flagged pairs
};

// Adds one node wired to the k flagged nodes with the largest resistance
// row-sums (restricted to flagged nodes; ties to the lower id).
StabilizerResult place_stabilizer(const WeightedGraph& g, const DesyncReport& report,
                                  std::size_t k, double weight);

struct SimulationResult {
  std::vector<double> theta;
  bool locked = false;               // frequency spread < 1e-6 at the end
  double max_edge_phase_diff = 0.0;  // wrapped to (-pi, pi]
};

// Classical fixed-step RK4 for the coupled-oscillator phase dynamics
// theta_i' = omega_i + sum_j W_ij sin(theta_j - theta_i).
SimulationResult kuramoto_simulate(const WeightedGraph& g, const FrequencyVector& omega,
                                   const std::vector<double>& theta0, double dt, double t_max);

}  // namespace qfern
