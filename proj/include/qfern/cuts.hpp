#pragma once

#include <utility>
#include <vector>

#include "qfern/graph.hpp"
#include "qfern/spectral.hpp"

namespace qfern {

enum class CutNormalization {
  SizeOnly,  // |bd S| / |S|
  MinSide,   // |bd S| / min(|S|, |V \ S|)
};

struct CutResult {
  std::vector<std::size_t> side_a;  // sorted
  std::vector<std::size_t> side_b;  // sorted complement
  double boundary_weight = 0.0;     // total weight crossing the cut
  double ratio = 0.0;
  CutNormalization normalization = CutNormalization::MinSide;
};

// Exhaustive minimum over all cuts, enumerating subsets that contain node 0
// so each cut is visited once. Ties break to the lexicographically smallest
// side_a. Limited to n <= 24.
CutResult cheeger_exact(const WeightedGraph& g, CutNormalization normalization);

// Sorts nodes by Fiedler component and takes the best of the n-1 prefix
// cuts. Never better than cheeger_exact.
CutResult fiedler_sweep(const WeightedGraph& g, const SpectralDecomposition& decomp,
                        CutNormalization normalization);

struct CheegerInequalityReport {
  bool holds = false;
  double lower_margin = 0.0;  // lambda2 - h^2/2
  double upper_margin = 0.0;  // 2h - lambda2
};

// Checks h^2/2 <= lambda2 <= 2h within 1e-9.
CheegerInequalityReport check_cheeger_inequality(double h, double lambda2);

// A = nodes with non-negative Fiedler component, B = rest. Falls back to a
// median split if one side would be empty.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> fiedler_bipartition(
    const SpectralDecomposition& decomp);

}  // namespace qfern
