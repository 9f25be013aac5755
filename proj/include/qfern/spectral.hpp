#pragma once

#include <string>
#include <vector>

#include "qfern/graph.hpp"
#include "qfern/matrix.hpp"

namespace qfern {

// Full symmetric eigendecomposition with a deterministic sign convention:
// eigenvalues ascending, eigenvectors(u, i) = component u of unit eigenvector
// i, and the first component of each eigenvector larger than 1e-12 in
// magnitude is positive.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;  // column i is eigenvector i; stored row-major by node
  double lambda2 = 0.0;
  std::vector<double> fiedler;
  bool degenerate_lambda2 = false;  // lambda3 - lambda2 <= 1e-9
};

struct ResistanceMatrix {
  Matrix values;  // symmetric, zero diagonal, non-negative
};

// Eigenvalues below this count as zero (connectivity test, pseudoinverse).
inline constexpr double kZeroEigenvalueTol = 1e-9;

// L = D - W for an undirected graph; rows sum to zero.
Matrix laplacian(const WeightedGraph& g);

// Cyclic Jacobi; requires max|L - L^T| <= 1e-12.
SpectralDecomposition eig_sym(const Matrix& l);

// Moore-Penrose pseudoinverse via the spectral sum over nonzero eigenvalues.
// Requires a connected graph (exactly one eigenvalue below tolerance).
Matrix pseudoinverse(const SpectralDecomposition& decomp);

// Effective resistance sum_{i>=2} (f_i[u] - f_i[v])^2 / lambda_i.
double effective_resistance(const SpectralDecomposition& decomp, std::size_t u, std::size_t v);

ResistanceMatrix resistance_matrix(const SpectralDecomposition& decomp);

// Sum over ordered pairs, i.e. 2 * sum_{u<v} R_uv.
double total_effective_resistance(const ResistanceMatrix& rm);

// One row per line, comma-separated, 12 significant digits.
std::string matrix_csv(const Matrix& m);

// One row per node, comma-separated, 12 significant digits.
std::string resistance_csv(const ResistanceMatrix& rm);

}  // namespace qfern
