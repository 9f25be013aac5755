#include "qfern/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qfern/errors.hpp"

namespace qfern {

namespace {

std::vector<std::size_t> members_of(const std::vector<char>& in_s, bool value) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < in_s.size(); ++i)
    if (static_cast<bool>(in_s[i]) == value) out.push_back(i);
  return out;
}

// Tracks the best (ratio, side_a) candidate; ties go to the
// lexicographically smallest side_a.
struct BestCut {
  bool has = false;
  double ratio = 0.0;
  double boundary = 0.0;
  std::vector<std::size_t> side_a;

  void offer(double candidate_ratio, double candidate_boundary,
             std::vector<std::size_t> candidate_side) {
    if (has && candidate_ratio > ratio) return;
    if (has && candidate_ratio == ratio && candidate_side >= side_a) return;
    has = true;
    ratio = candidate_ratio;
    boundary = candidate_boundary;
    side_a = std::move(candidate_side);
  }
};

// Offers the orientation(s) of a cut that the normalization calls for. For
// MinSide the ratio is orientation-independent; for SizeOnly both sides are
// candidate subsets. The outer guard keeps the O(n) member materialization
// off the non-competitive path.
void offer_cut(BestCut& best, CutNormalization norm, const std::vector<char>& in_s,
               double boundary, std::size_t size_s, std::size_t n) {
  std::size_t size_c = n - size_s;
  if (norm == CutNormalization::MinSide) {
    double ratio = boundary / static_cast<double>(std::min(size_s, size_c));
    if (!best.has || ratio <= best.ratio) best.offer(ratio, boundary, members_of(in_s, true));
  } else {
    double ratio_s = boundary / static_cast<double>(size_s);
    if (!best.has || ratio_s <= best.ratio) best.offer(ratio_s, boundary, members_of(in_s, true));
    double ratio_c = boundary / static_cast<double>(size_c);
    if (!best.has || ratio_c <= best.ratio) best.offer(ratio_c, boundary, members_of(in_s, false));
  }
}

CutResult finish(BestCut&& best, CutNormalization norm, std::size_t n) {
  CutResult result;
  result.normalization = norm;
  result.ratio = best.ratio;
  result.boundary_weight = best.boundary;
  result.side_a = std::move(best.side_a);
  std::vector<char> in_a(n, 0);
  for (std::size_t u : result.side_a) in_a[u] = 1;
  result.side_b = members_of(in_a, false);
  return result;
}

}  // namespace

CutResult cheeger_exact(const WeightedGraph& g, CutNormalization normalization) {
  const std::size_t n = g.n;
  if (n < 2) raise(Errc::invalid_parameter, "cheeger_exact: need at least 2 nodes");
  if (g.directed) raise(Errc::directed_input, "cheeger_exact: graph must be undirected");
  if (n > 24) raise(Errc::too_large, "cheeger_exact: n > 24 (" + std::to_string(n) + " nodes)");
  if (!is_connected(g)) raise(Errc::disconnected_graph, "cheeger_exact: graph is disconnected");

  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) degree[i] += g.weights(i, j);

  // Subsets containing node 0, visited in Gray-code order over nodes 1..n-1
  // so each step toggles one node and the boundary updates in O(n).
  std::vector<char> in_s(n, 0);
  in_s[0] = 1;
  double boundary = degree[0];
  std::size_t size_s = 1;

  BestCut best;
  offer_cut(best, normalization, in_s, boundary, size_s, n);

  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < total; ++k) {
    std::uint64_t next = k ^ (k >> 1);
    std::uint64_t changed = gray ^ next;
    gray = next;
    std::size_t node = 1;
    while (!(changed & 1)) {
      changed >>= 1;
      ++node;
    }

    double inside = 0.0;
    if (in_s[node]) {
      in_s[node] = 0;
      --size_s;
      for (std::size_t v = 0; v < n; ++v)
        if (in_s[v]) inside += g.weights(node, v);
      boundary -= degree[node] - 2.0 * inside;
    } else {
      for (std::size_t v = 0; v < n; ++v)
        if (in_s[v]) inside += g.weights(node, v);
      boundary += degree[node] - 2.0 * inside;
      in_s[node] = 1;
      ++size_s;
    }
    if (size_s < n) offer_cut(best, normalization, in_s, boundary, size_s, n);
  }
  return finish(std::move(best), normalization, n);
}

CutResult fiedler_sweep(const WeightedGraph& g, const SpectralDecomposition& decomp,
                        CutNormalization normalization) {
  const std::size_t n = g.n;
  if (n < 2) raise(Errc::invalid_parameter, "fiedler_sweep: need at least 2 nodes");
  if (g.directed) raise(Errc::directed_input, "fiedler_sweep: graph must be undirected");
  if (!is_connected(g)) raise(Errc::disconnected_graph, "fiedler_sweep: graph is disconnected");

  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) degree[i] += g.weights(i, j);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (decomp.fiedler[a] != decomp.fiedler[b]) return decomp.fiedler[a] < decomp.fiedler[b];
    return a < b;
  });

  std::vector<char> in_s(n, 0);
  double boundary = 0.0;
  BestCut best;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t node = order[k];
    double inside = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      if (in_s[v]) inside += g.weights(node, v);
    boundary += degree[node] - 2.0 * inside;
    in_s[node] = 1;
    offer_cut(best, normalization, in_s, boundary, k + 1, n);
  }
  return finish(std::move(best), normalization, n);
}

CheegerInequalityReport check_cheeger_inequality(double h, double lambda2) {
  CheegerInequalityReport report;
  report.lower_margin = lambda2 - h * h / 2.0;
  report.upper_margin = 2.0 * h - lambda2;
  report.holds = report.lower_margin >= -1e-9 && report.upper_margin >= -1e-9;
  return report;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> fiedler_bipartition(
    const SpectralDecomposition& decomp) {
  const std::size_t n = decomp.eigenvalues.size();
  std::vector<std::size_t> a, b;
  for (std::size_t i = 0; i < n; ++i)
    (decomp.fiedler[i] >= 0.0 ? a : b).push_back(i);
  if (a.empty() || b.empty()) {
    // constant-sign Fiedler vector: split at the median instead
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (decomp.fiedler[x] != decomp.fiedler[y]) return decomp.fiedler[x] < decomp.fiedler[y];
      return x < y;
    });
    b.assign(order.begin(), order.begin() + n / 2);
    a.assign(order.begin() + n / 2, order.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
  }
  return {a, b};
}

}  // namespace qfern
