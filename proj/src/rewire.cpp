#include "qfern/rewire.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qfern/errors.hpp"
#include "qfern/format.hpp"
#include "qfern/parallel.hpp"
#include "qfern/rng.hpp"
#include "qfern/spectral.hpp"

namespace qfern {

Matrix fiedler_gradient(const std::vector<double>& fiedler, GradientMode mode) {
  const std::size_t n = fiedler.size();
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double value = -fiedler[i] * fiedler[j];
      g(i, j) = mode == GradientMode::Abs ? -std::abs(value) : value;
    }
  }
  return g;
}

Matrix asoft_update(const Matrix& a, const Matrix& gradient, double alpha) {
  const std::size_t n = a.rows();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j) + alpha * gradient(i, j);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double sym = (m(i, j) + m(j, i)) / 2.0;
      if (sym < 0.0) sym = 0.0;
      m(i, j) = sym;
      m(j, i) = sym;
    }
  }
  return m;
}

SoftAdjacencyStep qfern_once(const WeightedGraph& g, const RewiringConfig& config) {
  WeightedGraph sym = symmetrize(g);
  if (!is_connected(sym))
    raise(Errc::disconnected_graph, "qfern_once: graph is disconnected after symmetrization");

  SpectralDecomposition before = eig_sym(laplacian(sym));
  Matrix gradient = fiedler_gradient(before.fiedler, config.gradient_mode);

  SoftAdjacencyStep step;
  step.asoft = make_graph(g.n, /*directed=*/false);
  step.asoft.weights = asoft_update(sym.weights, gradient, config.alpha);
  step.lambda2_before = before.lambda2;
  step.lambda2_after = eig_sym(laplacian(step.asoft)).lambda2;
  return step;
}

namespace {

// Cheeger constant of the current graph: exhaustive up to the enumeration
// cap, Fiedler sweep beyond it. MinSide matches the optimization objective.
double cheeger_value(const WeightedGraph& g) {
  if (g.n <= 24) return cheeger_exact(g, CutNormalization::MinSide).ratio;
  SpectralDecomposition d = eig_sym(laplacian(g));
  return fiedler_sweep(g, d, CutNormalization::MinSide).ratio;
}

double r_total_of(const WeightedGraph& g) {
  return total_effective_resistance(resistance_matrix(eig_sym(laplacian(g))));
}

std::vector<std::pair<std::size_t, std::size_t>> candidate_edges(const WeightedGraph& g,
                                                                 CandidatePolicy policy) {
  std::vector<std::pair<std::size_t, std::size_t>> cands;
  if (policy == CandidatePolicy::AllNonEdges) {
    for (std::size_t u = 0; u + 1 < g.n; ++u)
      for (std::size_t v = u + 1; v < g.n; ++v)
        if (g.weights(u, v) == 0.0) cands.emplace_back(u, v);
    return cands;
  }
  auto [side_a, side_b] = fiedler_bipartition(eig_sym(laplacian(g)));
  for (std::size_t a : side_a)
    for (std::size_t b : side_b) {
      auto [u, v] = std::minmax(a, b);
      if (g.weights(u, v) == 0.0) cands.emplace_back(u, v);
    }
  std::sort(cands.begin(), cands.end());
  return cands;
}

void set_edge(WeightedGraph& g, std::size_t u, std::size_t v, double w) {
  g.weights(u, v) = w;
  g.weights(v, u) = w;
}

}  // namespace

RewiringReport rewire_optimize(const WeightedGraph& g, const RewiringConfig& config) {
  if (config.alpha < 0.0) raise(Errc::invalid_parameter, "rewire_optimize: alpha must be >= 0");
  if (config.max_iterations < 1)
    raise(Errc::invalid_parameter, "rewire_optimize: max_iterations must be >= 1");

  WeightedGraph current = symmetrize(g);
  if (!is_connected(current)) raise(Errc::disconnected_graph, "rewire_optimize: graph is disconnected");
  if (candidate_edges(current, config.candidate_policy).empty())
    raise(Errc::no_candidate_edges, "rewire_optimize: no absent candidate edges");

  RewiringReport report;
  report.initial_graph = current;
  report.initial_h = cheeger_value(current);
  report.initial_r_total = r_total_of(current);

  std::mt19937_64 rng(config.seed);
  double h_cur = report.initial_h;
  double r_cur = report.initial_r_total;
  std::size_t since_improvement = 0;

  for (std::size_t step = 1; step <= config.max_iterations; ++step) {
    std::vector<Edge> edges = edge_list(current);
    Edge removed = edges[uniform_below(rng, edges.size())];
    set_edge(current, removed.u, removed.v, 0.0);

    auto cands = candidate_edges(current, config.candidate_policy);

    // Score each candidate by the Cheeger value after insertion;
    // disconnected results are out of the running.
    std::vector<double> scores(cands.size(), -1.0);
    parallel_for(cands.size(), [&](std::size_t begin, std::size_t end) {
      WeightedGraph probe = current;
      for (std::size_t i = begin; i < end; ++i) {
        set_edge(probe, cands[i].first, cands[i].second, 1.0);
        if (is_connected(probe)) scores[i] = cheeger_value(probe);
        set_edge(probe, cands[i].first, cands[i].second, 0.0);
      }
    });

    std::size_t best = cands.size();
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (scores[i] < 0.0) continue;
      if (best == cands.size() || scores[i] > scores[best]) best = i;
    }

    IterationRecord record;
    record.step = step;
    record.removed = removed;
    bool improved = false;

    if (best != cands.size()) {
      auto [u, v] = cands[best];
      record.added = Edge{u, v, 1.0};
      set_edge(current, u, v, 1.0);
      double h_new = scores[best];
      bool accept = h_new > h_cur;
      double r_new = 0.0;
      bool have_r = false;
      if (!accept && h_new == h_cur) {
        r_new = r_total_of(current);
        have_r = true;
        accept = r_new < r_cur;
      }
      if (accept) {
        improved = h_new > h_cur;
        h_cur = h_new;
        r_cur = have_r ? r_new : r_total_of(current);
        record.accepted = true;
      } else {
        set_edge(current, u, v, 0.0);
        set_edge(current, removed.u, removed.v, removed.w);
      }
    } else {
      record.added = std::nullopt;
      set_edge(current, removed.u, removed.v, removed.w);
    }

    record.h = h_cur;
    record.lambda2 = eig_sym(laplacian(current)).lambda2;
    record.r_total = r_cur;
    report.iterations.push_back(record);

    since_improvement = improved ? 0 : since_improvement + 1;
    if (config.patience > 0 && since_improvement >= config.patience) break;
  }

  report.final_graph = current;
  report.final_h = h_cur;
  report.final_r_total = r_cur;
  report.final_asoft = qfern_once(current, config).asoft.weights;
  return report;
}

std::string trace_csv(const RewiringReport& report) {
  std::string out = "step,h,lambda2,r_total,accepted\n";
  for (const IterationRecord& r : report.iterations)
    out += std::to_string(r.step) + "," + fmt_g12(r.h) + "," + fmt_g12(r.lambda2) + "," +
           fmt_g12(r.r_total) + "," + (r.accepted ? "1" : "0") + "\n";
  return out;
}

}  // namespace qfern
