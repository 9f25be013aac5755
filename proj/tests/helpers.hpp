#pragma once

// Graph builders and seeded random instances shared by the test suites.

#include <random>
#include <vector>

#include "qfern/graph.hpp"
#include "qfern/rng.hpp"

namespace testutil {

inline qfern::WeightedGraph path_graph(std::size_t n) {
  qfern::WeightedGraph g = qfern::make_graph(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g.weights(i, i + 1) = 1.0;
    g.weights(i + 1, i) = 1.0;
  }
  return g;
}

inline qfern::WeightedGraph cycle_graph(std::size_t n) {
  qfern::WeightedGraph g = path_graph(n);
  g.weights(0, n - 1) = 1.0;
  g.weights(n - 1, 0) = 1.0;
  return g;
}

inline qfern::WeightedGraph complete_graph(std::size_t n) {
  qfern::WeightedGraph g = qfern::make_graph(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) g.weights(i, j) = 1.0;
  return g;
}

// center is node 0
inline qfern::WeightedGraph star_graph(std::size_t leaves) {
  qfern::WeightedGraph g = qfern::make_graph(leaves + 1);
  for (std::size_t i = 1; i <= leaves; ++i) {
    g.weights(0, i) = 1.0;
    g.weights(i, 0) = 1.0;
  }
  return g;
}

// Two K_k cliques {0..k-1} and {k..2k-1} joined by the bridge (k-1, k).
inline qfern::WeightedGraph barbell(std::size_t k) {
  qfern::WeightedGraph g = qfern::make_graph(2 * k);
  for (std::size_t base : {std::size_t{0}, k})
    for (std::size_t i = base; i < base + k; ++i)
      for (std::size_t j = base; j < base + k; ++j)
        if (i != j) g.weights(i, j) = 1.0;
  g.weights(k - 1, k) = 1.0;
  g.weights(k, k - 1) = 1.0;
  return g;
}

// Erdos-Renyi, symmetric, resampled (with an advanced seed) until connected.
inline qfern::WeightedGraph random_connected_graph(std::size_t n, double p, std::uint64_t seed,
                                                   bool random_weights = false) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::mt19937_64 rng(seed * 1000003 + attempt);
    qfern::WeightedGraph g = qfern::make_graph(n);
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (qfern::uniform01(rng) < p) {
          double w = random_weights ? 0.5 + qfern::uniform01(rng) : 1.0;
          g.weights(i, j) = w;
          g.weights(j, i) = w;
        }
    if (qfern::is_connected(g)) return g;
  }
}

// Uniform random labeled tree from a Prufer sequence; unit weights unless
// random_weights is set.
inline qfern::WeightedGraph random_tree(std::size_t n, std::uint64_t seed,
                                        bool random_weights = false) {
  qfern::WeightedGraph g = qfern::make_graph(n);
  std::mt19937_64 rng(seed);
  auto weight = [&]() { return random_weights ? 0.5 + qfern::uniform01(rng) : 1.0; };
  if (n == 2) {
    double w = weight();
    g.weights(0, 1) = w;
    g.weights(1, 0) = w;
    return g;
  }
  std::vector<std::size_t> prufer(n - 2);
  for (auto& v : prufer) v = qfern::uniform_below(rng, n);
  std::vector<std::size_t> degree(n, 1);
  for (std::size_t v : prufer) ++degree[v];
  auto connect = [&](std::size_t a, std::size_t b) {
    double w = weight();
    g.weights(a, b) = w;
    g.weights(b, a) = w;
  };
  std::vector<char> used(n, 0);
  for (std::size_t v : prufer) {
    std::size_t leaf = 0;
    while (degree[leaf] != 1 || used[leaf]) ++leaf;
    connect(leaf, v);
    used[leaf] = 1;
    --degree[v];
  }
  std::size_t a = 0;
  while (degree[a] != 1 || used[a]) ++a;
  std::size_t b = a + 1;
  while (b < n && (degree[b] != 1 || used[b])) ++b;
  connect(a, b);
  return g;
}

inline std::vector<double> random_centered_omega(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> omega(n);
  double mean = 0.0;
  for (double& v : omega) {
    v = 2.0 * qfern::uniform01(rng) - 1.0;
    mean += v;
  }
  mean /= static_cast<double>(n);
  for (double& v : omega) v -= mean;
  return omega;
}

}  // namespace testutil
