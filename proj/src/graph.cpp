#include "qfern/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "qfern/errors.hpp"
#include "qfern/format.hpp"
#include "qfern/rng.hpp"

namespace qfern {

WeightedGraph make_graph(std::size_t n, bool directed) {
  WeightedGraph g;
  g.n = n;
  g.weights = Matrix(n, n);
  g.directed = directed;
  return g;
}

std::vector<Edge> edge_list(const WeightedGraph& g) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < g.n; ++u) {
    std::size_t first = g.directed ? 0 : u + 1;
    for (std::size_t v = first; v < g.n; ++v) {
      if (u == v) continue;
      double w = g.weights(u, v);
      if (w != 0.0) edges.push_back({u, v, w});
    }
  }
  return edges;
}

WeightedGraph random_dag(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) raise(Errc::invalid_parameter, "random_dag: n must be at least 2 (got " + std::to_string(n) + ")");
  if (!(p >= 0.0 && p <= 1.0))
    raise(Errc::invalid_parameter, "random_dag: p must be in [0, 1] (got " + fmt_g12(p) + ")");

  WeightedGraph g = make_graph(n, /*directed=*/true);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (uniform01(rng) < p) g.weights(i, j) = 1.0;
  return g;
}

WeightedGraph symmetrize(const WeightedGraph& g) {
  WeightedGraph out = make_graph(g.n, /*directed=*/false);
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j)
      if (i != j) out.weights(i, j) = (g.weights(i, j) + g.weights(j, i)) / 2.0;
  return out;
}

std::size_t component_count(const WeightedGraph& g) {
  std::vector<int> seen(g.n, 0);
  std::vector<std::size_t> stack;
  std::size_t components = 0;
  for (std::size_t start = 0; start < g.n; ++start) {
    if (seen[start]) continue;
    ++components;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < g.n; ++v) {
        if (!seen[v] && (g.weights(u, v) != 0.0 || g.weights(v, u) != 0.0)) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
  }
  return components;
}

bool is_connected(const WeightedGraph& g) { return g.n == 0 || component_count(g) == 1; }

namespace {

[[noreturn]] void parse_fail(const std::string& path, long line, const std::string& what) {
  raise(Errc::parse_error, path + ":" + std::to_string(line) + ": " + what, line);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_size(std::string_view tok, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

bool parse_double(std::string_view tok, double& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open " + path);

  WeightedGraph g;
  bool have_header = false;
  std::string raw;
  long line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    if (!have_header) {
      if (tokens.size() != 3 || tokens[0] != "n")
        parse_fail(path, line_no, "expected header 'n <count> directed|undirected'");
      std::size_t n = 0;
      if (!parse_size(tokens[1], n) || n == 0) parse_fail(path, line_no, "bad node count");
      bool directed;
      if (tokens[2] == "directed")
        directed = true;
      else if (tokens[2] == "undirected")
        directed = false;
      else
        parse_fail(path, line_no, "expected 'directed' or 'undirected'");
      g = make_graph(n, directed);
      have_header = true;
      continue;
    }

    if (tokens.size() != 3) parse_fail(path, line_no, "expected edge line 'u v w'");
    std::size_t u = 0, v = 0;
    double w = 0.0;
    if (!parse_size(tokens[0], u) || !parse_size(tokens[1], v))
      parse_fail(path, line_no, "bad node id");
    if (u >= g.n || v >= g.n) parse_fail(path, line_no, "node id out of range");
    if (u == v) parse_fail(path, line_no, "self-loop");
    if (!parse_double(tokens[2], w) || !std::isfinite(w)) parse_fail(path, line_no, "bad weight");
    if (w < 0.0) parse_fail(path, line_no, "negative weight");
    if (g.weights(u, v) != 0.0) parse_fail(path, line_no, "duplicate edge");
    g.weights(u, v) = w;
    if (!g.directed) g.weights(v, u) = w;
  }
  if (!have_header) raise(Errc::parse_error, path + ": missing header line", 0);
  return g;
}

void save_graph(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot write " + path);
  out << "n " << g.n << (g.directed ? " directed" : " undirected") << "\n";
  for (const Edge& e : edge_list(g))
    out << e.u << " " << e.v << " " << fmt_shortest(e.w) << "\n";
  if (!out) raise(Errc::io_error, "write failed for " + path);
}

namespace {

// Quantile bucket in {0..4}: number of the 0.2/0.4/0.6/0.8 quantiles
// (linearly interpolated) strictly below the value.
std::vector<int> quantile_buckets(const std::vector<double>& values) {
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  double cuts[4];
  for (int k = 1; k <= 4; ++k) {
    double h = (static_cast<double>(m) - 1.0) * (0.2 * k);
    std::size_t lo = static_cast<std::size_t>(h);
    double frac = h - static_cast<double>(lo);
    double hi_val = lo + 1 < m ? sorted[lo + 1] : sorted[lo];
    cuts[k - 1] = sorted[lo] + frac * (hi_val - sorted[lo]);
  }
  std::vector<int> buckets(values.size(), 0);
  for (std::size_t i = 0; i < values.size(); ++i)
    for (int k = 0; k < 4; ++k)
      if (values[i] > cuts[k]) buckets[i] = k + 1;
  return buckets;
}

}  // namespace

std::string export_dot(const WeightedGraph& g) { return export_dot(g, DotOptions{}); }

std::string export_dot(const WeightedGraph& g, const DotOptions& options) {
  std::ostringstream out;
  out << (g.directed ? "digraph G {\n" : "graph G {\n");

  std::vector<int> buckets;
  if (options.node_values) {
    if (options.node_values->size() != g.n)
      raise(Errc::invalid_parameter, "export_dot: node_values size mismatch");
    out << "  node [style=filled, colorscheme=blues5];\n";
    buckets = quantile_buckets(*options.node_values);
  }
  std::vector<char> emphasized(g.n + 1, 0);
  for (std::size_t id : options.emphasized)
    if (id < emphasized.size()) emphasized[id] = 1;

  for (std::size_t u = 0; u < g.n; ++u) {
    out << "  " << u;
    std::vector<std::string> attrs;
    if (options.node_values)
      attrs.push_back("label=\"" + std::to_string(u) + ": " + fmt_g12((*options.node_values)[u]) +
                      "\", fillcolor=" + std::to_string(buckets[u] + 1));
    if (emphasized[u]) attrs.push_back("color=red, penwidth=2");
    if (!attrs.empty()) {
      out << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) out << (i ? ", " : "") << attrs[i];
      out << "]";
    }
    out << ";\n";
  }
  const char* arrow = g.directed ? " -> " : " -- ";
  for (const Edge& e : edge_list(g))
    out << "  " << e.u << arrow << e.v << " [label=\"" << fmt_g12(e.w) << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace qfern
