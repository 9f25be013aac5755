#include "qfern/sync.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qfern/errors.hpp"
#include "qfern/format.hpp"
#include "qfern/kernels.hpp"

namespace qfern {

FrequencyVector FrequencyVector::centered(std::vector<double> raw) {
  FrequencyVector fv;
  fv.original = raw;
  double mean = 0.0;
  for (double v : raw) mean += v;
  mean /= raw.empty() ? 1.0 : static_cast<double>(raw.size());
  for (double& v : raw) v -= mean;
  fv.omega = std::move(raw);
  return fv;
}

namespace {

void require_centered(const FrequencyVector& fv, std::size_t n) {
  if (fv.omega.size() != n)
    raise(Errc::invalid_parameter, "frequency vector has length " + std::to_string(fv.omega.size()) +
                                       ", graph has " + std::to_string(n) + " nodes");
  double sum = 0.0;
  for (double v : fv.omega) sum += v;
  if (std::abs(sum) > 1e-9)
    raise(Errc::uncentered_omega, "frequency vector is not centered (sum " + std::to_string(sum) + ")");
}

void require_connected(const WeightedGraph& g, const char* where) {
  std::size_t components = component_count(g);
  if (components != 1)
    raise(Errc::disconnected_graph,
          std::string(where) + ": graph is disconnected (" + std::to_string(components) + " components)",
          static_cast<long>(components));
}

}  // namespace

SyncAnalysis einf_norm_condition(const WeightedGraph& g, const FrequencyVector& omega) {
  require_centered(omega, g.n);
  require_connected(g, "einf_norm_condition");
  SpectralDecomposition d = eig_sym(laplacian(g));
  const std::size_t n = g.n;

  // coefficients of omega in the eigenbasis
  std::vector<double> coeff(n, 0.0);
  for (std::size_t u = 0; u < n; ++u)
    kernels::axpy(omega.omega[u], d.eigenvectors.row(u), coeff.data(), n);

  std::vector<double> scaled(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) scaled[i] = coeff[i] / d.eigenvalues[i];

  SyncAnalysis a;
  a.omega = omega.omega;
  a.degenerate_lambda2 = d.degenerate_lambda2;
  a.x.resize(n);
  for (std::size_t u = 0; u < n; ++u)
    a.x[u] = kernels::dot(d.eigenvectors.row(u), scaled.data(), n);

  a.edges = edge_list(g);
  if (a.edges.empty()) raise(Errc::invalid_parameter, "einf_norm_condition: graph has no edges");
  a.edge_diffs.reserve(a.edges.size());
  for (const Edge& e : a.edges) {
    double diff = std::abs(a.x[e.u] - a.x[e.v]);
    a.edge_diffs.push_back(diff);
    a.einf_norm = std::max(a.einf_norm, diff);
  }

  double max_coeff = 0.0;
  for (std::size_t i = 1; i < n; ++i) max_coeff = std::max(max_coeff, std::abs(coeff[i]));
  a.lambda2_bound = max_coeff / d.lambda2;
  a.stable = a.einf_norm < 1.0;
  return a;
}

namespace {

// Linear-interpolation quantile of the sorted values (the convention used by
// common statistics packages).
double quantile_sorted(const std::vector<double>& sorted, double q) {
  double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  std::size_t lo = static_cast<std::size_t>(h);
  double frac = h - static_cast<double>(lo);
  double hi = lo + 1 < sorted.size() ? sorted[lo + 1] : sorted[lo];
  return sorted[lo] + frac * (hi - sorted[lo]);
}

}  // namespace

DesyncReport detect_desync_regions(const WeightedGraph& g, const FrequencyVector& omega,
                                   const ThresholdPolicy& policy) {
  if (g.n < 2) raise(Errc::invalid_parameter, "detect_desync_regions: need at least 2 nodes");
  require_centered(omega, g.n);
  require_connected(g, "detect_desync_regions");

  DesyncReport report;
  report.resistance = resistance_matrix(eig_sym(laplacian(g)));
  const std::size_t n = g.n;

  if (policy.kind == ThresholdPolicy::Kind::Absolute) {
    report.threshold = policy.value;
  } else {
    if (!(policy.value > 0.0 && policy.value < 1.0))
      raise(Errc::invalid_quantile, "quantile must be in (0, 1)");
    std::vector<double> values;
    values.reserve(n * (n - 1) / 2);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v) values.push_back(report.resistance.values(u, v));
    std::sort(values.begin(), values.end());
    report.threshold = quantile_sorted(values, policy.value);
  }

  report.phase_estimates = Matrix(n, n);
  std::vector<char> flagged(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      double r = report.resistance.values(u, v);
      double mismatch = std::abs(omega.omega[u] - omega.omega[v]);
      double estimate = r * mismatch;
      report.phase_estimates(u, v) = estimate;
      report.phase_estimates(v, u) = estimate;
      // a pair is desync-prone when coupling is weak AND the natural
      // frequencies actually differ
      if (r > report.threshold && mismatch > 0.0) {
        report.flagged_pairs.push_back({u, v, r});
        flagged[u] = 1;
        flagged[v] = 1;
      }
    }
  }
  for (std::size_t u = 0; u < n; ++u)
    if (flagged[u]) report.flagged_nodes.push_back(u);
  return report;
}

std::string flagged_csv(const DesyncReport& report) {
  std::string out = "u,v,R,phase_estimate\n";
  for (const FlaggedPair& p : report.flagged_pairs)
    out += std::to_string(p.u) + "," + std::to_string(p.v) + "," + fmt_g12(p.r) + "," +
           fmt_g12(report.phase_estimates(p.u, p.v)) + "\n";
  return out;
}

StabilizerResult place_stabilizer(const WeightedGraph& g, const DesyncReport& report,
                                  std::size_t k, double weight) {
  if (g.directed) raise(Errc::directed_input, "place_stabilizer: graph must be undirected");
  if (report.flagged_pairs.empty()) raise(Errc::empty_report, "place_stabilizer: no flagged pairs");
  if (!(weight > 0.0)) raise(Errc::invalid_parameter, "place_stabilizer: weight must be > 0");
  const auto& nodes = report.flagged_nodes;
  if (k < 2 || k > g.n || k > nodes.size())
    raise(Errc::invalid_k, "place_stabilizer: k must be in [2, " + std::to_string(nodes.size()) +
                               "] (got " + std::to_string(k) + ")");

  // rank flagged nodes by resistance row-sum over the flagged set
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(nodes.size());
  for (std::size_t u : nodes) {
    double score = 0.0;
    for (std::size_t v : nodes) score += report.resistance.values(u, v);
    ranked.emplace_back(score, u);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  StabilizerResult result;
  result.graph = make_graph(g.n + 1, /*directed=*/false);
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j) result.graph.weights(i, j) = g.weights(i, j);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t target = ranked[i].second;
    result.attached.push_back(target);
    result.graph.weights(g.n, target) = weight;
    result.graph.weights(target, g.n) = weight;
  }
  std::sort(result.attached.begin(), result.attached.end());

  SpectralDecomposition before = eig_sym(laplacian(symmetrize(g)));
  SpectralDecomposition after = eig_sym(laplacian(result.graph));
  result.delta_lambda2 = after.lambda2 - before.lambda2;

  ResistanceMatrix grown = resistance_matrix(after);
  double max_before = 0.0;
  double max_after = 0.0;
  for (const FlaggedPair& p : report.flagged_pairs) {
    max_before = std::max(max_before, report.resistance.values(p.u, p.v));
    max_after = std::max(max_after, grown.values(p.u, p.v));
  }
  result.delta_max_flagged_r = max_after - max_before;
  return result;
}

namespace {

struct RateEvaluator {
  const Matrix& w;
  const std::vector<double>& omega;
  std::vector<double> sinv, cosv, wsin, wcos;

  explicit RateEvaluator(const Matrix& weights, const std::vector<double>& om)
      : w(weights), omega(om), sinv(om.size()), cosv(om.size()), wsin(om.size()), wcos(om.size()) {}

  // rate_i = omega_i + cos(theta_i) (W sin theta)_i - sin(theta_i) (W cos theta)_i
  void operator()(const std::vector<double>& theta, std::vector<double>& rate) {
    const std::size_t n = theta.size();
    for (std::size_t i = 0; i < n; ++i) {
      sinv[i] = std::sin(theta[i]);
      cosv[i] = std::cos(theta[i]);
    }
    kernels::matvec(w.data(), n, n, sinv.data(), wsin.data());
    kernels::matvec(w.data(), n, n, cosv.data(), wcos.data());
    kernels::phase_rate(omega.data(), cosv.data(), sinv.data(), wsin.data(), wcos.data(),
                        rate.data(), n);
  }
};

}  // namespace

SimulationResult kuramoto_simulate(const WeightedGraph& g, const FrequencyVector& omega,
                                   const std::vector<double>& theta0, double dt, double t_max) {
  const std::size_t n = g.n;
  if (omega.omega.size() != n || theta0.size() != n)
    raise(Errc::invalid_parameter, "kuramoto_simulate: vector length mismatch");
  if (!(dt > 0.0) || !(t_max > dt))
    raise(Errc::invalid_parameter, "kuramoto_simulate: need dt > 0 and t_max > dt");
  require_connected(g, "kuramoto_simulate");

  RateEvaluator rate(g.weights, omega.omega);
  std::vector<double> theta = theta0;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

  auto spread_of = [&](std::vector<double>& scratch) {
    rate(theta, scratch);
    double mean = 0.0;
    for (double v : scratch) mean += v;
    mean /= static_cast<double>(n);
    double spread = 0.0;
    for (double v : scratch) spread = std::max(spread, std::abs(v - mean));
    return spread;
  };

  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  for (std::size_t s = 0; s < steps; ++s) {
    rate(theta, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + 0.5 * dt * k1[i];
    rate(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + 0.5 * dt * k2[i];
    rate(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + dt * k3[i];
    rate(tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      theta[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    if (s % 64 == 0 || s + 1 == steps) {
      for (double v : theta)
        if (!std::isfinite(v))
          raise(Errc::non_finite_state, "kuramoto_simulate: state blew up (dt too large?)");
    }
    // deep inside the contraction region the verdict cannot change; stop early
    if (s % 128 == 127 && static_cast<double>(s + 1) * dt >= 50.0 && spread_of(tmp) < 1e-9) break;
  }

  SimulationResult result;
  result.theta = theta;
  result.locked = spread_of(tmp) < 1e-6;
  for (const Edge& e : edge_list(g)) {
    double wrapped = std::remainder(theta[e.u] - theta[e.v], 2.0 * std::numbers::pi);
    result.max_edge_phase_diff = std::max(result.max_edge_phase_diff, std::abs(wrapped));
  }
  return result;
}

}  // namespace qfern
