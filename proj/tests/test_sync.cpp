#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "helpers.hpp"
#include "oracles.hpp"
#include "qfern/errors.hpp"
#include "qfern/spectral.hpp"
#include "qfern/sync.hpp"

using namespace qfern;

namespace {

bool is_cross_pair(const FlaggedPair& p, std::size_t clique) {
  return p.u < clique && p.v >= clique;
}

}  // namespace

TEST_SUITE("sync") {

TEST_CASE("FrequencyVector centers its input") {
  FrequencyVector fv = FrequencyVector::centered({1.0, 2.0, 3.0});
  CHECK(fv.omega[0] == doctest::Approx(-1.0));
  CHECK(fv.omega[1] == doctest::Approx(0.0));
  CHECK(fv.omega[2] == doctest::Approx(1.0));
  CHECK(fv.original[0] == 1.0);
}

TEST_CASE("zero frequencies are trivially stable") {
  SyncAnalysis a = einf_norm_condition(testutil::path_graph(4),
                                       FrequencyVector::centered({0, 0, 0, 0}));
  CHECK(a.einf_norm == 0.0);
  CHECK(a.stable);
}

TEST_CASE("two oscillators: edge difference equals the frequency gap") {
  for (double amp : {0.7, 1.5}) {
    FrequencyVector fv = FrequencyVector::centered({amp, -amp});
    SyncAnalysis a = einf_norm_condition(testutil::path_graph(2), fv);
    CHECK(a.x[0] == doctest::Approx(amp / 2.0).epsilon(1e-12));
    CHECK(a.x[1] == doctest::Approx(-amp / 2.0).epsilon(1e-12));
    CHECK(a.einf_norm == doctest::Approx(amp).epsilon(1e-12));
    CHECK(a.stable == (amp < 1.0));
    // lambda2 = 2, f = (1,-1)/sqrt(2), so the coefficient is amp*sqrt(2)
    CHECK(a.lambda2_bound == doctest::Approx(amp * std::sqrt(2.0) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("einf matches a grounded linear solve on the star") {
  WeightedGraph g = testutil::star_graph(5);
  std::vector<double> omega = testutil::random_centered_omega(6, 17);
  FrequencyVector fv = FrequencyVector::centered(omega);
  SyncAnalysis a = einf_norm_condition(g, fv);

  std::vector<double> x = oracle::grounded_solve(g, fv.omega);
  for (std::size_t u = 0; u < 6; ++u) CHECK(a.x[u] == doctest::Approx(x[u]).epsilon(1e-9));

  double expected = 0.0;
  for (const Edge& e : edge_list(g)) expected = std::max(expected, std::abs(x[e.u] - x[e.v]));
  CHECK(a.einf_norm == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("einf scales linearly and the verdict flips at the critical amplitude") {
  WeightedGraph g = testutil::random_tree(7, 3);
  std::vector<double> omega = testutil::random_centered_omega(7, 8);
  SyncAnalysis base = einf_norm_condition(g, FrequencyVector::centered(omega));
  REQUIRE(base.einf_norm > 0.0);

  double critical = 1.0 / base.einf_norm;
  for (double c : {0.5, 2.0}) {
    std::vector<double> scaled = omega;
    for (double& v : scaled) v *= c;
    SyncAnalysis a = einf_norm_condition(g, FrequencyVector::centered(scaled));
    CHECK(a.einf_norm == doctest::Approx(c * base.einf_norm).epsilon(1e-12));
  }
  for (double c : {0.99 * critical, 1.01 * critical}) {
    std::vector<double> scaled = omega;
    for (double& v : scaled) v *= c;
    SyncAnalysis a = einf_norm_condition(g, FrequencyVector::centered(scaled));
    CHECK(a.stable == (c < critical));
  }
}

TEST_CASE("einf stays below the eigen-coefficient bound on trees") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::size_t n = 4 + seed % 5;
    WeightedGraph g = testutil::random_tree(n, seed + 1);
    if (eig_sym(laplacian(g)).degenerate_lambda2) continue;  // bound is basis-dependent there
    SyncAnalysis a = einf_norm_condition(
        g, FrequencyVector::centered(testutil::random_centered_omega(n, seed + 50)));
    CHECK(a.einf_norm <= a.lambda2_bound + 1e-12);
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("einf validates its inputs") {
  FrequencyVector uncentered;
  uncentered.omega = {1.0, 0.0};
  uncentered.original = uncentered.omega;
  CHECK_THROWS_AS(einf_norm_condition(testutil::path_graph(2), uncentered), Error);

  CHECK_THROWS_AS(einf_norm_condition(testutil::path_graph(3),
                                      FrequencyVector::centered({1.0, -1.0})),
                  Error);  // length mismatch

  WeightedGraph disconnected = make_graph(3);
  disconnected.weights(0, 1) = disconnected.weights(1, 0) = 1.0;
  CHECK_THROWS_AS(einf_norm_condition(disconnected, FrequencyVector::centered({0, 0, 0})), Error);
}

TEST_CASE("uniform resistances flag nothing above a high quantile") {
  WeightedGraph g = testutil::complete_graph(4);
  FrequencyVector fv = FrequencyVector::centered({0.4, 0.1, -0.2, -0.3});
  DesyncReport r = detect_desync_regions(g, fv, ThresholdPolicy::quantile(0.9));
  CHECK(r.flagged_pairs.empty());
  CHECK(r.flagged_nodes.empty());
}

TEST_CASE("barbell flags sit on cross-clique pairs") {
  WeightedGraph g = testutil::barbell(5);
  FrequencyVector fv = FrequencyVector::centered(testutil::random_centered_omega(10, 2));

  DesyncReport high = detect_desync_regions(g, fv, ThresholdPolicy::quantile(0.8));
  CHECK(!high.flagged_pairs.empty());
  for (const FlaggedPair& p : high.flagged_pairs) CHECK(is_cross_pair(p, 5));

  // 20 of 45 pair resistances are intra-clique; a quantile between the two
  // groups flags exactly the 25 cross pairs
  DesyncReport gap = detect_desync_regions(g, fv, ThresholdPolicy::quantile(0.44));
  CHECK(gap.flagged_pairs.size() == 25);
  for (const FlaggedPair& p : gap.flagged_pairs) CHECK(is_cross_pair(p, 5));
  CHECK(gap.flagged_nodes.size() == 10);
}

TEST_CASE("absolute thresholds at the extremes") {
  WeightedGraph g = testutil::barbell(4);
  FrequencyVector fv = FrequencyVector::centered(testutil::random_centered_omega(8, 5));

  DesyncReport all = detect_desync_regions(g, fv, ThresholdPolicy::absolute(0.0));
  CHECK(all.flagged_pairs.size() == 8 * 7 / 2);

  DesyncReport none = detect_desync_regions(g, fv, ThresholdPolicy::absolute(9.0));
  CHECK(none.flagged_pairs.empty());
}

TEST_CASE("zero frequency mismatch suppresses flags") {
  WeightedGraph g = testutil::barbell(4);
  FrequencyVector fv = FrequencyVector::centered(std::vector<double>(8, 0.0));
  DesyncReport r = detect_desync_regions(g, fv, ThresholdPolicy::absolute(0.1));
  CHECK(r.flagged_pairs.empty());
}

TEST_CASE("phase estimates follow the resistance-mismatch product") {
  WeightedGraph g = testutil::path_graph(3);
  FrequencyVector fv = FrequencyVector::centered({0.9, 0.0, -0.9});
  DesyncReport r = detect_desync_regions(g, fv, ThresholdPolicy::absolute(10.0));
  CHECK(r.phase_estimates(0, 2) == doctest::Approx(2.0 * 1.8).epsilon(1e-9));
  CHECK(r.phase_estimates(0, 1) == doctest::Approx(1.0 * 0.9).epsilon(1e-9));
  CHECK(r.phase_estimates(1, 0) == r.phase_estimates(0, 1));
}

TEST_CASE("flagged_csv lists flagged pairs with their phase estimates") {
  WeightedGraph g = testutil::path_graph(3);
  FrequencyVector fv = FrequencyVector::centered({0.9, 0.0, -0.9});
  DesyncReport r = detect_desync_regions(g, fv, ThresholdPolicy::absolute(1.5));
  std::string csv = flagged_csv(r);
  CHECK(csv == "u,v,R,phase_estimate\n0,2,2,3.6\n");
}

TEST_CASE("detect rejects bad quantiles") {
  WeightedGraph g = testutil::path_graph(3);
  FrequencyVector fv = FrequencyVector::centered({1.0, 0.0, -1.0});
  for (double q : {0.0, 1.0, -0.5, 2.0})
    CHECK_THROWS_AS(detect_desync_regions(g, fv, ThresholdPolicy::quantile(q)), Error);
}

TEST_CASE("stabilizer lowers the worst flagged resistance on the barbell") {
  WeightedGraph g = testutil::barbell(4);
  FrequencyVector fv = FrequencyVector::centered(testutil::random_centered_omega(8, 12));
  DesyncReport report = detect_desync_regions(g, fv, ThresholdPolicy::quantile(0.8));
  REQUIRE(!report.flagged_pairs.empty());

  StabilizerResult s = place_stabilizer(g, report, 2, 1.0);
  CHECK(s.graph.n == 9);
  CHECK(s.attached.size() == 2);
  CHECK(s.delta_max_flagged_r < 0.0);

  // Rayleigh monotonicity: no pre-existing pair gets worse
  ResistanceMatrix grown = resistance_matrix(eig_sym(laplacian(s.graph)));
  for (std::size_t u = 0; u < 8; ++u)
    for (std::size_t v = u + 1; v < 8; ++v)
      CHECK(grown.values(u, v) <= report.resistance.values(u, v) + 1e-9);
}

TEST_CASE("full fan-out on a complete graph lowers every resistance") {
  WeightedGraph g = testutil::complete_graph(5);
  FrequencyVector fv = FrequencyVector::centered({0.5, 0.3, 0.1, -0.4, -0.5});
  DesyncReport report = detect_desync_regions(g, fv, ThresholdPolicy::absolute(0.0));
  REQUIRE(report.flagged_nodes.size() == 5);

  StabilizerResult s = place_stabilizer(g, report, 5, 1.0);
  CHECK(s.attached == std::vector<std::size_t>{0, 1, 2, 3, 4});
  ResistanceMatrix grown = resistance_matrix(eig_sym(laplacian(s.graph)));
  for (std::size_t u = 0; u < 5; ++u)
    for (std::size_t v = u + 1; v < 5; ++v)
      CHECK(grown.values(u, v) < report.resistance.values(u, v));
}

TEST_CASE("vanishing stabilizer weight means vanishing resistance deltas") {
  WeightedGraph g = testutil::barbell(4);
  FrequencyVector fv = FrequencyVector::centered(testutil::random_centered_omega(8, 3));
  DesyncReport report = detect_desync_regions(g, fv, ThresholdPolicy::quantile(0.8));
  StabilizerResult s = place_stabilizer(g, report, 2, 1e-8);
  CHECK(std::abs(s.delta_max_flagged_r) < 1e-6);
  // the weakly attached node is nearly isolated, so the grown graph's
  // algebraic connectivity collapses toward zero
  double lambda2_before = eig_sym(laplacian(g)).lambda2;
  CHECK(s.delta_lambda2 == doctest::Approx(-lambda2_before).epsilon(1e-4));
}

TEST_CASE("place_stabilizer validates its inputs") {
  WeightedGraph g = testutil::barbell(4);
  FrequencyVector fv = FrequencyVector::centered(testutil::random_centered_omega(8, 3));
  DesyncReport report = detect_desync_regions(g, fv, ThresholdPolicy::quantile(0.8));

  DesyncReport empty = detect_desync_regions(g, fv, ThresholdPolicy::absolute(99.0));
  CHECK_THROWS_AS(place_stabilizer(g, empty, 2, 1.0), Error);
  CHECK_THROWS_AS(place_stabilizer(g, report, 1, 1.0), Error);
  CHECK_THROWS_AS(place_stabilizer(g, report, 100, 1.0), Error);
  CHECK_THROWS_AS(place_stabilizer(g, report, 2, 0.0), Error);
}

TEST_CASE("kuramoto: zero frequencies lock immediately") {
  WeightedGraph g = testutil::path_graph(4);
  SimulationResult r = kuramoto_simulate(g, FrequencyVector::centered({0, 0, 0, 0}),
                                         std::vector<double>(4, 0.0), 0.01, 1.0);
  CHECK(r.locked);
  CHECK(r.max_edge_phase_diff == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("kuramoto: two oscillators settle at the arcsine angle") {
  WeightedGraph g = testutil::path_graph(2);
  SimulationResult r = kuramoto_simulate(g, FrequencyVector::centered({0.5, -0.5}),
                                         std::vector<double>(2, 0.0), 0.01, 100.0);
  CHECK(r.locked);
  CHECK(r.max_edge_phase_diff == doctest::Approx(std::asin(0.5)).epsilon(1e-6));
}

TEST_CASE("kuramoto validates parameters and detects bad state") {
  WeightedGraph g = testutil::path_graph(2);
  FrequencyVector fv = FrequencyVector::centered({0.1, -0.1});
  CHECK_THROWS_AS(kuramoto_simulate(g, fv, {0, 0}, 0.0, 1.0), Error);
  CHECK_THROWS_AS(kuramoto_simulate(g, fv, {0, 0}, 0.5, 0.1), Error);
  CHECK_THROWS_AS(kuramoto_simulate(g, fv, {0}, 0.01, 1.0), Error);

  std::vector<double> bad_theta{std::numeric_limits<double>::infinity(), 0.0};
  CHECK_THROWS_AS(kuramoto_simulate(g, fv, bad_theta, 0.01, 1.0), Error);
}

TEST_CASE("on cyclic graphs a small einf norm still implies locking") {
  // only this direction holds off trees; log (not assert) converse failures
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    std::size_t n = 5 + seed % 3;
    WeightedGraph g = testutil::random_connected_graph(n, 0.5, seed + 80);
    std::vector<double> omega = testutil::random_centered_omega(n, seed + 90);
    SyncAnalysis base = einf_norm_condition(g, FrequencyVector::centered(omega));
    REQUIRE(base.einf_norm > 0.0);

    std::vector<double> scaled = omega;
    for (double& v : scaled) v *= 0.6 / base.einf_norm;
    FrequencyVector fv = FrequencyVector::centered(scaled);
    SimulationResult sim = kuramoto_simulate(g, fv, std::vector<double>(n, 0.0), 0.01, 400.0);
    CHECK(sim.locked);

    std::vector<double> large = omega;
    for (double& v : large) v *= 1.5 / base.einf_norm;
    SimulationResult loose =
        kuramoto_simulate(g, FrequencyVector::centered(large), std::vector<double>(n, 0.0), 0.01, 400.0);
    if (loose.locked)
      MESSAGE("converse counterexample on a cyclic graph: einf 1.5 but locked (seed ", seed, ")");
  }
}

TEST_CASE("lock verdict matches the edgewise norm condition on trees") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    std::size_t n = 4 + seed % 4;
    WeightedGraph g = testutil::random_tree(n, seed + 30);
    std::vector<double> omega = testutil::random_centered_omega(n, seed + 60);
    SyncAnalysis base = einf_norm_condition(g, FrequencyVector::centered(omega));
    REQUIRE(base.einf_norm > 0.0);

    for (double target : {0.6, 1.4}) {
      std::vector<double> scaled = omega;
      for (double& v : scaled) v *= target / base.einf_norm;
      FrequencyVector fv = FrequencyVector::centered(scaled);
      SimulationResult sim = kuramoto_simulate(g, fv, std::vector<double>(n, 0.0), 0.01, 400.0);
      CHECK(sim.locked == (target < 1.0));
      if (sim.locked) CHECK(sim.max_edge_phase_diff < std::numbers::pi / 2);
    }
  }
}

}  // TEST_SUITE
