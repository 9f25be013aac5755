// Command-line front end: generate | analyze | rewire | sync.
// Exit codes: 0 success, 2 usage error, 3 I/O error, 4 graph-structure error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "qfern/errors.hpp"
#include "qfern/format.hpp"
#include "qfern/json_io.hpp"
#include "qfern/rng.hpp"
#include "qfern/version.hpp"

namespace {

using qfern::json;

int exit_code_for(const qfern::Error& err) {
  switch (err.code()) {
    case qfern::Errc::invalid_parameter:
    case qfern::Errc::invalid_k:
    case qfern::Errc::invalid_quantile:
    case qfern::Errc::too_large:
      return 2;
    case qfern::Errc::io_error:
    case qfern::Errc::parse_error:
      return 3;
    default:
      return 4;
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) qfern::raise(qfern::Errc::io_error, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) qfern::raise(qfern::Errc::io_error, "cannot write " + path);
  out << text;
  if (!out) qfern::raise(qfern::Errc::io_error, "write failed for " + path);
}

// Serialized next to every output so a run can be reproduced from its
// manifest alone.
struct Manifest {
  std::string command;
  json parameters = json::object();
  json inputs = json::object();  // path -> digest
  std::uint64_t seed = 0;
};

void write_manifest(const Manifest& m, const std::string& path) {
  json j{{"command", m.command},
         {"parameters", m.parameters},
         {"inputs", m.inputs},
         {"seed", m.seed},
         {"tool_version", qfern::kToolVersion}};
  write_text(path, j.dump(2) + "\n");
}

std::vector<double> load_omega(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) qfern::raise(qfern::Errc::io_error, "cannot open " + path);
  std::vector<double> values;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    char* end = nullptr;
    double v = std::strtod(line.c_str(), &end);
    while (end && *end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (!end || *end != '\0')
      qfern::raise(qfern::Errc::parse_error, path + ":" + std::to_string(line_no) + ": bad value",
                   line_no);
    values.push_back(v);
  }
  if (values.size() != n)
    qfern::raise(qfern::Errc::invalid_parameter,
                 "omega file has " + std::to_string(values.size()) + " values, graph has " +
                     std::to_string(n) + " nodes");
  return values;
}

std::vector<double> draw_omega(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> values(n);
  for (double& v : values) v = 2.0 * qfern::uniform01(rng) - 1.0;  // uniform [-1, 1)
  return values;
}

std::vector<double> mean_row_resistance(const qfern::ResistanceMatrix& rm) {
  const std::size_t n = rm.values.rows();
  std::vector<double> mean(n, 0.0);
  if (n < 2) return mean;
  for (std::size_t u = 0; u < n; ++u) {
    double sum = 0.0;
    for (std::size_t v = 0; v < n; ++v) sum += rm.values(u, v);
    mean[u] = sum / static_cast<double>(n - 1);
  }
  return mean;
}

// ---------------------------------------------------------------- generate

int cmd_generate(std::size_t n, double p, std::uint64_t seed, const std::string& out_path) {
  qfern::WeightedGraph g = qfern::random_dag(n, p, seed);
  qfern::save_graph(g, out_path);

  Manifest m;
  m.command = "generate";
  m.parameters = {{"n", n}, {"p", qfern::round12(p)}, {"out", out_path}};
  m.seed = seed;
  write_manifest(m, out_path + ".manifest.json");
  std::cout << "wrote " << out_path << " (" << qfern::edge_list(g).size() << " edges)\n";
  return 0;
}

// ----------------------------------------------------------------- analyze

int cmd_analyze(const std::string& graph_path, const std::string& out_path) {
  qfern::WeightedGraph g = qfern::load_graph(graph_path);
  bool symmetrized = g.directed;
  if (g.directed) g = qfern::symmetrize(g);
  std::size_t components = qfern::component_count(g);
  if (components != 1)
    qfern::raise(qfern::Errc::disconnected_graph,
                 "graph is disconnected (" + std::to_string(components) + " components)",
                 static_cast<long>(components));

  qfern::SpectralDecomposition d = qfern::eig_sym(qfern::laplacian(g));
  qfern::CutResult cut = g.n <= 24
                             ? qfern::cheeger_exact(g, qfern::CutNormalization::MinSide)
                             : qfern::fiedler_sweep(g, d, qfern::CutNormalization::MinSide);
  qfern::CheegerInequalityReport ineq = qfern::check_cheeger_inequality(cut.ratio, d.lambda2);
  double r_total = qfern::total_effective_resistance(qfern::resistance_matrix(d));

  json report{{"lambda2", qfern::round12(d.lambda2)},
              {"fiedler", qfern::json_doubles(d.fiedler)},
              {"cheeger", cut},
              {"cheeger_method", g.n <= 24 ? "exact" : "sweep"},
              {"cheeger_inequality_ok", ineq.holds},
              {"cheeger_inequality_margins",
               {{"lower", qfern::round12(ineq.lower_margin)}, {"upper", qfern::round12(ineq.upper_margin)}}},
              {"r_total", qfern::round12(r_total)},
              {"degenerate_lambda2", d.degenerate_lambda2},
              {"symmetrized", symmetrized}};
  write_text(out_path, report.dump(2) + "\n");

  Manifest m;
  m.command = "analyze";
  m.parameters = {{"graph", graph_path}, {"out", out_path}};
  m.inputs[graph_path] = file_digest(graph_path);
  write_manifest(m, out_path + ".manifest.json");
  std::cout << "lambda2 " << qfern::fmt_g12(d.lambda2) << ", h " << qfern::fmt_g12(cut.ratio)
            << ", r_total " << qfern::fmt_g12(r_total) << "\n";
  return 0;
}

// ------------------------------------------------------------------ rewire

int cmd_rewire(const std::string& graph_path, const qfern::RewiringConfig& config,
               const std::string& prefix) {
  qfern::WeightedGraph g = qfern::load_graph(graph_path);
  qfern::RewiringReport report = qfern::rewire_optimize(g, config);

  qfern::save_graph(report.final_graph, prefix + ".graph.txt");

  write_text(prefix + ".asoft.csv", qfern::matrix_csv(report.final_asoft));

  write_text(prefix + ".report.json", json(report).dump(2) + "\n");

  write_text(prefix + ".trace.csv", qfern::trace_csv(report));

  auto dot_with_resistance = [](const qfern::WeightedGraph& graph) {
    qfern::DotOptions opts;
    opts.node_values =
        mean_row_resistance(qfern::resistance_matrix(qfern::eig_sym(qfern::laplacian(graph))));
    return qfern::export_dot(graph, opts);
  };
  write_text(prefix + ".before.dot", dot_with_resistance(report.initial_graph));
  write_text(prefix + ".after.dot", dot_with_resistance(report.final_graph));

  Manifest m;
  m.command = "rewire";
  m.parameters = {{"graph", graph_path},
                  {"alpha", qfern::round12(config.alpha)},
                  {"mode", config.gradient_mode == qfern::GradientMode::Signed ? "signed" : "abs"},
                  {"iters", config.max_iterations},
                  {"patience", config.patience},
                  {"policy",
                   config.candidate_policy == qfern::CandidatePolicy::CrossPartition ? "cross" : "all"},
                  {"out", prefix}};
  m.seed = config.seed;
  m.inputs[graph_path] = file_digest(graph_path);
  write_manifest(m, prefix + ".manifest.json");

  std::cout << "h " << qfern::fmt_g12(report.initial_h) << " -> " << qfern::fmt_g12(report.final_h)
            << ", r_total " << qfern::fmt_g12(report.initial_r_total) << " -> "
            << qfern::fmt_g12(report.final_r_total) << "\n";
  return 0;
}

// -------------------------------------------------------------------- sync

struct SyncArgs {
  std::string graph_path;
  std::string omega_path;
  bool have_omega_seed = false;
  std::uint64_t omega_seed = 0;
  bool have_threshold = false;
  double threshold = 0.0;
  double quantile = 0.8;
  std::size_t k = 2;
  double weight = 1.0;
  bool simulate = false;
  double dt = 0.01;
  double t_max = 200.0;
  std::string prefix;
};

int cmd_sync(const SyncArgs& args) {
  qfern::WeightedGraph g = qfern::load_graph(args.graph_path);
  bool symmetrized = g.directed;
  if (g.directed) g = qfern::symmetrize(g);

  std::vector<double> raw = args.have_omega_seed ? draw_omega(g.n, args.omega_seed)
                                                 : load_omega(args.omega_path, g.n);
  qfern::FrequencyVector omega = qfern::FrequencyVector::centered(raw);

  qfern::SyncAnalysis analysis = qfern::einf_norm_condition(g, omega);
  json analysis_json = analysis;
  analysis_json["symmetrized"] = symmetrized;
  write_text(args.prefix + ".sync.json", analysis_json.dump(2) + "\n");

  qfern::ThresholdPolicy policy = args.have_threshold
                                      ? qfern::ThresholdPolicy::absolute(args.threshold)
                                      : qfern::ThresholdPolicy::quantile(args.quantile);
  qfern::DesyncReport report = qfern::detect_desync_regions(g, omega, policy);
  write_text(args.prefix + ".desync.json", json(report).dump(2) + "\n");

  write_text(args.prefix + ".flagged.csv", qfern::flagged_csv(report));

  qfern::DotOptions before_opts;
  before_opts.node_values = mean_row_resistance(report.resistance);
  before_opts.emphasized = report.flagged_nodes;
  write_text(args.prefix + ".before.dot", qfern::export_dot(g, before_opts));

  if (!report.flagged_pairs.empty()) {
    if (args.k < 2 || args.k > g.n)
      qfern::raise(qfern::Errc::invalid_k, "k must be in [2, n]");
    qfern::StabilizerResult stab = qfern::place_stabilizer(g, report, args.k, args.weight);
    qfern::save_graph(stab.graph, args.prefix + ".stabilized.txt");
    write_text(args.prefix + ".stabilizer.json", json(stab).dump(2) + "\n");

    qfern::ResistanceMatrix grown =
        qfern::resistance_matrix(qfern::eig_sym(qfern::laplacian(stab.graph)));
    qfern::DotOptions after_opts;
    after_opts.node_values = mean_row_resistance(grown);
    after_opts.emphasized = report.flagged_nodes;
    after_opts.emphasized.push_back(g.n);  // the stabilizer node
    write_text(args.prefix + ".after.dot", qfern::export_dot(stab.graph, after_opts));
    std::cout << "stabilizer attached to " << stab.attached.size()
              << " nodes: delta_lambda2 " << qfern::fmt_g12(stab.delta_lambda2)
              << ", delta_max_flagged_r " << qfern::fmt_g12(stab.delta_max_flagged_r) << "\n";
  } else {
    std::cout << "no pairs flagged; skipping stabilizer placement\n";
  }

  if (args.simulate) {
    std::vector<double> theta0(g.n, 0.0);
    qfern::SimulationResult sim =
        qfern::kuramoto_simulate(g, omega, theta0, args.dt, args.t_max);
    json sim_json = sim;
    sim_json["einf_stable"] = analysis.stable;
    sim_json["verdicts_agree"] = (sim.locked == analysis.stable);
    write_text(args.prefix + ".simulation.json", sim_json.dump(2) + "\n");
    std::cout << "simulation: " << (sim.locked ? "locked" : "not locked")
              << ", einf verdict " << (analysis.stable ? "stable" : "unstable") << "\n";
  }

  Manifest m;
  m.command = "sync";
  m.parameters = {{"graph", args.graph_path},
                  {"k", args.k},
                  {"weight", qfern::round12(args.weight)},
                  {"simulate", args.simulate},
                  {"dt", qfern::round12(args.dt)},
                  {"t_max", qfern::round12(args.t_max)},
                  {"out", args.prefix}};
  if (args.have_threshold)
    m.parameters["threshold"] = qfern::round12(args.threshold);
  else
    m.parameters["quantile"] = qfern::round12(args.quantile);
  m.inputs[args.graph_path] = file_digest(args.graph_path);
  if (!args.have_omega_seed) {
    m.parameters["omega"] = args.omega_path;
    m.inputs[args.omega_path] = file_digest(args.omega_path);
  } else {
    m.seed = args.omega_seed;
  }
  write_manifest(m, args.prefix + ".manifest.json");
  std::cout << "einf_norm " << qfern::fmt_g12(analysis.einf_norm) << " ("
            << (analysis.stable ? "stable" : "unstable") << "), " << report.flagged_pairs.size()
            << " pairs flagged\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral graph toolkit: bottleneck analysis, rewiring, and sync stability"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qfern::kToolVersion);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a random DAG");
  std::size_t gen_n = 0;
  double gen_p = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("-n,--nodes", gen_n, "node count (>= 2)")->required();
  gen->add_option("-p,--prob", gen_p, "edge probability in [0, 1]")->required();
  gen->add_option("--seed", gen_seed, "PRNG seed")->default_val(0);
  gen->add_option("-o,--out", gen_out, "output graph file")->required();

  // analyze
  auto* ana = app.add_subcommand("analyze", "spectral and Cheeger report");
  std::string ana_graph, ana_out;
  ana->add_option("graph", ana_graph, "input graph file")->required();
  ana->add_option("-o,--out", ana_out, "output JSON report")->required();

  // rewire
  auto* rew = app.add_subcommand("rewire", "edge-swap optimization plus soft-adjacency step");
  std::string rew_graph, rew_prefix, rew_mode = "signed", rew_policy = "cross";
  qfern::RewiringConfig rew_config;
  rew->add_option("graph", rew_graph, "input graph file")->required();
  rew->add_option("--alpha", rew_config.alpha, "gradient step size")->default_val(0.05);
  rew->add_option("--mode", rew_mode, "gradient mode: signed|abs")
      ->check(CLI::IsMember({"signed", "abs"}));
  rew->add_option("--iters", rew_config.max_iterations, "iteration budget (>= 1)")->default_val(50);
  rew->add_option("--patience", rew_config.patience, "stop after this many non-improving steps (0 = off)")
      ->default_val(0);
  rew->add_option("--seed", rew_config.seed, "PRNG seed")->default_val(0);
  rew->add_option("--policy", rew_policy, "candidate policy: cross|all")
      ->check(CLI::IsMember({"cross", "all"}));
  rew->add_option("-o,--out", rew_prefix, "output path prefix")->required();

  // sync
  auto* syn = app.add_subcommand("sync", "desynchronization analysis and stabilizer placement");
  SyncArgs syn_args;
  syn->add_option("graph", syn_args.graph_path, "input graph file")->required();
  auto* omega_file = syn->add_option("--omega", syn_args.omega_path, "frequency file, one value per line");
  auto* omega_seed = syn->add_option("--omega-seed", syn_args.omega_seed,
                                     "draw frequencies uniformly from [-1, 1] with this seed");
  omega_file->excludes(omega_seed);
  auto* thr = syn->add_option("--threshold", syn_args.threshold, "absolute resistance threshold");
  auto* qnt = syn->add_option("--quantile", syn_args.quantile, "quantile threshold in (0, 1)");
  thr->excludes(qnt);
  syn->add_option("--k", syn_args.k, "stabilizer fan-out")->default_val(2);
  syn->add_option("--weight", syn_args.weight, "stabilizer edge weight")->default_val(1.0);
  syn->add_flag("--simulate", syn_args.simulate, "run the oscillator simulation as verification");
  syn->add_option("--dt", syn_args.dt, "integration step")->default_val(0.01);
  syn->add_option("--t-max", syn_args.t_max, "integration horizon")->default_val(200.0);
  syn->add_option("-o,--out", syn_args.prefix, "output path prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_n, gen_p, gen_seed, gen_out);
    if (ana->parsed()) return cmd_analyze(ana_graph, ana_out);
    if (rew->parsed()) {
      rew_config.gradient_mode =
          rew_mode == "abs" ? qfern::GradientMode::Abs : qfern::GradientMode::Signed;
      rew_config.candidate_policy = rew_policy == "all" ? qfern::CandidatePolicy::AllNonEdges
                                                        : qfern::CandidatePolicy::CrossPartition;
      if (rew_config.max_iterations < 1) {
        std::cerr << "error: --iters must be >= 1\n";
        return 2;
      }
      return cmd_rewire(rew_graph, rew_config, rew_prefix);
    }
    if (syn->parsed()) {
      syn_args.have_omega_seed = omega_seed->count() > 0;
      if (!syn_args.have_omega_seed && omega_file->count() == 0) {
        std::cerr << "error: one of --omega or --omega-seed is required\n";
        return 2;
      }
      syn_args.have_threshold = thr->count() > 0;
      return cmd_sync(syn_args);
    }
  } catch (const qfern::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
