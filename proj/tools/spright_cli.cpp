#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spright/analysis.hpp"
#include "spright/codes.hpp"
#include "spright/experiment.hpp"
#include "spright/fwht.hpp"
#include "spright/sketch.hpp"

using namespace spright;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out;
  std::optional<std::string> algo;
  std::optional<double> snr_db;
  std::optional<int> n;
  std::optional<std::uint64_t> k;
  std::optional<int> threads;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON experiment config");
  app->add_option("--seed", o.seed);
  app->add_option("--trials", o.trials);
  app->add_option("--out", o.out, "output path (stdout when absent)");
  app->add_option("--algo", o.algo, "noiseless | near-linear | nso | so");
  app->add_option("--snr-db", o.snr_db);
  app->add_option("--n", o.n);
  app->add_option("--k", o.k);
  app->add_option("--threads", o.threads);
}

ExperimentConfig load_config(const Overrides& o) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw ConfigError("cannot open config " + o.config);
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad config json: ") + e.what());
    }
  }
  if (o.seed) j["seed"] = *o.seed;
  if (o.trials) j["trials"] = *o.trials;
  if (o.algo) j["algorithm"] = *o.algo;
  if (o.snr_db) j["snr_db"] = std::vector<double>{*o.snr_db};
  if (o.n) {
    j.erase("n_range");
    j["n"] = *o.n;
  }
  if (o.k) j["k"] = *o.k;
  if (o.threads) j["threads"] = *o.threads;
  return config_from_json(j);
}

// Writes to --out or stdout.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  fn(out);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return in;
}

int cmd_synth(const Overrides& o, double rho) {
  const ExperimentConfig c = load_config(o);
  Rng rng = make_rng(c.seed);
  const auto spectrum = draw_spectrum(c.n_values.front(), c.k_values.front(), rho, rng);
  emit(o.out, [&](std::ostream& out) { write_spectrum(out, spectrum); });
  return 0;
}

// Dense transform of a whitespace-separated list of 2^n values.
int cmd_wht(const std::string& input, const std::string& out_path) {
  std::ifstream in = open_input(input);
  std::vector<double> values;
  for (double v; in >> v;) values.push_back(v);
  if (!in.eof()) throw ConfigError("non-numeric value in " + input);
  const int n = log2_exact(values.size());
  const DenseSignal x = fwht(DenseSignal(n, std::move(values)));
  emit(out_path, [&](std::ostream& out) {
    out.precision(17);
    for (double v : x.values) out << v << '\n';
  });
  return 0;
}

int cmd_recover(const Overrides& o, const std::string& spectrum_path, const std::string& report_path) {
  const ExperimentConfig c = load_config(o);
  std::ifstream in = open_input(spectrum_path);
  const SparseSpectrum truth = read_spectrum(in);
  const int n = truth.n();
  const std::uint64_t k = std::max<std::uint64_t>(truth.size(), 1);
  double rho = truth.max_abs();
  if (rho == 0.0) rho = 1.0;

  Rng rng = make_rng(c.seed);
  const SubsamplingPlan plan = build_plan(n, k, {.profile = c.profile, .seed = rng()});
  const OffsetParams params = c.offsets.value_or(default_offset_params(c.algorithm, n));
  std::optional<LdpcCode> code;
  if (c.algorithm == OffsetVariant::kSo) code = build_regular_ldpc(n, rng);
  const OffsetPlan offsets = build_offsets(c.algorithm, plan, params, code, rng);

  const bool noisy = o.snr_db.has_value() && c.algorithm != OffsetVariant::kNoiseless;
  double sigma = 0.0;
  DecodeOptions options;
  if (noisy) {
    const double snr = db_to_linear(*o.snr_db);
    sigma = sigma_for_snr(rho, static_cast<double>(k), std::ldexp(1.0, n), snr);
    options.detector = make_detector_config(n, plan.b, rho, sigma, snr);
  } else {
    options.detector.rho = rho;
    options.detector.zero_tol = 1e-9 * std::sqrt(std::ldexp(1.0, n)) * rho;
  }
  NoisyAccess access(truth, sigma, rng());
  const DecodeResult result = decode(observe(access, plan, offsets), plan, offsets, options);
  emit(o.out, [&](std::ostream& out) { write_spectrum(out, result.spectrum); });

  nlohmann::json report = to_json(result.report);
  report["success"] = verify_support(result.spectrum, truth).success();
  report["distinct_samples"] = access.distinct_samples();
  report["nominal_samples"] = nominal_sample_count(plan, offsets);
  if (report_path.empty()) {
    std::cerr << report.dump() << '\n';
  } else {
    std::ofstream(report_path) << report.dump(2) << '\n';
  }
  return 0;
}

int cmd_bench_snr(const Overrides& o) {
  const auto rows = run_snr_sweep(load_config(o));
  emit(o.out, [&](std::ostream& out) { write_snr_csv(out, rows); });
  return 0;
}

int cmd_bench_scaling(const Overrides& o) {
  ExperimentConfig c;
  if (o.config.empty() && !o.n) {
    // Scaling defaults: n from 7 to 17 at 10 dB.
    c = load_config(o);
    c.n_values.clear();
    for (int n = 7; n <= 17; ++n) c.n_values.push_back(n);
    if (!o.snr_db) c.snr_db = {10.0};
    c.validate();
  } else {
    c = load_config(o);
    if (!o.snr_db && o.config.empty()) c.snr_db = {10.0};
  }
  const auto rows = run_scaling_sweep(c);
  emit(o.out, [&](std::ostream& out) { write_scaling_csv(out, rows); });
  return 0;
}

int cmd_de_table(const std::string& out_path, int max_groups) {
  emit(out_path, [&](std::ostream& out) {
    out << "C,eta_min,C_eta_min\n";
    for (int c = 2; c <= max_groups; ++c) {
      const double eta = min_eta(c);
      char line[96];
      std::snprintf(line, sizeof line, "%d,%.4f,%.4f\n", c, eta, c * eta);
      out << line;
    }
  });
  return 0;
}

int cmd_sketch(const std::string& input, const std::string& out_path, std::uint64_t seed, int max_edge,
               std::uint64_t budget) {
  std::ifstream in = open_input(input);
  const Hypergraph h = read_hypergraph(in);
  std::uint64_t queries = 0;
  const CutOracle oracle = [&](const BitIndex& m) {
    ++queries;
    return static_cast<double>(cut_value(h, m));
  };
  SketchOptions options;
  options.seed = seed;
  options.max_edge_size = max_edge;
  options.sparsity_budget = budget;
  const SketchResult result = sketch_recover(oracle, h.n, options);
  emit(out_path, [&](std::ostream& out) {
    nlohmann::json j;
    nlohmann::json spectrum = nlohmann::json::object();
    for (const auto& [k, v] : result.spectrum.entries()) spectrum[BitIndex(k, h.n).str()] = v;
    j["n"] = h.n;
    j["spectrum"] = spectrum;
    j["edges"] = result.edges ? nlohmann::json(*result.edges) : nlohmann::json(nullptr);
    j["queries"] = result.queries;
    j["oracle_calls"] = queries;
    j["bits"] = result.bits;
    j["complete"] = result.complete;
    out << j.dump(2) << '\n';
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse Walsh-Hadamard transforms by subsampling and peeling"};
  app.require_subcommand(1);
  Overrides o;

  auto* synth = app.add_subcommand("synth", "draw a random K-sparse spectrum");
  add_common(synth, o);
  double rho = 1.0;
  synth->add_option("--rho", rho);

  auto* wht = app.add_subcommand("wht", "dense orthonormal transform of a sample file");
  std::string wht_in;
  wht->add_option("input", wht_in)->required();
  wht->add_option("--out", o.out);

  auto* recover = app.add_subcommand("recover", "observe a spectrum file through noise and decode it");
  add_common(recover, o);
  std::string spectrum_path, report_path;
  recover->add_option("spectrum", spectrum_path)->required();
  recover->add_option("--report", report_path, "JSON decode report (stderr when absent)");

  auto* bench = app.add_subcommand("bench", "Monte-Carlo sweeps");
  bench->require_subcommand(1);
  auto* snr = bench->add_subcommand("snr", "success rate against SNR");
  add_common(snr, o);
  auto* scaling = bench->add_subcommand("scaling", "samples and runtime against n");
  add_common(scaling, o);

  auto* de = app.add_subcommand("de-table", "density-evolution thresholds as CSV");
  int max_groups = 8;
  de->add_option("--out", o.out);
  de->add_option("--max-c", max_groups)->check(CLI::Range(2, 16));

  auto* sketch = app.add_subcommand("sketch", "recover a hypergraph from cut queries");
  std::string graph_path;
  std::uint64_t sketch_seed = 1, budget = 0;
  int max_edge = 0;
  sketch->add_option("input", graph_path)->required();
  sketch->add_option("--out", o.out);
  sketch->add_option("--seed", sketch_seed);
  sketch->add_option("--max-edge", max_edge);
  sketch->add_option("--budget", budget, "sparsity budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*synth) return cmd_synth(o, rho);
    if (*wht) return cmd_wht(wht_in, o.out);
    if (*recover) return cmd_recover(o, spectrum_path, report_path);
    if (*snr) return cmd_bench_snr(o);
    if (*scaling) return cmd_bench_scaling(o);
    if (*de) return cmd_de_table(o.out, max_groups);
    if (*sketch) return cmd_sketch(graph_path, o.out, sketch_seed, max_edge, budget);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
