#include "spright/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include "spright/codes.hpp"
#include "spright/fwht.hpp"

namespace spright {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(count, 1));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

TrialOutcome run_trial(const TrialSpec& spec, std::uint64_t seed, std::uint64_t stream) {
  Rng rng = make_rng(seed, stream);
  const double n_points = std::ldexp(1.0, spec.n);
  const SparseSpectrum truth = draw_spectrum(spec.n, spec.k, spec.rho, rng);

  PlanOptions plan_options;
  plan_options.profile = spec.profile;
  plan_options.seed = rng();
  const SubsamplingPlan plan = build_plan(spec.n, spec.k, plan_options);

  const OffsetParams params = spec.offsets.value_or(default_offset_params(spec.algorithm, spec.n));
  std::optional<LdpcCode> code;
  if (spec.algorithm == OffsetVariant::kSo) code = build_regular_ldpc(spec.n, rng);
  const OffsetPlan offsets = build_offsets(spec.algorithm, plan, params, code, rng);

  double sigma = 0.0;
  DecodeOptions options;
  if (spec.snr_db) {
    const double snr = db_to_linear(*spec.snr_db);
    sigma = sigma_for_snr(spec.rho, static_cast<double>(spec.k), n_points, snr);
    options.detector = make_detector_config(spec.n, plan.b, spec.rho, sigma, snr);
  } else {
    options.detector.rho = spec.rho;
    options.detector.zero_tol = 1e-9 * std::sqrt(n_points) * spec.rho;
  }
  options.max_sweeps = default_max_sweeps(spec.k);
  NoisyAccess access(truth, sigma, rng());

  const auto start = std::chrono::steady_clock::now();
  const BinObservations obs = observe(access, plan, offsets);
  DecodeResult decoded = decode(obs, plan, offsets, options);
  const auto stop = std::chrono::steady_clock::now();

  TrialOutcome out;
  const SupportCheck check = verify_support(decoded.spectrum, truth);
  out.success = check.success();
  out.value_mismatch = check.value_mismatch;
  out.samples = access.distinct_samples();
  out.nominal_samples = nominal_sample_count(plan, offsets);
  out.runtime_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
  out.report = decoded.report;
  out.report.samples_used = out.samples;
  return out;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (n_values.empty() || k_values.empty() || snr_db.empty()) throw ConfigError("n, K and SNR lists must be non-empty");
  for (int n : n_values) {
    if (n < 2 || n > 30) throw ConfigError("n must lie in [2, 30]");
    for (std::uint64_t k : k_values) {
      if (k < 1 || k > (std::uint64_t{1} << n)) throw ConfigError("K must lie in [1, 2^n]");
    }
    if (algorithm == OffsetVariant::kSo && n < 6) throw ConfigError("so needs n >= 6 for the LDPC code");
  }
  for (double s : snr_db) {
    if (!std::isfinite(s)) throw ConfigError("SNR grid must be finite");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ConfigError("threshold must lie in [0, 1]");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "n") {
        c.n_values = value.is_array() ? value.get<std::vector<int>>() : std::vector<int>{value.get<int>()};
      } else if (key == "n_range") {
        const auto range = value.get<std::vector<int>>();
        if (range.size() != 2 || range[0] > range[1]) throw ConfigError("n_range must be [lo, hi]");
        c.n_values.clear();
        for (int n = range[0]; n <= range[1]; ++n) c.n_values.push_back(n);
      } else if (key == "k") {
        c.k_values = value.is_array() ? value.get<std::vector<std::uint64_t>>()
                                      : std::vector<std::uint64_t>{value.get<std::uint64_t>()};
      } else if (key == "snr_db") {
        c.snr_db = value.is_array() ? value.get<std::vector<double>>() : std::vector<double>{value.get<double>()};
      } else if (key == "algorithm") {
        c.algorithm = parse_variant(value.get<std::string>());
      } else if (key == "trials") {
        c.trials = value.get<int>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "threshold") {
        c.threshold = value.get<double>();
      } else if (key == "threads") {
        c.threads = value.get<int>();
      } else if (key == "profile") {
        const auto name = value.get<std::string>();
        if (name == "benchmark") {
          c.profile = PlanProfile::kBenchmark;
        } else if (name == "theory") {
          c.profile = PlanProfile::kTheory;
        } else {
          throw ConfigError("profile must be benchmark or theory");
        }
      } else if (key == "offsets") {
        OffsetParams p;
        p.p1 = value.value("p1", 0);
        p.p2 = value.value("p2", 0);
        p.p3 = value.value("p3", 0);
        c.offsets = p;
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

std::vector<SnrRow> run_snr_sweep(const ExperimentConfig& config) {
  config.validate();
  struct Point {
    int n;
    std::uint64_t k;
    double snr;
  };
  std::vector<Point> points;
  for (int n : config.n_values) {
    for (std::uint64_t k : config.k_values) {
      for (double s : config.snr_db) points.push_back({n, k, s});
    }
  }
  std::vector<SnrRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& pt = points[i];
    TrialSpec spec;
    spec.n = pt.n;
    spec.k = pt.k;
    spec.algorithm = config.algorithm;
    spec.profile = config.profile;
    spec.offsets = config.offsets;
    if (config.algorithm != OffsetVariant::kNoiseless) spec.snr_db = pt.snr;

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(config.trials));
    parallel_for(config.trials, config.threads, [&](int t) {
      outcomes[static_cast<std::size_t>(t)] =
          run_trial(spec, config.seed, (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(t));
    });

    SnrRow row;
    row.n = pt.n;
    row.k = pt.k;
    row.snr_db = pt.snr;
    row.algorithm = config.algorithm;
    row.trials = config.trials;
    for (const auto& o : outcomes) {
      row.successes += o.success;
      row.mean_samples += static_cast<double>(o.samples);
      row.mean_runtime_ns += static_cast<double>(o.runtime_ns);
    }
    row.mean_samples /= config.trials;
    row.mean_runtime_ns /= config.trials;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ScalingRow> run_scaling_sweep(const ExperimentConfig& config) {
  ExperimentConfig single = config;
  single.snr_db = {config.snr_db.front()};
  std::vector<ScalingRow> rows;
  for (const SnrRow& r : run_snr_sweep(single)) {
    ScalingRow row;
    row.n = r.n;
    row.k = r.k;
    row.algorithm = r.algorithm;
    row.success_rate = r.success_rate();
    row.samples = r.mean_samples;
    row.runtime_ns = r.mean_runtime_ns;
    PlanOptions plan_options;
    plan_options.profile = config.profile;
    const SubsamplingPlan plan = build_plan(r.n, r.k, plan_options);
    const OffsetParams p = config.offsets.value_or(default_offset_params(r.algorithm, r.n));
    const int rows_per_group = nominal_rows_per_group(r.algorithm, p, r.n);
    row.nominal_samples = static_cast<std::uint64_t>(plan.groups()) * plan.bins() *
                          static_cast<std::uint64_t>(rows_per_group);
    row.below_threshold = row.success_rate < config.threshold;
    rows.push_back(row);
  }
  return rows;
}

void write_snr_csv(std::ostream& out, const std::vector<SnrRow>& rows) {
  out << "n,K,snr_db,algorithm,trials,successes,success_rate,mean_samples,mean_runtime_ns\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.k << ',' << format_double(r.snr_db) << ',' << to_string(r.algorithm) << ','
        << r.trials << ',' << r.successes << ',' << format_double(r.success_rate()) << ','
        << format_double(r.mean_samples) << ',' << format_double(r.mean_runtime_ns) << '\n';
  }
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "n,K,algorithm,success_rate,samples,runtime_ns,nominal_samples,below_threshold\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.k << ',' << to_string(r.algorithm) << ',' << format_double(r.success_rate) << ','
        << format_double(r.samples) << ',' << format_double(r.runtime_ns) << ',' << r.nominal_samples << ','
        << (r.below_threshold ? 1 : 0) << '\n';
  }
}

}  // namespace spright
