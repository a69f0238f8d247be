#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spright/frontend.hpp"
#include "spright/peeling.hpp"

namespace spright {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One Monte-Carlo trial: draw, observe, decode, verify.
struct TrialSpec {
  int n = 0;
  std::uint64_t k = 0;
  OffsetVariant algorithm = OffsetVariant::kNso;
  std::optional<double> snr_db;  // nullopt: noiseless channel
  double rho = 1.0;
  PlanProfile profile = PlanProfile::kBenchmark;
  std::optional<OffsetParams> offsets;  // nullopt: default_offset_params
};

struct TrialOutcome {
  bool success = false;
  bool value_mismatch = false;
  std::uint64_t samples = 0;          // distinct positions queried
  std::uint64_t nominal_samples = 0;  // C * B * P
  std::int64_t runtime_ns = 0;        // observe + decode
  DecodeReport report;
};

/// All randomness comes from make_rng(seed, stream).
TrialOutcome run_trial(const TrialSpec& spec, std::uint64_t seed, std::uint64_t stream);

struct ExperimentConfig {
  std::vector<int> n_values{14};
  std::vector<std::uint64_t> k_values{10};
  std::vector<double> snr_db{-5, 0, 5, 10, 15, 20};
  OffsetVariant algorithm = OffsetVariant::kNso;
  int trials = 200;
  std::uint64_t seed = 1;
  double threshold = 0.95;
  std::optional<OffsetParams> offsets;
  PlanProfile profile = PlanProfile::kBenchmark;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
};

/// Reads every known key; unknown keys are rejected. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);

struct SnrRow {
  int n = 0;
  std::uint64_t k = 0;
  double snr_db = 0.0;
  OffsetVariant algorithm = OffsetVariant::kNso;
  int trials = 0;
  int successes = 0;
  double mean_samples = 0.0;
  double mean_runtime_ns = 0.0;
  double success_rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
};

struct ScalingRow {
  int n = 0;
  std::uint64_t k = 0;
  OffsetVariant algorithm = OffsetVariant::kNso;
  double success_rate = 0.0;
  double samples = 0.0;
  double runtime_ns = 0.0;
  std::uint64_t nominal_samples = 0;
  bool below_threshold = false;
};

std::vector<SnrRow> run_snr_sweep(const ExperimentConfig& config);
/// Sweeps config.n_values at every K, SNR fixed to the first grid entry.
std::vector<ScalingRow> run_scaling_sweep(const ExperimentConfig& config);

void write_snr_csv(std::ostream& out, const std::vector<SnrRow>& rows);
void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows);

/// Runs fn(i) for i in [0, count) on a pool of worker threads.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace spright
