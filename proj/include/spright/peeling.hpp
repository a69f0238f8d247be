#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "spright/bin_detect.hpp"
#include "spright/frontend.hpp"
#include "spright/spectrum.hpp"

namespace spright {

struct DecodeOptions {
  DetectorConfig detector;
  int max_sweeps = 0;  // 0: derive from the bin count
  /// Candidates seen in two groups go first. A candidate seen in one group is
  /// dropped when its bin in another group is a zero-ton or a single-ton of a
  /// different index.
  bool cross_group_gate = true;
};

/// 2K + 10.
int default_max_sweeps(std::uint64_t k);

struct DecodeReport {
  int sweeps = 0;
  int peels = 0;
  int conflicts = 0;
  bool stalled = false;
  double residual_energy = 0.0;
  std::uint64_t samples_used = 0;
};

nlohmann::json to_json(const DecodeReport& report);

struct DecodeResult {
  SparseSpectrum spectrum;
  DecodeReport report;
};

/// Round-based peeling: every sweep classifies the bins that changed, then
/// subtracts all accepted single-tons from every group at once. Stops at the
/// first sweep without a new single-ton or after max_sweeps.
DecodeResult decode(BinObservations obs, const SubsamplingPlan& plan, const OffsetPlan& offsets,
                    const DecodeOptions& options);

/// Residual energy sum_{c,j} (1/P) ||U_{c,.}[j]||^2.
double residual_energy(const BinObservations& obs);

struct SupportCheck {
  bool support_equal = false;
  bool value_mismatch = false;  // only meaningful when support_equal
  bool success() const { return support_equal; }
};

/// Set equality of supports; values compared to a relative tolerance.
SupportCheck verify_support(const SparseSpectrum& recovered, const SparseSpectrum& truth,
                            double value_tol = 1e-9);

}  // namespace spright
