#include "spright/peeling.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace spright {

namespace {

struct Candidate {
  double value = 0.0;
  int group = 0;
  bool corroborated = false;
};

}  // namespace

int default_max_sweeps(std::uint64_t k) { return static_cast<int>(2 * k + 10); }

nlohmann::json to_json(const DecodeReport& report) {
  return {{"sweeps", report.sweeps},
          {"peels", report.peels},
          {"conflicts", report.conflicts},
          {"stalled", report.stalled},
          {"residual_energy", report.residual_energy},
          {"samples_used", report.samples_used}};
}

double residual_energy(const BinObservations& obs) {
  double total = 0.0;
  for (double v : obs.data) total += v * v;
  return obs.offsets > 0 ? total / obs.offsets : 0.0;
}

DecodeResult decode(BinObservations obs, const SubsamplingPlan& plan, const OffsetPlan& offsets,
                    const DecodeOptions& options) {
  const int groups = plan.groups();
  const std::uint64_t bins = plan.bins();
  if (obs.groups != groups || obs.b != plan.b || obs.offsets != offsets.rows_per_group()) {
    throw DimensionError("observations do not match the plan and offsets");
  }
  const int max_sweeps = options.max_sweeps > 0 ? options.max_sweeps
                                                : default_max_sweeps(static_cast<std::uint64_t>(groups) * bins);

  DecodeResult result{SparseSpectrum(plan.n), {}};
  DecodeReport& report = result.report;
  std::vector<Detection> detections(static_cast<std::size_t>(groups) * bins);
  std::vector<char> dirty(detections.size(), 1);
  auto slot = [bins](int c, std::uint64_t j) { return static_cast<std::size_t>(c) * bins + j; };

  while (report.sweeps < max_sweeps) {
    ++report.sweeps;
    for (int c = 0; c < groups; ++c) {
      for (std::uint64_t j = 0; j < bins; ++j) {
        if (!dirty[slot(c, j)]) continue;
        detections[slot(c, j)] = detect(obs.column(c, j), j, c, plan, offsets, options.detector);
        dirty[slot(c, j)] = 0;
      }
    }

    std::map<std::uint64_t, Candidate> candidates;
    for (int c = 0; c < groups; ++c) {
      for (std::uint64_t j = 0; j < bins; ++j) {
        const Detection& d = detections[slot(c, j)];
        if (d.kind != BinKind::kSingleTon) continue;
        const std::uint64_t k = d.index.value();
        if (auto prior = result.spectrum.get(d.index)) {
          if (std::abs(*prior - d.value) > 1e-9 * std::max(1.0, std::abs(*prior))) ++report.conflicts;
          continue;
        }
        auto [it, inserted] = candidates.try_emplace(k, Candidate{d.value, c, false});
        if (!inserted) {
          if (std::abs(it->second.value - d.value) > 1e-9 * std::max(1.0, std::abs(d.value))) ++report.conflicts;
          it->second.corroborated = true;
        }
      }
    }

    std::vector<std::pair<std::uint64_t, double>> accepted;
    if (options.cross_group_gate) {
      std::vector<std::pair<std::uint64_t, double>> plain;
      std::vector<std::pair<std::uint64_t, double>> confirmed;
      for (const auto& [k, cand] : candidates) {
        // Multi-tons can pose as zero-tons or single-tons, so another group's
        // bin only vetoes candidates that no second group has confirmed.
        bool rejected = false;
        for (int c = 0; c < groups && !rejected && !cand.corroborated; ++c) {
          if (c == cand.group) continue;
          const Detection& other = detections[slot(c, plan.hash(c, k))];
          rejected = other.kind == BinKind::kZeroTon ||
                     (other.kind == BinKind::kSingleTon && other.index.value() != k);
        }
        if (rejected) continue;
        (cand.corroborated ? confirmed : plain).emplace_back(k, cand.value);
      }
      accepted = confirmed.empty() ? std::move(plain) : std::move(confirmed);
    } else {
      for (const auto& [k, cand] : candidates) accepted.emplace_back(k, cand.value);
    }
    if (accepted.empty()) break;

    for (const auto& [k, value] : accepted) {
      result.spectrum.set(BitIndex(k, plan.n), value);
      ++report.peels;
      for (int c = 0; c < groups; ++c) {
        const std::uint64_t j = plan.hash(c, k);
        const auto rows = offsets.group_rows(c);
        auto column = obs.column(c, j);
        for (std::size_t p = 0; p < column.size(); ++p) column[p] -= parity(rows[p] & k) ? -value : value;
        dirty[slot(c, j)] = 1;
      }
    }
  }

  report.residual_energy = residual_energy(obs);
  const double floor = options.detector.nu2 > 0.0
                           ? static_cast<double>(groups) * static_cast<double>(bins) *
                                 (1.0 + options.detector.gamma) * options.detector.nu2
                           : static_cast<double>(groups) * static_cast<double>(bins) *
                                 options.detector.zero_tol * options.detector.zero_tol;
  report.stalled = report.residual_energy > floor;
  return result;
}

SupportCheck verify_support(const SparseSpectrum& recovered, const SparseSpectrum& truth, double value_tol) {
  SupportCheck check;
  if (recovered.n() != truth.n()) throw DimensionError("spectra have different n");
  check.support_equal = recovered.support() == truth.support();
  if (check.support_equal) {
    for (const auto& [k, value] : truth.entries()) {
      const double got = *recovered.get(BitIndex(k, truth.n()));
      if (std::abs(got - value) > value_tol * std::max(1.0, std::abs(value))) check.value_mismatch = true;
    }
  }
  return check;
}

}  // namespace spright
