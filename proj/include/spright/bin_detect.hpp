#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spright/frontend.hpp"
#include "spright/gf2.hpp"

namespace spright {

enum class BinKind { kZeroTon, kSingleTon, kMultiTon };

const char* to_string(BinKind kind);

struct Detection {
  BinKind kind = BinKind::kMultiTon;
  BitIndex index;     // single-ton only
  double value = 0.0; // single-ton only

  static Detection zero_ton() { return {BinKind::kZeroTon, {}, 0.0}; }
  static Detection multi_ton() { return {BinKind::kMultiTon, {}, 0.0}; }
  static Detection single_ton(BitIndex k, double x) { return {BinKind::kSingleTon, k, x}; }
};

struct DetectorConfig {
  double gamma = 1.0;  // verification slack
  double nu2 = 0.0;    // per-entry bin noise variance N sigma^2 / B
  double rho = 1.0;
  AmplitudeMode mode = AmplitudeMode::kConstellation;
  double zero_tol = 1e-9;    // noiseless zero-ton threshold on |U_p|
  double ratio_tol = 1e-6;   // noiseless relative tolerance on |U_p / U_0|
  int bitflip_rounds = kDefaultBitflipRounds;
  double value_grid = 0.0;   // noiseless: snap values to this grid when > 0
};

/// gamma = min(1, SNR/4).
double default_gamma(double snr_linear);

/// Config for a noisy run: nu2 = N sigma^2 / B and gamma from the SNR.
DetectorConfig make_detector_config(int n, int b, double rho, double sigma, double snr_linear);

/// 1 for x < 0, 0 otherwise.
inline int sgn(double x) { return x < 0.0 ? 1 : 0; }

/// exp(-eta * SNR / 2).
double crossover_bound(double eta, double snr_linear);

/// s_k[p] = (-1)^<d_p, k> for the given rows.
std::vector<double> signature(std::span<const std::uint64_t> rows, std::uint64_t k);

Detection detect_noiseless(std::span<const double> u, std::uint64_t bin, int group,
                           const SubsamplingPlan& plan, const DetectorConfig& cfg);

Detection detect_near_linear(std::span<const double> u, std::uint64_t bin, int group,
                             const SubsamplingPlan& plan, const OffsetPlan& offsets,
                             const DetectorConfig& cfg);

Detection detect_nso(std::span<const double> u, std::uint64_t bin, int group, const SubsamplingPlan& plan,
                     const OffsetPlan& offsets, const DetectorConfig& cfg);

Detection detect_so(std::span<const double> u, std::uint64_t bin, int group, const SubsamplingPlan& plan,
                    const OffsetPlan& offsets, const DetectorConfig& cfg);

/// Dispatches on offsets.variant.
Detection detect(std::span<const double> u, std::uint64_t bin, int group, const SubsamplingPlan& plan,
                 const OffsetPlan& offsets, const DetectorConfig& cfg);

}  // namespace spright
