#include "spright/bin_detect.hpp"

#include <cmath>
#include <stdexcept>

namespace spright {

namespace {

double mean_square(std::span<const double> u) {
  double s = 0.0;
  for (double v : u) s += v * v;
  return u.empty() ? 0.0 : s / static_cast<double>(u.size());
}

double correlate(std::span<const double> u, std::span<const std::uint64_t> rows, std::uint64_t k) {
  double s = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) s += parity(rows[p] & k) ? -u[p] : u[p];
  return s;
}

bool zero_ton(std::span<const double> u, const DetectorConfig& cfg) {
  return mean_square(u) <= (1.0 + cfg.gamma) * cfg.nu2;
}

bool hash_consistent(const SubsamplingPlan& plan, int group, std::uint64_t bin, std::uint64_t k) {
  return plan.hash(group, k) == bin;
}

// Value estimate and residual verification of a candidate index on the given rows.
Detection verify(std::span<const double> u, std::span<const std::uint64_t> rows, std::uint64_t k, int n,
                 const DetectorConfig& cfg) {
  const double alpha = correlate(u, rows, k) / static_cast<double>(u.size());
  const double value =
      cfg.mode == AmplitudeMode::kConstellation ? (alpha >= 0.0 ? cfg.rho : -cfg.rho) : alpha;
  double residual = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) {
    const double r = u[p] - (parity(rows[p] & k) ? -value : value);
    residual += r * r;
  }
  residual /= static_cast<double>(u.size());
  if (residual <= (1.0 + cfg.gamma) * cfg.nu2) return Detection::single_ton(BitIndex(k, n), value);
  return Detection::multi_ton();
}

int majority(int ones, int total) { return 2 * ones > total ? 1 : 0; }

}  // namespace

const char* to_string(BinKind kind) {
  switch (kind) {
    case BinKind::kZeroTon: return "zero-ton";
    case BinKind::kSingleTon: return "single-ton";
    case BinKind::kMultiTon: return "multi-ton";
  }
  return "unknown";
}

double default_gamma(double snr_linear) { return std::min(1.0, snr_linear / 4.0); }

DetectorConfig make_detector_config(int n, int b, double rho, double sigma, double snr_linear) {
  DetectorConfig cfg;
  cfg.rho = rho;
  cfg.nu2 = std::ldexp(sigma * sigma, n - b);
  cfg.gamma = default_gamma(snr_linear);
  return cfg;
}

double crossover_bound(double eta, double snr_linear) {
  if (!(eta > 0.0) || !(snr_linear > 0.0)) throw std::invalid_argument("eta and SNR must be positive");
  return std::exp(-eta * snr_linear / 2.0);
}

std::vector<double> signature(std::span<const std::uint64_t> rows, std::uint64_t k) {
  std::vector<double> s(rows.size());
  for (std::size_t p = 0; p < rows.size(); ++p) s[p] = parity(rows[p] & k) ? -1.0 : 1.0;
  return s;
}

Detection detect_noiseless(std::span<const double> u, std::uint64_t bin, int group,
                           const SubsamplingPlan& plan, const DetectorConfig& cfg) {
  const int n = plan.n;
  if (static_cast<int>(u.size()) != n + 1) throw DimensionError("noiseless column must have n+1 rows");
  bool all_zero = true;
  for (double v : u) all_zero = all_zero && std::abs(v) <= cfg.zero_tol;
  if (all_zero) return Detection::zero_ton();
  const double ref = u[0];
  if (std::abs(ref) <= cfg.zero_tol) return Detection::multi_ton();
  std::uint64_t k = 0;
  for (int t = 1; t <= n; ++t) {
    if (std::abs(std::abs(u[static_cast<std::size_t>(t)] / ref) - 1.0) > cfg.ratio_tol) {
      return Detection::multi_ton();
    }
    if (sgn(u[static_cast<std::size_t>(t)]) ^ sgn(ref)) k |= std::uint64_t{1} << (t - 1);
  }
  if (!hash_consistent(plan, group, bin, k)) return Detection::multi_ton();
  const double value = cfg.value_grid > 0.0 ? cfg.value_grid * std::round(ref / cfg.value_grid) : ref;
  return Detection::single_ton(BitIndex(k, n), value);
}

Detection detect_near_linear(std::span<const double> u, std::uint64_t bin, int group,
                             const SubsamplingPlan& plan, const OffsetPlan& offsets,
                             const DetectorConfig& cfg) {
  const auto rows = offsets.group_rows(group);
  if (u.size() != rows.size()) throw DimensionError("column length does not match offsets");
  if (zero_ton(u, cfg)) return Detection::zero_ton();
  const AffineSolution coset = solve_affine(plan.matrices[static_cast<std::size_t>(group)],
                                            BitIndex(bin, plan.b));
  // Minimizing ||U - alpha s_k||^2 over k is maximizing |s_k^T U|.
  std::uint64_t best = coset.particular.value();
  double best_score = -1.0;
  for (std::uint64_t i = 0; i < coset.size(); ++i) {
    const std::uint64_t k = coset.member(i).value();
    const double score = std::abs(correlate(u, rows, k));
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return verify(u, rows, best, plan.n, cfg);
}

Detection detect_nso(std::span<const double> u, std::uint64_t bin, int group, const SubsamplingPlan& plan,
                     const OffsetPlan& offsets, const DetectorConfig& cfg) {
  const int n = plan.n;
  const int p1 = offsets.params.p1;
  const auto rows = offsets.group_rows(group);
  if (u.size() != rows.size() || static_cast<int>(u.size()) != p1 * (n + 1)) {
    throw DimensionError("nso column length does not match offsets");
  }
  const auto base = u.first(static_cast<std::size_t>(p1));
  const auto base_rows = rows.first(static_cast<std::size_t>(p1));
  if (zero_ton(base, cfg)) return Detection::zero_ton();
  std::uint64_t k = 0;
  for (int q = 0; q < n; ++q) {
    int ones = 0;
    for (int p = 0; p < p1; ++p) {
      const double modulated = u[static_cast<std::size_t>(p1 + p * n + q)];
      ones += sgn(modulated) ^ sgn(u[static_cast<std::size_t>(p)]);
    }
    if (majority(ones, p1)) k |= std::uint64_t{1} << q;
  }
  if (!hash_consistent(plan, group, bin, k)) return Detection::multi_ton();
  return verify(base, base_rows, k, n, cfg);
}

Detection detect_so(std::span<const double> u, std::uint64_t bin, int group, const SubsamplingPlan& plan,
                    const OffsetPlan& offsets, const DetectorConfig& cfg) {
  if (!offsets.code) throw std::invalid_argument("so detection needs the offset code");
  const LdpcCode& code = *offsets.code;
  const auto [p1, p2, p3] = offsets.params;
  const auto rows = offsets.group_rows(group);
  if (u.size() != rows.size() || static_cast<int>(u.size()) != p1 + p2 + p3) {
    throw DimensionError("so column length does not match offsets");
  }
  const auto random = u.first(static_cast<std::size_t>(p1));
  const auto random_rows = rows.first(static_cast<std::size_t>(p1));
  if (zero_ton(random, cfg)) return Detection::zero_ton();

  int negative = 0;
  for (int p = 0; p < p2; ++p) negative += sgn(u[static_cast<std::size_t>(p1 + p)]);
  const int reference = majority(negative, p2);

  std::uint64_t received = 0;
  for (int p = 0; p < p3; ++p) {
    if (sgn(u[static_cast<std::size_t>(p1 + p2 + p)]) ^ reference) received |= std::uint64_t{1} << p;
  }
  const auto decoded = bitflip_decode(code, BitIndex(received, code.n_block), cfg.bitflip_rounds);
  if (!decoded) return Detection::multi_ton();
  const std::uint64_t k = decoded->value();
  if (!hash_consistent(plan, group, bin, k)) return Detection::multi_ton();
  return verify(random, random_rows, k, plan.n, cfg);
}

Detection detect(std::span<const double> u, std::uint64_t bin, int group, const SubsamplingPlan& plan,
                 const OffsetPlan& offsets, const DetectorConfig& cfg) {
  switch (offsets.variant) {
    case OffsetVariant::kNoiseless: return detect_noiseless(u, bin, group, plan, cfg);
    case OffsetVariant::kNearLinear: return detect_near_linear(u, bin, group, plan, offsets, cfg);
    case OffsetVariant::kNso: return detect_nso(u, bin, group, plan, offsets, cfg);
    case OffsetVariant::kSo: return detect_so(u, bin, group, plan, offsets, cfg);
  }
  return Detection::multi_ton();
}

}  // namespace spright
