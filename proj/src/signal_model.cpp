#include "spright/signal_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "spright/fwht.hpp"

namespace spright {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5eedu};
  return Rng(seq);
}

SparseSpectrum draw_spectrum(int n, std::uint64_t k, double rho, Rng& rng, AmplitudeMode mode) {
  if (n < 0 || n > kMaxBits) throw DimensionError("n out of range");
  const std::uint64_t n_points = std::uint64_t{1} << n;
  if (k > n_points) {
    throw std::invalid_argument("K=" + std::to_string(k) + " exceeds N=" + std::to_string(n_points));
  }
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");

  std::vector<std::uint64_t> support;
  support.reserve(k);
  if (k * 4 >= n_points) {
    // Dense request: partial Fisher-Yates over all indices.
    std::vector<std::uint64_t> all(n_points);
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    for (std::uint64_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::uint64_t> pick(i, n_points - 1);
      std::swap(all[i], all[pick(rng)]);
      support.push_back(all[i]);
    }
  } else {
    std::uniform_int_distribution<std::uint64_t> pick(0, n_points - 1);
    std::unordered_set<std::uint64_t> seen;
    while (support.size() < k) {
      const std::uint64_t idx = pick(rng);
      if (seen.insert(idx).second) support.push_back(idx);
    }
  }

  SparseSpectrum spectrum(n);
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> magnitude(0.5 * rho, 1.5 * rho);
  for (std::uint64_t idx : support) {
    const double sign = coin(rng) ? -1.0 : 1.0;
    const double value = mode == AmplitudeMode::kConstellation ? rho : magnitude(rng);
    spectrum.set(BitIndex(idx, n), sign * value);
  }
  return spectrum;
}

double sigma_for_snr(double rho, double k, double n_points, double snr_linear) {
  return rho * std::sqrt(k / (n_points * snr_linear));
}

double snr_from_sigma(double rho, double k, double n_points, double sigma) {
  return rho * rho / (sigma * sigma * n_points / k);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Standard normal keyed by (key, m) via Box-Muller on two hashed uniforms.
double keyed_normal(std::uint64_t key, std::uint64_t m) {
  const std::uint64_t a = splitmix64(key ^ splitmix64(m));
  const std::uint64_t b = splitmix64(a);
  const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

NoisyAccess::NoisyAccess(SparseSpectrum spectrum, double sigma, std::uint64_t seed)
    : spectrum_(std::move(spectrum)),
      sigma_(sigma),
      key_(make_rng(seed, 0x6e6f697365ull)()),
      root_n_(std::sqrt(std::ldexp(1.0, spectrum_.n()))) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  for (const auto& [k, v] : spectrum_.entries()) {
    support_.push_back(k);
    values_.push_back(v);
  }
}

double NoisyAccess::query(const BitIndex& m) {
  if (m.width() != spectrum_.n()) throw DimensionError("sample index width mismatch");
  const std::uint64_t mv = m.value();
  touched_.push_back(mv);
  double value = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    // Flip the sign bit directly; a branch here mispredicts half the time.
    const std::uint64_t sign = static_cast<std::uint64_t>(parity(support_[i] & mv)) << 63;
    value += std::bit_cast<double>(std::bit_cast<std::uint64_t>(values_[i]) ^ sign);
  }
  value /= root_n_;
  if (sigma_ > 0.0) value += sigma_ * keyed_normal(key_, mv);
  return value;
}

std::size_t NoisyAccess::distinct_samples() const {
  if (sorted_ != touched_.size()) {
    std::sort(touched_.begin(), touched_.end());
    touched_.erase(std::unique(touched_.begin(), touched_.end()), touched_.end());
    sorted_ = touched_.size();
  }
  return touched_.size();
}

}  // namespace spright
