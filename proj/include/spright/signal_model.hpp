#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spright/gf2.hpp"
#include "spright/spectrum.hpp"

namespace spright {

using Rng = std::mt19937_64;

/// Derives an independent stream for (seed, stream index) pairs.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

enum class AmplitudeMode {
  kConstellation,  // values in {+rho, -rho}
  kContinuous,     // values uniform in +-[rho/2, 3rho/2]
};

/// K distinct support indices drawn uniformly without replacement; each value
/// carries an independent fair sign.
SparseSpectrum draw_spectrum(int n, std::uint64_t k, double rho, Rng& rng,
                             AmplitudeMode mode = AmplitudeMode::kConstellation);

/// sigma such that rho^2 / (sigma^2 N / K) equals snr_linear.
double sigma_for_snr(double rho, double k, double n_points, double snr_linear);
double snr_from_sigma(double rho, double k, double n_points, double sigma);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Anything the observation generator can query for time-domain samples.
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual int n() const = 0;
  virtual double sample(const BitIndex& m) = 0;
  /// Number of distinct positions touched so far.
  virtual std::size_t distinct_samples() const = 0;
};

/// Noisy query access u[m] = x[m] + w[m]. The noise realization is a
/// function of (seed, m), so repeated queries of the same m return the same
/// value without a cache. Not thread-safe (touched positions are logged).
class NoisyAccess final : public SampleSource {
 public:
  NoisyAccess(SparseSpectrum spectrum, double sigma, std::uint64_t seed);

  int n() const override { return spectrum_.n(); }
  double sample(const BitIndex& m) override { return query(m); }
  std::size_t distinct_samples() const override;

  double query(const BitIndex& m);

  const SparseSpectrum& spectrum() const { return spectrum_; }
  double sigma() const { return sigma_; }

 private:
  SparseSpectrum spectrum_;
  double sigma_;
  std::uint64_t key_;
  double root_n_;
  std::vector<std::uint64_t> support_;
  std::vector<double> values_;
  mutable std::vector<std::uint64_t> touched_;
  mutable std::size_t sorted_ = 0;
};

}  // namespace spright
