#include <doctest.h>

#include <cmath>

#include "spright/bin_detect.hpp"

using namespace spright;

namespace {

SparseSpectrum single(int n, std::uint64_t k, double value) {
  SparseSpectrum s(n);
  s.set(BitIndex(k, n), value);
  return s;
}

struct Setup {
  SubsamplingPlan plan;
  OffsetPlan offsets;
  BinObservations obs;
};

Setup observe_single(int n, int b, std::uint64_t k, double value, double sigma, OffsetVariant variant,
                     std::uint64_t seed, OffsetParams params = {}) {
  Rng rng = make_rng(seed);
  Setup s;
  s.plan = build_random_plan(n, b, 3, rng);
  if (params.p1 == 0) params = default_offset_params(variant, n);
  std::optional<LdpcCode> code;
  if (variant == OffsetVariant::kSo) code = build_regular_ldpc(n, rng);
  s.offsets = build_offsets(variant, s.plan, params, code, rng);
  NoisyAccess access(single(n, k, value), sigma, seed + 1);
  s.obs = observe(access, s.plan, s.offsets);
  return s;
}

}  // namespace

TEST_CASE("sign convention and crossover bound") {
  CHECK(sgn(-0.1) == 1);
  CHECK(sgn(0.0) == 0);
  CHECK(sgn(3.0) == 0);
  CHECK(crossover_bound(1.0, 10.0) == doctest::Approx(6.738e-3).epsilon(1e-3));
  CHECK(crossover_bound(1.0, 1e6) == 0.0);
  CHECK(default_gamma(10.0) == 1.0);
  CHECK(default_gamma(2.0) == 0.5);
}

TEST_CASE("signature is multiplicative over xor") {
  Rng rng = make_rng(1);
  std::uniform_int_distribution<std::uint64_t> word(0, 1023);
  std::vector<std::uint64_t> rows(20);
  for (auto& r : rows) r = word(rng);
  for (int t = 0; t < 50; ++t) {
    const std::uint64_t a = word(rng), b = word(rng);
    const auto sa = signature(rows, a), sb = signature(rows, b), sab = signature(rows, a ^ b);
    for (std::size_t p = 0; p < rows.size(); ++p) CHECK(sab[p] == sa[p] * sb[p]);
  }
}

TEST_CASE("noiseless detector on the worked example") {
  // Group 1 keeps positions 3..4 of n = 4.
  const auto plan = plan_from_segments(4, 2, 0, {{1}, {0}}, Regime::kWindow);
  DetectorConfig cfg;
  const std::vector<double> single_ton{2, 2, -2, 2, 2};
  const Detection d = detect_noiseless(single_ton, BitIndex::parse("00").value(), 0, plan, cfg);
  CHECK(d.kind == BinKind::kSingleTon);
  CHECK(d.index.str() == "0100");
  CHECK(d.value == 2.0);

  const std::vector<double> zeros(5, 0.0);
  CHECK(detect_noiseless(zeros, 0, 0, plan, cfg).kind == BinKind::kZeroTon);

  // U1[10] = 4 s_0110 + 1 s_1010 under offsets [0, e1, e2, e3, e4].
  std::vector<double> two(5);
  const std::uint64_t rows[] = {0, 1, 2, 4, 8};
  for (int p = 0; p < 5; ++p) {
    two[p] = 4.0 * (parity(rows[p] & BitIndex::parse("0110").value()) ? -1 : 1) +
             1.0 * (parity(rows[p] & BitIndex::parse("1010").value()) ? -1 : 1);
  }
  CHECK(detect_noiseless(two, BitIndex::parse("10").value(), 0, plan, cfg).kind == BinKind::kMultiTon);

  // Right ratio test but wrong bin: hash check rejects.
  CHECK(detect_noiseless(single_ton, BitIndex::parse("01").value(), 0, plan, cfg).kind == BinKind::kMultiTon);
}

TEST_CASE("noiseless completeness on every index") {
  for (std::uint64_t k = 0; k < 256; k += 3) {
    const auto s = observe_single(8, 3, k, -1.0, 0.0, OffsetVariant::kNoiseless, 2);
    for (int c = 0; c < 3; ++c) {
      const std::uint64_t j = s.plan.hash(c, k);
      const Detection d = detect_noiseless(s.obs.column(c, j), j, c, s.plan, {});
      REQUIRE(d.kind == BinKind::kSingleTon);
      CHECK(d.index.value() == k);
      CHECK(d.value == doctest::Approx(-1.0));
      const std::uint64_t other = (j + 1) % s.plan.bins();
      CHECK(detect_noiseless(s.obs.column(c, other), other, c, s.plan, {}).kind == BinKind::kZeroTon);
    }
  }
}

TEST_CASE("noisy detectors are exact at zero noise") {
  for (auto variant : {OffsetVariant::kNearLinear, OffsetVariant::kNso, OffsetVariant::kSo}) {
    for (std::uint64_t k : {0ull, 5ull, 700ull, 1023ull}) {
      for (double value : {1.0, -1.0}) {
        const auto s = observe_single(10, 4, k, value, 0.0, variant, 3);
        DetectorConfig cfg;
        cfg.nu2 = 1e-6;
        const std::uint64_t j = s.plan.hash(1, k);
        const Detection d = detect(s.obs.column(1, j), j, 1, s.plan, s.offsets, cfg);
        REQUIRE(d.kind == BinKind::kSingleTon);
        CHECK(d.index.value() == k);
        CHECK(d.value == value);
        const std::uint64_t other = j ^ 1;
        CHECK(detect(s.obs.column(1, other), other, 1, s.plan, s.offsets, cfg).kind == BinKind::kZeroTon);
      }
    }
  }
}

TEST_CASE("near-linear detector finds a single-ton at 10 dB") {
  const int n = 10, b = 6, trials = 1000;
  const double snr = db_to_linear(10.0);
  // One coefficient with rho = 1 among K = 1 of N = 1024.
  const double sigma = sigma_for_snr(1.0, 1.0, 1024.0, snr);
  int correct = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(100, static_cast<std::uint64_t>(t));
    std::uniform_int_distribution<std::uint64_t> word(0, 1023);
    const std::uint64_t k = word(rng);
    const double value = (t % 2) ? 1.0 : -1.0;
    const auto s = observe_single(n, b, k, value, sigma, OffsetVariant::kNearLinear, 1000 + t, {3 * n, 0, 0});
    const DetectorConfig cfg = make_detector_config(n, b, 1.0, sigma, snr);
    const std::uint64_t j = s.plan.hash(0, k);
    const Detection d = detect_near_linear(s.obs.column(0, j), j, 0, s.plan, s.offsets, cfg);
    correct += d.kind == BinKind::kSingleTon && d.index.value() == k && d.value == value;
  }
  // 99% target tested with a three-sigma binomial allowance.
  CHECK(correct >= 0.99 * trials - 3.0 * std::sqrt(trials * 0.99 * 0.01));
}

TEST_CASE("nso majority vote") {
  SUBCASE("votes [0,0,1,0,1] give bit 0") {
    // n = 1, five base rows at 0 and five modulated rows at e_1.
    const auto plan = plan_from_segments(1, 1, 0, {{0}}, Regime::kWindow);
    OffsetPlan offsets;
    offsets.variant = OffsetVariant::kNso;
    offsets.n = 1;
    offsets.params = {5, 1, 0};
    offsets.rows = {{0, 0, 0, 0, 0, 1, 1, 1, 1, 1}};
    DetectorConfig cfg;
    cfg.nu2 = 0.01;
    const std::vector<double> u{1, 1, 1, 1, 1, 1, 1, -1, 1, -1};
    const Detection d = detect_nso(u, 0, 0, plan, offsets, cfg);
    CHECK(d.kind == BinKind::kSingleTon);
    CHECK(d.index.value() == 0);
    // Votes [1,1,0,1,0] give bit 1, which does not hash to bin 0.
    const std::vector<double> flipped{1, 1, 1, 1, 1, -1, -1, 1, -1, 1};
    CHECK(detect_nso(flipped, 0, 0, plan, offsets, cfg).kind == BinKind::kMultiTon);
  }
  SUBCASE("index recovery at 10 dB, n = 14, K = 20") {
    const int n = 14, trials = 1000;
    const double snr = db_to_linear(10.0);
    const double sigma = sigma_for_snr(1.0, 20.0, 16384.0, snr);
    int exact = 0;
    for (int t = 0; t < trials; ++t) {
      Rng rng = make_rng(200, static_cast<std::uint64_t>(t));
      std::uniform_int_distribution<std::uint64_t> word(0, 16383);
      const std::uint64_t k = word(rng);
      const auto s = observe_single(n, 5, k, 1.0, sigma, OffsetVariant::kNso, 5000 + t);
      const DetectorConfig cfg = make_detector_config(n, 5, 1.0, sigma, snr);
      const std::uint64_t j = s.plan.hash(2, k);
      const Detection d = detect_nso(s.obs.column(2, j), j, 2, s.plan, s.offsets, cfg);
      exact += d.kind == BinKind::kSingleTon && d.index.value() == k;
    }
    CHECK(exact >= 0.99 * trials);
  }
}

TEST_CASE("so detector") {
  SUBCASE("negative coefficient: the zero rows remove the sign") {
    const auto s = observe_single(12, 4, 1234, -1.0, 0.0, OffsetVariant::kSo, 9);
    const std::uint64_t j = s.plan.hash(0, 1234);
    const auto col = s.obs.column(0, j);
    for (int p = 12; p < 24; ++p) CHECK(sgn(col[p]) == 1);
    const Detection d = detect_so(col, j, 0, s.plan, s.offsets, {.nu2 = 1e-6});
    CHECK(d.kind == BinKind::kSingleTon);
    CHECK(d.index.value() == 1234);
  }
  SUBCASE("index recovery at 10 dB, n = 14") {
    const int n = 14, trials = 1000;
    const double snr = db_to_linear(10.0);
    const double sigma = sigma_for_snr(1.0, 20.0, 16384.0, snr);
    int exact = 0;
    for (int t = 0; t < trials; ++t) {
      Rng rng = make_rng(300, static_cast<std::uint64_t>(t));
      std::uniform_int_distribution<std::uint64_t> word(0, 16383);
      const std::uint64_t k = word(rng);
      const auto s = observe_single(n, 5, k, 1.0, sigma, OffsetVariant::kSo, 9000 + t);
      DetectorConfig cfg = make_detector_config(n, 5, 1.0, sigma, snr);
      cfg.bitflip_rounds = 20;
      const std::uint64_t j = s.plan.hash(0, k);
      const Detection d = detect_so(s.obs.column(0, j), j, 0, s.plan, s.offsets, cfg);
      exact += d.kind == BinKind::kSingleTon && d.index.value() == k;
    }
    CHECK(exact >= 0.95 * trials);
  }
}

TEST_CASE("nso xor-ed sign stream flips at 2 Pe (1 - Pe)") {
  // Single-ton bin with eta = 1 at 0 dB: per-entry flip probability Pe = Q(sqrt(snr)).
  const int n = 10, b = 4;
  const double snr = db_to_linear(0.0);
  const double n_points = 1024.0, k_count = 16.0;  // eta = B / K = 1
  const double sigma = sigma_for_snr(1.0, k_count, n_points, snr);
  const double pe = 0.5 * std::erfc(std::sqrt(snr) / std::sqrt(2.0));
  const double theta = 2 * pe * (1 - pe);
  long flips = 0, total = 0;
  for (int t = 0; t < 300; ++t) {
    const auto s = observe_single(n, b, 321, 1.0, sigma, OffsetVariant::kNso, 40000 + t);
    const std::uint64_t j = s.plan.hash(0, 321);
    const auto col = s.obs.column(0, j);
    const int p1 = s.offsets.params.p1;
    for (int p = 0; p < p1; ++p) {
      for (int q = 0; q < n; ++q) {
        const int observed = sgn(col[p1 + p * n + q]) ^ sgn(col[p]);
        const int truth = static_cast<int>((321u >> q) & 1u);
        flips += observed != truth;
        ++total;
      }
    }
  }
  const double rate = static_cast<double>(flips) / total;
  // Noise on reference and modulated rows is not independent across q, so allow a wide band.
  CHECK(std::abs(rate - theta) < 6.0 * std::sqrt(theta * (1 - theta) / total) + 0.01);
}
