#include <doctest.h>

#include <cmath>
#include <random>

#include "spright/fwht.hpp"

using namespace spright;

namespace {

DenseSignal random_signal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  DenseSignal x = DenseSignal::zeros(n);
  for (double& v : x.values) v = gauss(rng);
  return x;
}

double max_abs_diff(const DenseSignal& a, const DenseSignal& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

SparseSpectrum worked_example() {
  SparseSpectrum s(4);
  s.set(BitIndex::parse("0100"), 2);
  s.set(BitIndex::parse("0110"), 4);
  s.set(BitIndex::parse("1010"), 1);
  s.set(BitIndex::parse("1111"), 1);
  return s;
}

}  // namespace

TEST_CASE("small transforms") {
  const auto a = fwht(DenseSignal(1, {1, 1}));
  CHECK(a.values[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(a.values[1] == doctest::Approx(0.0));

  const auto b = fwht(DenseSignal(2, {1, 2, 3, 4}));
  CHECK(b.values[0] == doctest::Approx(5));
  CHECK(b.values[1] == doctest::Approx(-1));
  CHECK(b.values[2] == doctest::Approx(-2));
  CHECK(b.values[3] == doctest::Approx(0).epsilon(1e-12));

  DenseSignal impulse = DenseSignal::zeros(5);
  impulse.values[0] = 1.0;
  for (double v : fwht(impulse).values) CHECK(v == doctest::Approx(1.0 / std::sqrt(32.0)));
  for (double v : naive_wht(impulse).values) CHECK(v == doctest::Approx(1.0 / std::sqrt(32.0)));
  for (double v : naive_wht(DenseSignal::zeros(3)).values) CHECK(v == 0.0);
}

TEST_CASE("bad lengths are rejected") {
  CHECK_THROWS_AS(DenseSignal(2, {1, 2, 3}), DimensionError);
  std::vector<double> odd(6);
  CHECK_THROWS_AS(fwht_unnormalized(odd), DimensionError);
  CHECK_THROWS_AS(log2_exact(12), DimensionError);
  CHECK(log2_exact(1024) == 10);
}

TEST_CASE("fast transform agrees with the double sum, and is an involution with Parseval") {
  std::mt19937_64 rng(1);
  for (int n = 0; n <= 10; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const DenseSignal x = random_signal(n, rng);
      const DenseSignal big = fwht(x);
      CHECK(max_abs_diff(big, naive_wht(x)) < 1e-10);
      CHECK(max_abs_diff(fwht(big), x) < 1e-10);
      double ex = 0.0, eX = 0.0;
      for (double v : x.values) ex += v * v;
      for (double v : big.values) eX += v * v;
      CHECK(std::abs(ex - eX) < 1e-10 * std::max(1.0, ex));
    }
  }
}

TEST_CASE("transform is linear") {
  std::mt19937_64 rng(2);
  const DenseSignal x = random_signal(6, rng), y = random_signal(6, rng);
  DenseSignal z = DenseSignal::zeros(6);
  for (std::size_t i = 0; i < z.values.size(); ++i) z.values[i] = 2.5 * x.values[i] - 0.5 * y.values[i];
  const auto fx = fwht(x), fy = fwht(y), fz = fwht(z);
  for (std::size_t i = 0; i < z.values.size(); ++i) {
    CHECK(fz.values[i] == doctest::Approx(2.5 * fx.values[i] - 0.5 * fy.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("point synthesis") {
  SparseSpectrum empty(5);
  for (std::uint64_t m = 0; m < 32; ++m) CHECK(synthesize_at(empty, BitIndex(m, 5)) == 0.0);

  SparseSpectrum dc(6);
  dc.set(BitIndex::zero(6), 8.0);
  for (std::uint64_t m = 0; m < 64; ++m) CHECK(synthesize_at(dc, BitIndex(m, 6)) == doctest::Approx(1.0));

  const SparseSpectrum ex = worked_example();
  const DenseSignal x = fwht(densify(ex));
  for (std::uint64_t m = 0; m < 16; ++m) {
    CHECK(synthesize_at(ex, BitIndex(m, 4)) == doctest::Approx(x.values[m]).epsilon(1e-12));
  }
}

TEST_CASE("point synthesis equals the dense inverse for random spectra") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> idx(0, 4095);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 5; ++trial) {
    SparseSpectrum s(12);
    for (int i = 0; i < 20; ++i) s.set(BitIndex(idx(rng), 12), gauss(rng));
    const DenseSignal x = fwht(densify(s));
    for (std::uint64_t m = 0; m < 4096; m += 7) {
      CHECK(std::abs(synthesize_at(s, BitIndex(m, 12)) - x.values[m]) < 1e-10);
    }
  }
}
