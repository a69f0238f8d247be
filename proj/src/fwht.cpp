#include "spright/fwht.hpp"

#include <bit>
#include <cmath>

namespace spright {

int log2_exact(std::size_t size) {
  if (size == 0 || !std::has_single_bit(size)) {
    throw DimensionError("length " + std::to_string(size) + " is not a power of two");
  }
  return std::countr_zero(size);
}

DenseSignal::DenseSignal(int n_bits, std::vector<double> v) : n(n_bits), values(std::move(v)) {
  if (n < 0 || n > 30) throw DimensionError("dense signals support 0 <= n <= 30");
  if (values.size() != (std::size_t{1} << n)) {
    throw DimensionError("dense signal of width " + std::to_string(n) + " needs " +
                         std::to_string(std::size_t{1} << n) + " values, got " +
                         std::to_string(values.size()));
  }
}

DenseSignal DenseSignal::zeros(int n_bits) {
  return DenseSignal(n_bits, std::vector<double>(std::size_t{1} << n_bits, 0.0));
}

void fwht_unnormalized(std::span<double> data) {
  const std::size_t size = data.size();
  log2_exact(size);
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t block = 0; block < size; block += half << 1) {
      for (std::size_t i = block; i < block + half; ++i) {
        const double a = data[i];
        const double b = data[i + half];
        data[i] = a + b;
        data[i + half] = a - b;
      }
    }
  }
}

DenseSignal fwht(DenseSignal x) {
  const int n = log2_exact(x.values.size());
  fwht_unnormalized(x.values);
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.values.size()));
  for (double& v : x.values) v *= scale;
  x.n = n;
  return x;
}

DenseSignal naive_wht(const DenseSignal& x) {
  const std::size_t size = x.values.size();
  const int n = log2_exact(size);
  const double scale = 1.0 / std::sqrt(static_cast<double>(size));
  DenseSignal out = DenseSignal::zeros(n);
  for (std::size_t k = 0; k < size; ++k) {
    double acc = 0.0;
    for (std::size_t m = 0; m < size; ++m) {
      acc += parity(k & m) ? -x.values[m] : x.values[m];
    }
    out.values[k] = scale * acc;
  }
  return out;
}

double synthesize_at(const SparseSpectrum& spectrum, const BitIndex& m) {
  if (m.width() != spectrum.n()) throw DimensionError("sample index width mismatch");
  double acc = 0.0;
  const std::uint64_t mv = m.value();
  for (const auto& [k, v] : spectrum.entries()) acc += parity(k & mv) ? -v : v;
  return acc / std::sqrt(std::ldexp(1.0, spectrum.n()));
}

DenseSignal densify(const SparseSpectrum& spectrum) {
  DenseSignal out = DenseSignal::zeros(spectrum.n());
  for (const auto& [k, v] : spectrum.entries()) out.values[k] = v;
  return out;
}

}  // namespace spright
