#pragma once

#include <span>
#include <vector>

#include "spright/gf2.hpp"
#include "spright/spectrum.hpp"

namespace spright {

/// 2^n real samples indexed by the integer value of a BitIndex.
struct DenseSignal {
  int n = 0;
  std::vector<double> values;

  DenseSignal() = default;
  DenseSignal(int n_bits, std::vector<double> v);
  static DenseSignal zeros(int n_bits);
};

/// Unnormalized in-place butterflies: data[k] <- sum_m (-1)^<k,m> data[m].
/// Length must be a power of two.
void fwht_unnormalized(std::span<double> data);

/// Orthonormal transform X[k] = N^{-1/2} sum_m (-1)^<k,m> x[m]. Self-inverse.
DenseSignal fwht(DenseSignal x);

/// Direct O(N^2) double sum of the same transform; test oracle.
DenseSignal naive_wht(const DenseSignal& x);

/// x[m] = N^{-1/2} sum_{k in support} (-1)^<m,k> X[k], without materializing x.
double synthesize_at(const SparseSpectrum& spectrum, const BitIndex& m);

/// Places the spectrum into a dense length-2^n vector.
DenseSignal densify(const SparseSpectrum& spectrum);

/// Floor(log2(size)) when size is a power of two; throws DimensionError otherwise.
int log2_exact(std::size_t size);

}  // namespace spright
