#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "spright/gf2.hpp"

namespace spright {

/// Sparse map k -> X[k] over F_2^n. Entries equal to exactly zero are never stored.
class SparseSpectrum {
 public:
  SparseSpectrum() = default;
  explicit SparseSpectrum(int n);

  int n() const { return n_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Sets X[k]; a zero value erases the entry.
  void set(const BitIndex& k, double value);
  /// Adds to X[k], erasing the entry if the sum is exactly zero.
  void add(const BitIndex& k, double value);
  void erase(const BitIndex& k) { entries_.erase(k.value()); }

  std::optional<double> get(const BitIndex& k) const;
  bool contains(const BitIndex& k) const { return entries_.count(k.value()) != 0; }

  std::set<std::uint64_t> support() const;
  const std::map<std::uint64_t, double>& entries() const { return entries_; }

  double max_abs() const;

  friend bool operator==(const SparseSpectrum&, const SparseSpectrum&) = default;

 private:
  void check(const BitIndex& k) const;

  int n_ = 0;
  std::map<std::uint64_t, double> entries_;
};

/// Text format: header "n=<n> K=<K>" then one "<index string> <value>" line per entry.
void write_spectrum(std::ostream& out, const SparseSpectrum& spectrum);
SparseSpectrum read_spectrum(std::istream& in);

}  // namespace spright
