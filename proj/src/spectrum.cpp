#include "spright/spectrum.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace spright {

SparseSpectrum::SparseSpectrum(int n) : n_(n) {
  if (n < 0 || n > kMaxBits) throw DimensionError("spectrum width out of range");
}

void SparseSpectrum::check(const BitIndex& k) const {
  if (k.width() != n_) {
    throw DimensionError("index width " + std::to_string(k.width()) + " in spectrum of width " +
                         std::to_string(n_));
  }
}

void SparseSpectrum::set(const BitIndex& k, double value) {
  check(k);
  if (value == 0.0) {
    entries_.erase(k.value());
  } else {
    entries_[k.value()] = value;
  }
}

void SparseSpectrum::add(const BitIndex& k, double value) {
  check(k);
  auto [it, inserted] = entries_.try_emplace(k.value(), value);
  if (!inserted) it->second += value;
  if (it->second == 0.0) entries_.erase(it);
}

std::optional<double> SparseSpectrum::get(const BitIndex& k) const {
  check(k);
  auto it = entries_.find(k.value());
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::set<std::uint64_t> SparseSpectrum::support() const {
  std::set<std::uint64_t> out;
  for (const auto& [k, v] : entries_) out.insert(k);
  return out;
}

double SparseSpectrum::max_abs() const {
  double m = 0.0;
  for (const auto& [k, v] : entries_) m = std::max(m, std::abs(v));
  return m;
}

void write_spectrum(std::ostream& out, const SparseSpectrum& spectrum) {
  out << "n=" << spectrum.n() << " K=" << spectrum.size() << '\n';
  char buf[64];
  for (const auto& [k, v] : spectrum.entries()) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << BitIndex(k, spectrum.n()).str() << ' ' << buf << '\n';
  }
}

SparseSpectrum read_spectrum(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("spectrum file: missing header");
  int n = -1;
  std::size_t k_count = 0;
  if (std::sscanf(line.c_str(), "n=%d K=%zu", &n, &k_count) != 2) {
    throw std::runtime_error("spectrum file: bad header '" + line + "'");
  }
  SparseSpectrum spectrum(n);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string bits;
    double value = 0.0;
    if (!(row >> bits >> value)) throw std::runtime_error("spectrum file: bad entry '" + line + "'");
    const BitIndex k = BitIndex::parse(bits);
    if (k.width() != n) throw std::runtime_error("spectrum file: index width mismatch");
    spectrum.set(k, value);
  }
  if (spectrum.size() != k_count) {
    throw std::runtime_error("spectrum file: header says K=" + std::to_string(k_count) + " but " +
                             std::to_string(spectrum.size()) + " entries were read");
  }
  return spectrum;
}

}  // namespace spright
