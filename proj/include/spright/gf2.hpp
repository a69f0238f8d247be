#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spright {

/// Largest supported index width. Indices are packed into a single 64-bit word.
inline constexpr int kMaxBits = 63;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An n-tuple over GF(2). Position t (1-based) lives in bit t-1 of the word,
/// so position 1 is the least significant bit and the word equals the integer
/// the tuple represents.
class BitIndex {
 public:
  BitIndex() = default;
  BitIndex(std::uint64_t value, int width);

  static BitIndex zero(int width) { return BitIndex(0, width); }
  static BitIndex unit(int position, int width);

  /// Parses a display string: the leftmost character is position 1.
  static BitIndex parse(std::string_view text);

  std::uint64_t value() const { return value_; }
  int width() const { return width_; }

  /// 1-based bit access.
  bool operator[](int position) const { return (value_ >> (position - 1)) & 1u; }
  BitIndex with_flipped(int position) const;

  int weight() const { return std::popcount(value_); }

  /// Display string with position 1 leftmost ("0100" has only position 2 set).
  std::string str() const;

  friend BitIndex operator^(const BitIndex& a, const BitIndex& b);
  friend bool operator==(const BitIndex& a, const BitIndex& b) = default;

 private:
  std::uint64_t value_ = 0;
  int width_ = 0;
};

/// <i, j> over GF(2) on raw words.
inline int parity(std::uint64_t word) { return std::popcount(word) & 1; }

int inner_product(const BitIndex& i, const BitIndex& j);

/// Dense GF(2) matrix with at most 64 columns; each row is one packed word
/// whose bit t-1 holds column t.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(int rows, int cols);

  static BitMatrix identity(int size);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool get(int row, int col) const { return (rows_data_[row] >> col) & 1u; }
  void set(int row, int col, bool value);

  std::uint64_t row_word(int row) const { return rows_data_[row]; }
  void set_row_word(int row, std::uint64_t word);

  /// Column t as a packed word of length rows() (requires rows() <= 64).
  std::uint64_t column_word(int col) const;

  /// A * x, with x of length cols(); returns a word of length rows().
  std::uint64_t multiply(std::uint64_t x) const;
  /// A^T * x, with x of length rows(); returns a word of length cols().
  std::uint64_t transpose_multiply(std::uint64_t x) const;

  int rank() const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint64_t> rows_data_;
};

/// Returns j with j[t] = <column t of M, k>.
BitIndex mat_transpose_vec(const BitMatrix& m, const BitIndex& k);

struct AffineSolution {
  BitIndex particular;
  std::vector<BitIndex> nullspace_basis;

  /// Number of members of the solution coset (2^basis size).
  std::uint64_t size() const { return std::uint64_t{1} << nullspace_basis.size(); }
  /// The i-th member, combining basis vectors selected by the bits of i.
  BitIndex member(std::uint64_t i) const;
};

/// Solves M^T k = j for k. Throws NoSolutionError if the system is inconsistent.
AffineSolution solve_affine(const BitMatrix& m, const BitIndex& j);

}  // namespace spright
