#include "spright/gf2.hpp"

#include <utility>

namespace spright {

namespace {

std::uint64_t width_mask(int width) {
  return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

void check_width(int width) {
  if (width < 0 || width > kMaxBits) {
    throw DimensionError("index width " + std::to_string(width) + " outside [0, " +
                         std::to_string(kMaxBits) + "]");
  }
}

}  // namespace

BitIndex::BitIndex(std::uint64_t value, int width) : value_(value), width_(width) {
  check_width(width);
  if ((value & ~width_mask(width)) != 0) {
    throw DimensionError("value " + std::to_string(value) + " does not fit in " +
                         std::to_string(width) + " bits");
  }
}

BitIndex BitIndex::unit(int position, int width) {
  if (position < 1 || position > width) throw DimensionError("unit position out of range");
  return BitIndex(std::uint64_t{1} << (position - 1), width);
}

BitIndex BitIndex::parse(std::string_view text) {
  const int width = static_cast<int>(text.size());
  check_width(width);
  std::uint64_t value = 0;
  for (int t = 0; t < width; ++t) {
    const char ch = text[static_cast<std::size_t>(t)];
    if (ch == '1') {
      value |= std::uint64_t{1} << t;
    } else if (ch != '0') {
      throw std::invalid_argument("bad bit character in '" + std::string(text) + "'");
    }
  }
  return BitIndex(value, width);
}

BitIndex BitIndex::with_flipped(int position) const {
  return *this ^ unit(position, width_);
}

std::string BitIndex::str() const {
  std::string out(static_cast<std::size_t>(width_), '0');
  for (int t = 0; t < width_; ++t) {
    if ((value_ >> t) & 1u) out[static_cast<std::size_t>(t)] = '1';
  }
  return out;
}

BitIndex operator^(const BitIndex& a, const BitIndex& b) {
  if (a.width_ != b.width_) throw DimensionError("xor of indices with different widths");
  BitIndex out;
  out.value_ = a.value_ ^ b.value_;
  out.width_ = a.width_;
  return out;
}

int inner_product(const BitIndex& i, const BitIndex& j) {
  if (i.width() != j.width()) {
    throw DimensionError("inner product of length " + std::to_string(i.width()) + " and " +
                         std::to_string(j.width()));
  }
  return parity(i.value() & j.value());
}

BitMatrix::BitMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0 || cols > 64) throw DimensionError("unsupported matrix shape");
  rows_data_.assign(static_cast<std::size_t>(rows), 0);
}

BitMatrix BitMatrix::identity(int size) {
  BitMatrix m(size, size);
  for (int i = 0; i < size; ++i) m.set(i, i, true);
  return m;
}

void BitMatrix::set(int row, int col, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << col;
  auto& word = rows_data_[static_cast<std::size_t>(row)];
  word = value ? (word | bit) : (word & ~bit);
}

void BitMatrix::set_row_word(int row, std::uint64_t word) {
  if ((word & ~width_mask(cols_)) != 0) throw DimensionError("row word wider than matrix");
  rows_data_[static_cast<std::size_t>(row)] = word;
}

std::uint64_t BitMatrix::column_word(int col) const {
  if (rows_ > 64) throw DimensionError("column word needs rows <= 64");
  std::uint64_t out = 0;
  for (int i = 0; i < rows_; ++i) {
    if (get(i, col)) out |= std::uint64_t{1} << i;
  }
  return out;
}

std::uint64_t BitMatrix::multiply(std::uint64_t x) const {
  std::uint64_t out = 0;
  for (int i = 0; i < rows_; ++i) {
    if (parity(rows_data_[static_cast<std::size_t>(i)] & x)) out |= std::uint64_t{1} << i;
  }
  return out;
}

std::uint64_t BitMatrix::transpose_multiply(std::uint64_t x) const {
  std::uint64_t out = 0;
  for (int i = 0; i < rows_; ++i) {
    if ((x >> i) & 1u) out ^= rows_data_[static_cast<std::size_t>(i)];
  }
  return out;
}

int BitMatrix::rank() const {
  std::vector<std::uint64_t> work = rows_data_;
  int rank = 0;
  for (int col = 0; col < cols_ && rank < rows_; ++col) {
    const std::uint64_t bit = std::uint64_t{1} << col;
    int pivot = -1;
    for (int r = rank; r < rows_; ++r) {
      if (work[static_cast<std::size_t>(r)] & bit) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(work[static_cast<std::size_t>(pivot)], work[static_cast<std::size_t>(rank)]);
    for (int r = 0; r < rows_; ++r) {
      if (r != rank && (work[static_cast<std::size_t>(r)] & bit)) {
        work[static_cast<std::size_t>(r)] ^= work[static_cast<std::size_t>(rank)];
      }
    }
    ++rank;
  }
  return rank;
}

BitIndex mat_transpose_vec(const BitMatrix& m, const BitIndex& k) {
  if (m.rows() != k.width()) {
    throw DimensionError("matrix has " + std::to_string(m.rows()) + " rows, index has width " +
                         std::to_string(k.width()));
  }
  return BitIndex(m.transpose_multiply(k.value()), m.cols());
}

BitIndex AffineSolution::member(std::uint64_t i) const {
  BitIndex out = particular;
  for (std::size_t t = 0; t < nullspace_basis.size(); ++t) {
    if ((i >> t) & 1u) out = out ^ nullspace_basis[t];
  }
  return out;
}

AffineSolution solve_affine(const BitMatrix& m, const BitIndex& j) {
  const int n = m.rows();
  const int b = m.cols();
  if (j.width() != b) throw DimensionError("right-hand side width does not match matrix columns");

  // Equation t reads <column t of M, k> = j[t].
  struct Equation {
    std::uint64_t coeffs;
    int rhs;
  };
  std::vector<Equation> eqs;
  eqs.reserve(static_cast<std::size_t>(b));
  for (int t = 0; t < b; ++t) eqs.push_back({m.column_word(t), j[t + 1] ? 1 : 0});

  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < n && rank < b; ++col) {
    const std::uint64_t bit = std::uint64_t{1} << col;
    int pivot = -1;
    for (int r = rank; r < b; ++r) {
      if (eqs[static_cast<std::size_t>(r)].coeffs & bit) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(eqs[static_cast<std::size_t>(pivot)], eqs[static_cast<std::size_t>(rank)]);
    for (int r = 0; r < b; ++r) {
      auto& e = eqs[static_cast<std::size_t>(r)];
      if (r != rank && (e.coeffs & bit)) {
        e.coeffs ^= eqs[static_cast<std::size_t>(rank)].coeffs;
        e.rhs ^= eqs[static_cast<std::size_t>(rank)].rhs;
      }
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (int r = rank; r < b; ++r) {
    if (eqs[static_cast<std::size_t>(r)].rhs) throw NoSolutionError("M^T k = j is inconsistent");
  }

  std::uint64_t pivot_mask = 0;
  for (int c : pivot_col) pivot_mask |= std::uint64_t{1} << c;

  std::uint64_t particular = 0;
  for (int r = 0; r < rank; ++r) {
    if (eqs[static_cast<std::size_t>(r)].rhs) particular |= std::uint64_t{1} << pivot_col[static_cast<std::size_t>(r)];
  }

  AffineSolution sol;
  sol.particular = BitIndex(particular, n);
  for (int free = 0; free < n; ++free) {
    if ((pivot_mask >> free) & 1u) continue;
    std::uint64_t v = std::uint64_t{1} << free;
    for (int r = 0; r < rank; ++r) {
      if ((eqs[static_cast<std::size_t>(r)].coeffs >> free) & 1u) {
        v |= std::uint64_t{1} << pivot_col[static_cast<std::size_t>(r)];
      }
    }
    sol.nullspace_basis.emplace_back(v, n);
  }
  return sol;
}

}  // namespace spright
