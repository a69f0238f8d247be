#include <doctest.h>

#include <random>
#include <set>

#include "spright/gf2.hpp"

using namespace spright;

namespace {

BitMatrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  BitMatrix m(rows, cols);
  std::bernoulli_distribution coin(0.5);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m.set(r, c, coin(rng));
  }
  return m;
}

// Bit-by-bit M^T k with no word tricks.
std::uint64_t naive_transpose_vec(const BitMatrix& m, std::uint64_t k) {
  std::uint64_t j = 0;
  for (int t = 0; t < m.cols(); ++t) {
    int acc = 0;
    for (int r = 0; r < m.rows(); ++r) acc ^= (m.get(r, t) ? 1 : 0) & static_cast<int>((k >> r) & 1u);
    if (acc) j |= std::uint64_t{1} << t;
  }
  return j;
}

}  // namespace

TEST_CASE("bit index display puts position 1 leftmost") {
  const BitIndex k = BitIndex::parse("0100");
  CHECK(k.width() == 4);
  CHECK(k[2]);
  CHECK_FALSE(k[1]);
  CHECK(k.value() == 2);
  CHECK(k.str() == "0100");
  CHECK(BitIndex::unit(3, 5).str() == "00100");
  CHECK(k.with_flipped(1).str() == "1100");
  CHECK_THROWS_AS(BitIndex(16, 4), DimensionError);
  CHECK_THROWS_AS(BitIndex::parse("01x"), std::invalid_argument);
}

TEST_CASE("bit index round-trips every integer") {
  for (std::uint64_t v = 0; v < 64; ++v) {
    const BitIndex k(v, 6);
    CHECK(BitIndex::parse(k.str()) == k);
  }
}

TEST_CASE("inner product examples") {
  CHECK(inner_product(BitIndex::parse("1010"), BitIndex::parse("0110")) == 1);
  CHECK(inner_product(BitIndex::parse("1101"), BitIndex::zero(4)) == 0);
  CHECK(inner_product(BitIndex::parse("1111"), BitIndex::parse("1111")) == 0);
  CHECK_THROWS_AS(inner_product(BitIndex::zero(3), BitIndex::zero(4)), DimensionError);
}

TEST_CASE("inner product is symmetric and bilinear") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> word(0, 255);
  for (int trial = 0; trial < 500; ++trial) {
    const BitIndex a(word(rng), 8), b(word(rng), 8), c(word(rng), 8);
    CHECK(inner_product(a, b) == inner_product(b, a));
    CHECK(inner_product(a ^ b, c) == (inner_product(a, c) ^ inner_product(b, c)));
  }
}

TEST_CASE("hash of the worked example groups 0000, 0100, 1000, 1100") {
  BitMatrix m1(4, 2);
  m1.set(2, 0, true);
  m1.set(3, 1, true);
  std::set<std::string> same_bin;
  const BitIndex target = mat_transpose_vec(m1, BitIndex::parse("0100"));
  for (std::uint64_t v = 0; v < 16; ++v) {
    if (mat_transpose_vec(m1, BitIndex(v, 4)) == target) same_bin.insert(BitIndex(v, 4).str());
  }
  CHECK(same_bin == std::set<std::string>{"0000", "0100", "1000", "1100"});
  CHECK(target.str() == "00");
}

TEST_CASE("transpose product matches a naive loop and is linear") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const BitMatrix m = random_matrix(6, 3, rng);
    CHECK(mat_transpose_vec(m, BitIndex::zero(6)).value() == 0);
    for (std::uint64_t k = 0; k < 64; ++k) {
      CHECK(mat_transpose_vec(m, BitIndex(k, 6)).value() == naive_transpose_vec(m, k));
      const std::uint64_t k2 = (k * 37 + 5) & 63;
      CHECK(m.transpose_multiply(k ^ k2) == (m.transpose_multiply(k) ^ m.transpose_multiply(k2)));
    }
  }
  CHECK_THROWS_AS(mat_transpose_vec(BitMatrix(6, 3), BitIndex::zero(5)), DimensionError);
}

TEST_CASE("rank of identity and of duplicated rows") {
  CHECK(BitMatrix::identity(7).rank() == 7);
  BitMatrix m(3, 4);
  m.set_row_word(0, 0b1011);
  m.set_row_word(1, 0b1011);
  m.set_row_word(2, 0b0110);
  CHECK(m.rank() == 2);
}

TEST_CASE("solve_affine on a window matrix frees the frozen positions") {
  // Window over positions 3..4 of n = 6.
  BitMatrix m(6, 2);
  m.set(2, 0, true);
  m.set(3, 1, true);
  const auto sol = solve_affine(m, BitIndex::parse("10"));
  CHECK(sol.particular.str() == "001000");
  CHECK(sol.nullspace_basis.size() == 4);
  std::set<std::uint64_t> basis;
  for (const auto& v : sol.nullspace_basis) basis.insert(v.value());
  CHECK(basis == std::set<std::uint64_t>{1, 2, 16, 32});
}

TEST_CASE("solve_affine on a full-rank square matrix is unique") {
  const auto sol = solve_affine(BitMatrix::identity(5), BitIndex::parse("10110"));
  CHECK(sol.particular.str() == "10110");
  CHECK(sol.nullspace_basis.empty());
}

TEST_CASE("solve_affine coset matches an exhaustive scan") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const BitMatrix m = random_matrix(8, 3, rng);
    for (std::uint64_t j = 0; j < 8; ++j) {
      std::set<std::uint64_t> scan;
      for (std::uint64_t k = 0; k < 256; ++k) {
        if (m.transpose_multiply(k) == j) scan.insert(k);
      }
      if (scan.empty()) {
        CHECK_THROWS_AS(solve_affine(m, BitIndex(j, 3)), NoSolutionError);
        continue;
      }
      const auto sol = solve_affine(m, BitIndex(j, 3));
      CHECK(sol.nullspace_basis.size() == static_cast<std::size_t>(8 - m.rank()));
      std::set<std::uint64_t> coset;
      for (std::uint64_t i = 0; i < sol.size(); ++i) coset.insert(sol.member(i).value());
      CHECK(coset == scan);
    }
  }
}
