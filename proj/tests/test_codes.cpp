#include <doctest.h>

#include <sstream>

#include "spright/codes.hpp"

using namespace spright;

TEST_CASE("regular construction has column weight 3 and row weight 6") {
  for (int n_info : {6, 9, 14, 20, 31}) {
    Rng rng = make_rng(static_cast<std::uint64_t>(n_info));
    const LdpcCode code = build_regular_ldpc(n_info, rng);
    CHECK(code.n_block == 2 * n_info);
    CHECK(code.checks() == n_info);
    for (int v = 0; v < code.n_block; ++v) {
      int weight = 0;
      for (int r = 0; r < code.checks(); ++r) weight += code.parity_check.get(r, v);
      CHECK(weight == 3);
    }
    for (int r = 0; r < code.checks(); ++r) CHECK(std::popcount(code.parity_check.row_word(r)) == 6);
  }
  Rng rng = make_rng(1);
  CHECK_THROWS_AS(build_regular_ldpc(5, rng), std::invalid_argument);
}

TEST_CASE("edge swaps remove most 4-cycles") {
  Rng rng = make_rng(8);
  const LdpcCode code = build_regular_ldpc(20, rng);
  CHECK(code.four_cycles() <= 2);
}

TEST_CASE("encoding is systematic, linear, and satisfies every check") {
  Rng rng = make_rng(2);
  const LdpcCode code = build_regular_ldpc(14, rng);
  std::uniform_int_distribution<std::uint64_t> word(0, (1u << 14) - 1);
  CHECK(encode(code, BitIndex::zero(14)).value() == 0);
  for (int t = 0; t < 100; ++t) {
    const BitIndex k(word(rng), 14), k2(word(rng), 14);
    const BitIndex c = encode(code, k);
    CHECK((c.value() & ((1u << 14) - 1)) == k.value());
    CHECK(is_codeword(code, c));
    CHECK(encode(code, k ^ k2) == (c ^ encode(code, k2)));
    CHECK(bitflip_decode(code, c, 0) == k);
  }
  CHECK_THROWS_AS(encode(code, BitIndex::zero(13)), DimensionError);
}

TEST_CASE("one flipped bit is corrected") {
  int constructions = 0, corrected = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng = make_rng(seed, 5);
    const LdpcCode code = build_regular_ldpc(14, rng);
    std::uniform_int_distribution<std::uint64_t> word(0, (1u << 14) - 1);
    std::uniform_int_distribution<int> pos(1, code.n_block);
    const BitIndex k(word(rng), 14);
    const BitIndex noisy = encode(code, k).with_flipped(pos(rng));
    ++constructions;
    corrected += bitflip_decode(code, noisy, 20) == k;
  }
  CHECK(corrected >= 0.99 * constructions);
}

namespace {

double block_error_rate(const LdpcCode& code, double crossover, int trials, Rng& rng) {
  std::bernoulli_distribution flip(crossover);
  std::uniform_int_distribution<std::uint64_t> word(0, (std::uint64_t{1} << code.n_info) - 1);
  int errors = 0;
  for (int t = 0; t < trials; ++t) {
    const BitIndex k(word(rng), code.n_info);
    std::uint64_t y = encode(code, k).value();
    for (int b = 0; b < code.n_block; ++b) {
      if (flip(rng)) y ^= std::uint64_t{1} << b;
    }
    const auto decoded = bitflip_decode(code, BitIndex(y, code.n_block));
    errors += !(decoded && *decoded == k);
  }
  return static_cast<double>(errors) / trials;
}

}  // namespace

TEST_CASE("block error rate on a binary symmetric channel") {
  Rng rng = make_rng(11);
  const LdpcCode code = build_regular_ldpc(14, rng);
  CHECK(block_error_rate(code, 0.02, 10000, rng) <= 0.10);
  const double high = block_error_rate(code, 0.08, 4000, rng);
  const double mid = block_error_rate(code, 0.04, 4000, rng);
  const double low = block_error_rate(code, 0.01, 4000, rng);
  CHECK(high >= mid);
  CHECK(mid >= low);
}

TEST_CASE("parity-check file round-trips") {
  Rng rng = make_rng(6);
  const LdpcCode code = build_regular_ldpc(10, rng);
  std::stringstream io;
  write_ldpc(io, code);
  CHECK(io.str().rfind("ldpc n_info=10 n_block=20 checks=10 edges=60\n", 0) == 0);
  const LdpcCode back = read_ldpc(io);
  CHECK(back.parity_check == code.parity_check);
  CHECK(back.generator == code.generator);

  std::stringstream bad("ldpc n_info=3\n");
  CHECK_THROWS(read_ldpc(bad));
}
