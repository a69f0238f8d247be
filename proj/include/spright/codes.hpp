#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "spright/gf2.hpp"
#include "spright/signal_model.hpp"

namespace spright {

/// Rate-1/2 (3,6)-regular LDPC code with a systematic generator: the first
/// n_info codeword bits equal the information word.
struct LdpcCode {
  int n_info = 0;
  int n_block = 0;
  BitMatrix parity_check;  // checks x n_block
  BitMatrix generator;     // n_block x n_info
  std::vector<std::vector<int>> var_checks;  // checks touching each codeword bit

  int checks() const { return parity_check.rows(); }
  /// Number of length-4 cycles in the Tanner graph.
  int four_cycles() const;
};

inline constexpr int kDefaultBitflipRounds = 30;

/// Samples a (3,6)-regular Tanner graph (configuration model without parallel
/// edges, 4-cycles removed by edge swaps where possible) and derives a
/// systematic generator. Requires 6 <= n_info <= 31.
LdpcCode build_regular_ldpc(int n_info, Rng& rng);

/// Wraps an existing parity-check matrix, deriving the systematic generator
/// with information bits on columns [0, n_info).
LdpcCode make_ldpc_code(BitMatrix parity_check, int n_info);

BitIndex encode(const LdpcCode& code, const BitIndex& info);

/// True when every parity check is satisfied.
bool is_codeword(const LdpcCode& code, const BitIndex& word);

/// Gallager bit flipping. Each round flips every bit that participates in the
/// largest number of unsatisfied checks. Returns the information prefix on
/// success, nullopt when max_rounds pass without satisfying all checks.
std::optional<BitIndex> bitflip_decode(const LdpcCode& code, const BitIndex& received,
                                       int max_rounds = kDefaultBitflipRounds);

/// Header "ldpc n_info=<a> n_block=<b> checks=<c> edges=<e>" then one "row col" line per edge.
void write_ldpc(std::ostream& out, const LdpcCode& code);
LdpcCode read_ldpc(std::istream& in);

}  // namespace spright
