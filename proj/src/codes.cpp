#include "spright/codes.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace spright {

namespace {

constexpr int kVarDegree = 3;
constexpr int kCheckDegree = 6;

std::uint64_t low_mask(int width) {
  return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

// Edge list as (check, var) pairs.
using Edges = std::vector<std::pair<int, int>>;

int count_four_cycles(const std::vector<std::uint64_t>& rows) {
  int cycles = 0;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      const int shared = std::popcount(rows[a] & rows[b]);
      cycles += shared * (shared - 1) / 2;
    }
  }
  return cycles;
}

std::vector<std::uint64_t> rows_from_edges(const Edges& edges, int checks) {
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(checks), 0);
  for (auto [c, v] : edges) rows[static_cast<std::size_t>(c)] ^= std::uint64_t{1} << v;
  return rows;
}

bool has_parallel_edges(const Edges& edges) {
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (!seen.insert(e).second) return true;
  }
  return false;
}

// Configuration model: pair variable sockets with check sockets through a
// random permutation, then repair parallel edges by socket swaps.
std::optional<Edges> sample_configuration(int vars, Rng& rng) {
  std::vector<int> var_sockets;
  var_sockets.reserve(static_cast<std::size_t>(vars * kVarDegree));
  for (int v = 0; v < vars; ++v) {
    for (int d = 0; d < kVarDegree; ++d) var_sockets.push_back(v);
  }
  std::shuffle(var_sockets.begin(), var_sockets.end(), rng);

  Edges edges;
  edges.reserve(var_sockets.size());
  for (std::size_t s = 0; s < var_sockets.size(); ++s) {
    edges.emplace_back(static_cast<int>(s) / kCheckDegree, var_sockets[s]);
  }

  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  for (int attempt = 0; attempt < 10000 && has_parallel_edges(edges); ++attempt) {
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!seen.insert(edges[i]).second) {
        std::swap(edges[i].second, edges[pick(rng)].second);
        break;
      }
    }
  }
  if (has_parallel_edges(edges)) return std::nullopt;
  return edges;
}

// Edge swaps (c1,v1),(c2,v2) -> (c1,v2),(c2,v1) that strictly lower the
// 4-cycle count and keep the graph simple.
void remove_four_cycles(Edges& edges, int checks, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  auto rows = rows_from_edges(edges, checks);
  int cycles = count_four_cycles(rows);
  for (int attempt = 0; attempt < 20000 && cycles > 0; ++attempt) {
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    auto [c1, v1] = edges[a];
    auto [c2, v2] = edges[b];
    if (c1 == c2 || v1 == v2) continue;
    auto& r1 = rows[static_cast<std::size_t>(c1)];
    auto& r2 = rows[static_cast<std::size_t>(c2)];
    const std::uint64_t b1 = std::uint64_t{1} << v1;
    const std::uint64_t b2 = std::uint64_t{1} << v2;
    if ((r1 & b2) || (r2 & b1)) continue;
    r1 ^= b1 | b2;
    r2 ^= b1 | b2;
    const int next = count_four_cycles(rows);
    if (next < cycles) {
      cycles = next;
      edges[a].second = v2;
      edges[b].second = v1;
    } else {
      r1 ^= b1 | b2;
      r2 ^= b1 | b2;
    }
  }
}

// Column order that puts n_info free (non-pivot) columns first.
std::vector<int> systematic_column_order(const std::vector<std::uint64_t>& rows, int n_block,
                                         int n_info) {
  std::vector<std::uint64_t> work = rows;
  std::vector<bool> is_pivot(static_cast<std::size_t>(n_block), false);
  int rank = 0;
  for (int col = 0; col < n_block && rank < static_cast<int>(work.size()); ++col) {
    const std::uint64_t bit = std::uint64_t{1} << col;
    auto it = std::find_if(work.begin() + rank, work.end(), [bit](auto w) { return w & bit; });
    if (it == work.end()) continue;
    std::iter_swap(it, work.begin() + rank);
    for (std::size_t r = 0; r < work.size(); ++r) {
      if (static_cast<int>(r) != rank && (work[r] & bit)) work[r] ^= work[static_cast<std::size_t>(rank)];
    }
    is_pivot[static_cast<std::size_t>(col)] = true;
    ++rank;
  }
  std::vector<int> info;
  std::vector<int> rest;
  for (int col = 0; col < n_block; ++col) {
    if (!is_pivot[static_cast<std::size_t>(col)] && static_cast<int>(info.size()) < n_info) {
      info.push_back(col);
    } else {
      rest.push_back(col);
    }
  }
  if (static_cast<int>(info.size()) < n_info) throw std::runtime_error("code dimension below n_info");
  info.insert(info.end(), rest.begin(), rest.end());
  return info;
}

std::uint64_t permute_word(std::uint64_t word, const std::vector<int>& order) {
  std::uint64_t out = 0;
  for (std::size_t t = 0; t < order.size(); ++t) {
    if ((word >> order[t]) & 1u) out |= std::uint64_t{1} << t;
  }
  return out;
}

}  // namespace

int LdpcCode::four_cycles() const {
  std::vector<std::uint64_t> rows;
  for (int r = 0; r < parity_check.rows(); ++r) rows.push_back(parity_check.row_word(r));
  return count_four_cycles(rows);
}

LdpcCode make_ldpc_code(BitMatrix parity_check, int n_info) {
  const int n_block = parity_check.cols();
  const int checks = parity_check.rows();
  if (n_info <= 0 || n_info >= n_block) throw std::invalid_argument("bad n_info for parity-check matrix");
  const std::uint64_t info_mask = low_mask(n_info);

  // Reduce on the tail columns: each pivot row expresses one tail bit in terms
  // of the information bits (free tail bits are fixed to zero).
  std::vector<std::uint64_t> work;
  for (int r = 0; r < checks; ++r) work.push_back(parity_check.row_word(r));
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = n_info; col < n_block && rank < checks; ++col) {
    const std::uint64_t bit = std::uint64_t{1} << col;
    auto it = std::find_if(work.begin() + rank, work.end(), [bit](auto w) { return w & bit; });
    if (it == work.end()) continue;
    std::iter_swap(it, work.begin() + rank);
    for (std::size_t r = 0; r < work.size(); ++r) {
      if (static_cast<int>(r) != rank && (work[r] & bit)) work[r] ^= work[static_cast<std::size_t>(rank)];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (int r = rank; r < checks; ++r) {
    if (work[static_cast<std::size_t>(r)] & info_mask) {
      throw std::runtime_error("parity-check tail is rank deficient for the chosen information set");
    }
  }

  LdpcCode code;
  code.n_info = n_info;
  code.n_block = n_block;
  code.generator = BitMatrix(n_block, n_info);
  for (int t = 0; t < n_info; ++t) code.generator.set(t, t, true);
  for (int r = 0; r < rank; ++r) {
    code.generator.set_row_word(pivot_col[static_cast<std::size_t>(r)],
                                work[static_cast<std::size_t>(r)] & info_mask);
  }
  code.var_checks.assign(static_cast<std::size_t>(n_block), {});
  for (int r = 0; r < checks; ++r) {
    for (int v = 0; v < n_block; ++v) {
      if (parity_check.get(r, v)) code.var_checks[static_cast<std::size_t>(v)].push_back(r);
    }
  }
  code.parity_check = std::move(parity_check);
  return code;
}

LdpcCode build_regular_ldpc(int n_info, Rng& rng) {
  if (n_info < 6 || n_info > 31) throw std::invalid_argument("n_info must lie in [6, 31]");
  const int n_block = 2 * n_info;
  const int checks = n_block * kVarDegree / kCheckDegree;

  for (int attempt = 0; attempt < 100; ++attempt) {
    auto edges = sample_configuration(n_block, rng);
    if (!edges) continue;
    remove_four_cycles(*edges, checks, rng);
    const auto rows = rows_from_edges(*edges, checks);
    const auto order = systematic_column_order(rows, n_block, n_info);
    BitMatrix h(checks, n_block);
    for (int r = 0; r < checks; ++r) h.set_row_word(r, permute_word(rows[static_cast<std::size_t>(r)], order));
    return make_ldpc_code(std::move(h), n_info);
  }
  throw std::runtime_error("failed to sample a simple (3,6)-regular graph");
}

BitIndex encode(const LdpcCode& code, const BitIndex& info) {
  if (info.width() != code.n_info) throw DimensionError("information word has wrong length");
  return BitIndex(code.generator.multiply(info.value()), code.n_block);
}

bool is_codeword(const LdpcCode& code, const BitIndex& word) {
  if (word.width() != code.n_block) throw DimensionError("codeword has wrong length");
  return code.parity_check.multiply(word.value()) == 0;
}

std::optional<BitIndex> bitflip_decode(const LdpcCode& code, const BitIndex& received,
                                       int max_rounds) {
  if (received.width() != code.n_block) throw DimensionError("received word has wrong length");
  std::uint64_t word = received.value();
  std::vector<int> unsatisfied(static_cast<std::size_t>(code.n_block));
  for (int round = 0;; ++round) {
    const std::uint64_t syndrome = code.parity_check.multiply(word);
    if (syndrome == 0) return BitIndex(word & low_mask(code.n_info), code.n_info);
    if (round >= max_rounds) return std::nullopt;
    int worst = 0;
    for (int v = 0; v < code.n_block; ++v) {
      int count = 0;
      for (int c : code.var_checks[static_cast<std::size_t>(v)]) count += (syndrome >> c) & 1u;
      unsatisfied[static_cast<std::size_t>(v)] = count;
      worst = std::max(worst, count);
    }
    for (int v = 0; v < code.n_block; ++v) {
      if (unsatisfied[static_cast<std::size_t>(v)] == worst) word ^= std::uint64_t{1} << v;
    }
  }
}

void write_ldpc(std::ostream& out, const LdpcCode& code) {
  int edges = 0;
  for (int r = 0; r < code.checks(); ++r) edges += std::popcount(code.parity_check.row_word(r));
  out << "ldpc n_info=" << code.n_info << " n_block=" << code.n_block << " checks=" << code.checks()
      << " edges=" << edges << '\n';
  for (int r = 0; r < code.checks(); ++r) {
    for (int v = 0; v < code.n_block; ++v) {
      if (code.parity_check.get(r, v)) out << r << ' ' << v << '\n';
    }
  }
}

LdpcCode read_ldpc(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("ldpc file: missing header");
  int n_info = 0, n_block = 0, checks = 0, edges = 0;
  if (std::sscanf(header.c_str(), "ldpc n_info=%d n_block=%d checks=%d edges=%d", &n_info, &n_block,
                  &checks, &edges) != 4) {
    throw std::runtime_error("ldpc file: bad header '" + header + "'");
  }
  BitMatrix h(checks, n_block);
  for (int e = 0; e < edges; ++e) {
    int r = 0, v = 0;
    if (!(in >> r >> v) || r < 0 || r >= checks || v < 0 || v >= n_block) {
      throw std::runtime_error("ldpc file: bad edge line " + std::to_string(e));
    }
    h.set(r, v, true);
  }
  return make_ldpc_code(std::move(h), n_info);
}

}  // namespace spright
