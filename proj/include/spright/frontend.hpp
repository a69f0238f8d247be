#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spright/codes.hpp"
#include "spright/gf2.hpp"
#include "spright/signal_model.hpp"

namespace spright {

// ---------------------------------------------------------------------------
// Subsampling plans
// ---------------------------------------------------------------------------

enum class Regime {
  kWindow,             // disjoint b-bit windows, C*b <= n
  kCyclicDrop,         // C segments (+ shared prefix), each hash drops one segment
  kCommonPrefix6,      // 6 groups, two of three segments per half + prefix
  kCommonPrefix8,      // 8 groups, three of four segments per half + prefix
  kCommonPrefixDense,  // cyclic drop with C = 8 and a shared prefix
  kWrappedWindow,      // b-bit windows at spread starts, wrapping modulo n
  kRandom,             // random full-column-rank matrices
};

std::string to_string(Regime regime);
Regime parse_regime(const std::string& name);

enum class PlanProfile {
  kTheory,     // minimum-redundancy eta per group count
  kBenchmark,  // C = 3, b = ceil(log2 K)
};

struct PlanOptions {
  std::optional<Regime> regime;  // nullopt selects by sparsity index
  std::optional<int> groups;
  std::optional<int> bits;
  PlanProfile profile = PlanProfile::kTheory;
  std::uint64_t seed = 0;  // benchmark plans whose windows do not fit are random
};

/// C hash matrices M_c (n x b); bin of k in group c is M_c^T k.
struct SubsamplingPlan {
  int n = 0;
  int b = 0;
  Regime regime = Regime::kWindow;
  std::vector<BitMatrix> matrices;

  int groups() const { return static_cast<int>(matrices.size()); }
  std::uint64_t bins() const { return std::uint64_t{1} << b; }

  std::uint64_t hash(int group, std::uint64_t k) const {
    return matrices[static_cast<std::size_t>(group)].transpose_multiply(k);
  }
  /// Time-domain positions M_c * l for every l in F_2^b, indexed by l.
  std::vector<std::uint64_t> sample_positions(int group) const;

  /// Keeps the first `bits` columns of each matrix.
  SubsamplingPlan truncated(int bits) const;
};

/// Segment layout: `count` segments of `length` bits from bit 0, followed by a
/// prefix segment of `prefix` bits. Each group lists the segments it keeps (the
/// prefix is always appended last when non-empty).
SubsamplingPlan plan_from_segments(int n, int length, int prefix,
                                   const std::vector<std::vector<int>>& keep, Regime regime);

SubsamplingPlan build_plan(int n, std::uint64_t k, const PlanOptions& options = {});

/// Random full-column-rank n x b matrices, one per group.
SubsamplingPlan build_random_plan(int n, int b, int groups, Rng& rng);

/// Like build_random_plan, but redrawn until no two indices share a bin in
/// every group (the stacked hashes have rank min(n, C*b)).
SubsamplingPlan build_separating_plan(int n, int b, int groups, Rng& rng);

/// log K / log N.
double sparsity_index(int n, std::uint64_t k);

// ---------------------------------------------------------------------------
// Offset plans
// ---------------------------------------------------------------------------

enum class OffsetVariant { kNoiseless, kNearLinear, kNso, kSo };

std::string to_string(OffsetVariant variant);
OffsetVariant parse_variant(const std::string& name);

struct OffsetParams {
  int p1 = 0;  // random rows
  int p2 = 0;  // nso: modulated rows per random row (must be n); so: zero rows
  int p3 = 0;  // so: coded rows (block length of the code)
};

/// Defaults used by the experiments: near-linear P1 = 3n; nso P1 = 2n, P2 = n;
/// so P1 = n random, P2 = n zero, P3 = 2n coded.
OffsetParams default_offset_params(OffsetVariant variant, int n);

/// Per-group offset matrices D_c (P x n), rows stored as packed words.
/// Row order:
///   noiseless  [0, e_1, ..., e_n]
///   near-linear [d_1 .. d_P1]
///   nso        [d_1 .. d_P1, d_1^e_1 .. d_1^e_n, d_2^e_1 .. ]
///   so         [P1 random, P2 zero, P3 rows of the generator]
struct OffsetPlan {
  OffsetVariant variant = OffsetVariant::kNoiseless;
  int n = 0;
  OffsetParams params;
  std::vector<std::vector<std::uint64_t>> rows;  // [group][p]
  std::optional<LdpcCode> code;

  int rows_per_group() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }
  std::span<const std::uint64_t> group_rows(int group) const {
    return rows[static_cast<std::size_t>(group)];
  }
};

OffsetPlan build_offsets(OffsetVariant variant, const SubsamplingPlan& plan,
                         const OffsetParams& params, const std::optional<LdpcCode>& code, Rng& rng);

// ---------------------------------------------------------------------------
// Observations
// ---------------------------------------------------------------------------

/// C x 2^b x P tensor, stored (group, bin, offset) row-major so each bin's
/// column is contiguous.
struct BinObservations {
  int n = 0;
  int b = 0;
  int groups = 0;
  int offsets = 0;
  std::vector<double> data;

  BinObservations() = default;
  BinObservations(int n_bits, int b_bits, int c, int p);

  std::uint64_t bins() const { return std::uint64_t{1} << b; }
  std::size_t offset_of(int group, std::uint64_t bin) const {
    return (static_cast<std::size_t>(group) * bins() + bin) * static_cast<std::size_t>(offsets);
  }
  std::span<double> column(int group, std::uint64_t bin) {
    return {data.data() + offset_of(group, bin), static_cast<std::size_t>(offsets)};
  }
  std::span<const double> column(int group, std::uint64_t bin) const {
    return {data.data() + offset_of(group, bin), static_cast<std::size_t>(offsets)};
  }
  double& at(int group, std::uint64_t bin, int p) { return data[offset_of(group, bin) + static_cast<std::size_t>(p)]; }
  double at(int group, std::uint64_t bin, int p) const { return data[offset_of(group, bin) + static_cast<std::size_t>(p)]; }
};

/// U_{c,p}[j] = (sqrt(N)/B) sum_l u[M_c l + d_{c,p}] (-1)^<j,l>.
BinObservations observe(SampleSource& source, const SubsamplingPlan& plan, const OffsetPlan& offsets);

/// Offsets per group as the sample-cost formulas count them: n+1, P1, P1*P2
/// (the P1 reference rows of nso are not counted), P1+P2+P3.
int nominal_rows_per_group(OffsetVariant variant, const OffsetParams& params, int n);

/// C * B * nominal rows per group.
std::uint64_t nominal_sample_count(const SubsamplingPlan& plan, const OffsetPlan& offsets);

/// Little-endian float64 payload in (c, j, p) order plus a JSON sidecar
/// {"n","b","C","P","variant"}.
void save_observations(const BinObservations& obs, OffsetVariant variant,
                       const std::string& payload_path, const std::string& header_path);
BinObservations load_observations(const std::string& payload_path, const std::string& header_path,
                                  OffsetVariant* variant = nullptr);

}  // namespace spright
