#include "spright/frontend.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "spright/fwht.hpp"

namespace spright {

namespace {

// Redundancy per group count used to size b under the theory profile.
constexpr double kEtaWindow = 0.4073;
constexpr double kEtaSix = 0.2616;
constexpr double kEtaEight = 0.2336;

int ceil_log2_at_least_one(double value) {
  if (value <= 2.0) return 1;
  return static_cast<int>(std::ceil(std::log2(value) - 1e-12));
}

SubsamplingPlan window_plan(int n, int b, int groups) {
  if (static_cast<long>(groups) * b > n) {
    throw DimensionError("window design needs C*b <= n (C=" + std::to_string(groups) +
                         ", b=" + std::to_string(b) + ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::vector<int>> keep;
  for (int c = 0; c < groups; ++c) keep.push_back({c});
  return plan_from_segments(n, b, 0, keep, Regime::kWindow);
}

SubsamplingPlan wrapped_window_plan(int n, int b, int groups) {
  if (b > n) throw DimensionError("b exceeds n");
  SubsamplingPlan plan;
  plan.n = n;
  plan.b = b;
  plan.regime = Regime::kWrappedWindow;
  for (int c = 0; c < groups; ++c) {
    const int start = static_cast<int>(std::lround(static_cast<double>(c) * n / groups));
    BitMatrix m(n, b);
    for (int t = 0; t < b; ++t) m.set((start + t) % n, t, true);
    plan.matrices.push_back(std::move(m));
  }
  return plan;
}

SubsamplingPlan cyclic_drop_plan(int n, int b, int groups, Regime regime) {
  if (groups < 2) throw DimensionError("cyclic-drop design needs at least two groups");
  const int length = n - b;
  const int prefix = b - (groups - 1) * length;
  if (length < 1 || prefix < 0) {
    throw DimensionError("cyclic-drop design needs b >= (C-1)n/C (C=" + std::to_string(groups) +
                         ", b=" + std::to_string(b) + ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::vector<int>> keep;
  for (int c = 0; c < groups; ++c) {
    std::vector<int> segs;
    for (int s = 0; s < groups; ++s) {
      if (s != c) segs.push_back(s);
    }
    keep.push_back(std::move(segs));
  }
  return plan_from_segments(n, length, prefix, keep, regime);
}

// Two halves of `half` segments each; a group keeps its half minus one segment.
SubsamplingPlan common_prefix_plan(int n, int b, int half, Regime regime) {
  const int kept = half - 1;
  // Small b leaves a negative prefix; widen to the first layout that fits.
  while (b < n && b - kept * ((n - b) / (half + 1)) < 0) ++b;
  const int length = (n - b) / (half + 1);
  const int prefix = b - kept * length;
  if (length < 1 || prefix < 0) {
    throw DimensionError("common-prefix design has no valid layout for n=" + std::to_string(n) +
                         ", b=" + std::to_string(b));
  }
  std::vector<std::vector<int>> keep;
  for (int h = 0; h < 2; ++h) {
    for (int drop = 0; drop < half; ++drop) {
      std::vector<int> segs;
      for (int s = 0; s < half; ++s) {
        if (s != drop) segs.push_back(h * half + s);
      }
      keep.push_back(std::move(segs));
    }
  }
  return plan_from_segments(n, length, prefix, keep, regime);
}

void check_nk(int n, std::uint64_t k) {
  if (n < 1 || n > kMaxBits) throw DimensionError("n must lie in [1, " + std::to_string(kMaxBits) + "]");
  if (k < 1) throw std::invalid_argument("K must be positive");
  if (n < 64 && k > (std::uint64_t{1} << n)) throw std::invalid_argument("K exceeds N");
}

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::kWindow: return "window";
    case Regime::kCyclicDrop: return "cyclic-drop";
    case Regime::kCommonPrefix6: return "common-prefix-6";
    case Regime::kCommonPrefix8: return "common-prefix-8";
    case Regime::kCommonPrefixDense: return "common-prefix-dense";
    case Regime::kWrappedWindow: return "wrapped-window";
    case Regime::kRandom: return "random";
  }
  return "unknown";
}

Regime parse_regime(const std::string& name) {
  for (Regime r : {Regime::kWindow, Regime::kCyclicDrop, Regime::kCommonPrefix6, Regime::kCommonPrefix8,
                   Regime::kCommonPrefixDense, Regime::kWrappedWindow, Regime::kRandom}) {
    if (to_string(r) == name) return r;
  }
  throw std::invalid_argument("unknown regime '" + name + "'");
}

std::vector<std::uint64_t> SubsamplingPlan::sample_positions(int group) const {
  const BitMatrix& m = matrices[static_cast<std::size_t>(group)];
  std::vector<std::uint64_t> columns(static_cast<std::size_t>(b));
  for (int t = 0; t < b; ++t) columns[static_cast<std::size_t>(t)] = m.column_word(t);
  std::vector<std::uint64_t> positions(bins(), 0);
  for (std::uint64_t l = 1; l < bins(); ++l) {
    positions[l] = positions[l & (l - 1)] ^ columns[static_cast<std::size_t>(std::countr_zero(l))];
  }
  return positions;
}

SubsamplingPlan SubsamplingPlan::truncated(int bits) const {
  if (bits < 1 || bits > b) throw DimensionError("truncation width out of range");
  SubsamplingPlan out;
  out.n = n;
  out.b = bits;
  out.regime = regime;
  for (const auto& m : matrices) {
    BitMatrix t(n, bits);
    const std::uint64_t mask = bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    for (int r = 0; r < n; ++r) t.set_row_word(r, m.row_word(r) & mask);
    out.matrices.push_back(std::move(t));
  }
  return out;
}

SubsamplingPlan plan_from_segments(int n, int length, int prefix,
                                   const std::vector<std::vector<int>>& keep, Regime regime) {
  int count = 0;
  for (const auto& segs : keep) {
    for (int s : segs) count = std::max(count, s + 1);
  }
  if (count * length + prefix > n) throw DimensionError("segment layout exceeds n");
  SubsamplingPlan plan;
  plan.n = n;
  plan.regime = regime;
  for (const auto& segs : keep) {
    const int b = static_cast<int>(segs.size()) * length + prefix;
    if (plan.matrices.empty()) {
      plan.b = b;
    } else if (b != plan.b) {
      throw DimensionError("groups keep different numbers of bits");
    }
    BitMatrix m(n, b);
    int col = 0;
    for (int s : segs) {
      for (int t = 0; t < length; ++t) m.set(s * length + t, col++, true);
    }
    for (int t = 0; t < prefix; ++t) m.set(count * length + t, col++, true);
    plan.matrices.push_back(std::move(m));
  }
  return plan;
}

double sparsity_index(int n, std::uint64_t k) {
  return std::log2(static_cast<double>(k)) / static_cast<double>(n);
}

SubsamplingPlan build_plan(int n, std::uint64_t k, const PlanOptions& options) {
  check_nk(n, k);
  const double delta = sparsity_index(n, k);
  const double kd = static_cast<double>(k);

  if (options.profile == PlanProfile::kBenchmark && !options.regime) {
    const int groups = options.groups.value_or(3);
    const int b = std::min(n, options.bits.value_or(ceil_log2_at_least_one(kd)));
    if (static_cast<long>(groups) * b <= n) return window_plan(n, b, groups);
    // Overlapping windows let multi-tons pass the hash check in two groups at
    // once, so fall back to random hashes.
    Rng rng = make_rng(options.seed, 0x706c616eull);
    return build_separating_plan(n, b, groups, rng);
  }

  Regime regime;
  if (options.regime) {
    regime = *options.regime;
  } else if (delta > 0.99) {
    throw DimensionError("sparsity index above 0.99 is not supported");
  } else if (delta <= 1.0 / 3.0) {
    regime = Regime::kWindow;
  } else if (delta <= 0.73) {
    regime = Regime::kCommonPrefix6;
  } else if (delta <= 7.0 / 8.0) {
    regime = Regime::kCommonPrefix8;
  } else {
    regime = Regime::kCommonPrefixDense;
  }

  auto bits_for = [&](double eta) {
    return std::min(n, options.bits.value_or(ceil_log2_at_least_one(eta * kd)));
  };

  switch (regime) {
    case Regime::kWindow: return window_plan(n, bits_for(kEtaWindow), options.groups.value_or(3));
    case Regime::kWrappedWindow:
      return wrapped_window_plan(n, bits_for(kEtaWindow), options.groups.value_or(3));
    case Regime::kCyclicDrop: {
      const int groups = options.groups.value_or(3);
      return cyclic_drop_plan(n, options.bits.value_or(n - n / groups), groups, Regime::kCyclicDrop);
    }
    case Regime::kCommonPrefix6: return common_prefix_plan(n, bits_for(kEtaSix), 3, regime);
    case Regime::kCommonPrefix8: return common_prefix_plan(n, bits_for(kEtaEight), 4, regime);
    case Regime::kCommonPrefixDense: {
      const int b = std::max(bits_for(kEtaEight), n - n / 8);
      return cyclic_drop_plan(n, std::min(b, n - 1), 8, regime);
    }
    case Regime::kRandom:
      throw std::invalid_argument("random plans are built with build_random_plan");
  }
  throw std::invalid_argument("unknown regime");
}

SubsamplingPlan build_random_plan(int n, int b, int groups, Rng& rng) {
  if (b < 1 || b > n || n > kMaxBits) throw DimensionError("random plan needs 1 <= b <= n");
  std::uniform_int_distribution<std::uint64_t> word(0, (std::uint64_t{1} << b) - 1);
  SubsamplingPlan plan;
  plan.n = n;
  plan.b = b;
  plan.regime = Regime::kRandom;
  for (int c = 0; c < groups; ++c) {
    BitMatrix m(n, b);
    do {
      for (int r = 0; r < n; ++r) m.set_row_word(r, word(rng));
    } while (m.rank() < b);
    plan.matrices.push_back(std::move(m));
  }
  return plan;
}

SubsamplingPlan build_separating_plan(int n, int b, int groups, Rng& rng) {
  const int target = std::min(n, groups * b);
  for (;;) {
    SubsamplingPlan plan = build_random_plan(n, b, groups, rng);
    BitMatrix stacked(groups * b, n);
    int r = 0;
    for (const auto& m : plan.matrices) {
      for (int t = 0; t < b; ++t) stacked.set_row_word(r++, m.column_word(t));
    }
    if (stacked.rank() == target) return plan;
  }
}

std::string to_string(OffsetVariant variant) {
  switch (variant) {
    case OffsetVariant::kNoiseless: return "noiseless";
    case OffsetVariant::kNearLinear: return "near-linear";
    case OffsetVariant::kNso: return "nso";
    case OffsetVariant::kSo: return "so";
  }
  return "unknown";
}

OffsetVariant parse_variant(const std::string& name) {
  for (OffsetVariant v :
       {OffsetVariant::kNoiseless, OffsetVariant::kNearLinear, OffsetVariant::kNso, OffsetVariant::kSo}) {
    if (to_string(v) == name) return v;
  }
  throw std::invalid_argument("unknown offset variant '" + name + "'");
}

OffsetParams default_offset_params(OffsetVariant variant, int n) {
  switch (variant) {
    case OffsetVariant::kNoiseless: return {0, 0, 0};
    case OffsetVariant::kNearLinear: return {3 * n, 0, 0};
    case OffsetVariant::kNso: return {2 * n, n, 0};
    case OffsetVariant::kSo: return {n, n, 2 * n};
  }
  return {};
}

namespace {

// Reduces d against an echelon basis of col(M); equal results mean equal cosets.
std::uint64_t coset_key(std::uint64_t d, const std::vector<std::uint64_t>& basis) {
  for (std::uint64_t v : basis) {
    const std::uint64_t pivot = v & -v;
    if (d & pivot) d ^= v;
  }
  return d;
}

// Random rows, each in a coset of col(M_c) not used yet while unused ones remain.
// Rows in one coset read the same sample positions and give the same signature
// on every candidate of a bin, so repeating a coset adds nothing.
std::vector<std::uint64_t> spread_rows(const BitMatrix& m, int count, Rng& rng) {
  std::vector<std::uint64_t> basis;
  for (int t = 0; t < m.cols(); ++t) {
    std::uint64_t v = coset_key(m.column_word(t), basis);
    if (!v) continue;
    const std::uint64_t pivot = v & -v;
    for (auto& u : basis) {
      if (u & pivot) u ^= v;
    }
    basis.push_back(v);
  }
  const int free_bits = m.rows() - static_cast<int>(basis.size());
  const std::uint64_t cosets = free_bits >= 63 ? ~std::uint64_t{0} : std::uint64_t{1} << free_bits;
  std::uniform_int_distribution<std::uint64_t> word(0, (std::uint64_t{1} << m.rows()) - 1);
  std::vector<std::uint64_t> rows;
  std::set<std::uint64_t> used;
  while (static_cast<int>(rows.size()) < count) {
    if (used.size() == cosets) used.clear();
    const std::uint64_t d = word(rng);
    if (used.insert(coset_key(d, basis)).second) rows.push_back(d);
  }
  return rows;
}

}  // namespace

OffsetPlan build_offsets(OffsetVariant variant, const SubsamplingPlan& plan, const OffsetParams& params,
                         const std::optional<LdpcCode>& code, Rng& rng) {
  const int n = plan.n;
  OffsetPlan out;
  out.variant = variant;
  out.n = n;
  out.params = params;
  for (int c = 0; c < plan.groups(); ++c) {
    std::vector<std::uint64_t> rows;
    switch (variant) {
      case OffsetVariant::kNoiseless:
        rows.push_back(0);
        for (int q = 0; q < n; ++q) rows.push_back(std::uint64_t{1} << q);
        break;
      case OffsetVariant::kNearLinear:
        if (params.p1 < 1) throw std::invalid_argument("near-linear needs P1 >= 1");
        rows = spread_rows(plan.matrices[c], params.p1, rng);
        break;
      case OffsetVariant::kNso: {
        if (params.p1 < 1) throw std::invalid_argument("nso needs P1 >= 1");
        if (params.p2 != n) throw std::invalid_argument("nso needs P2 = n modulated rows per random row");
        const std::vector<std::uint64_t> base = spread_rows(plan.matrices[c], params.p1, rng);
        rows = base;
        for (std::uint64_t d : base) {
          for (int q = 0; q < n; ++q) rows.push_back(d ^ (std::uint64_t{1} << q));
        }
        break;
      }
      case OffsetVariant::kSo: {
        if (!code) throw std::invalid_argument("so offsets need an LDPC code");
        if (code->n_info != n) throw DimensionError("code information length must equal n");
        if (params.p3 != code->n_block) throw std::invalid_argument("so needs P3 = code block length");
        if (params.p2 < 1) throw std::invalid_argument("so needs at least one zero row");
        rows = spread_rows(plan.matrices[c], params.p1, rng);
        for (int p = 0; p < params.p2; ++p) rows.push_back(0);
        for (int r = 0; r < code->n_block; ++r) rows.push_back(code->generator.row_word(r));
        break;
      }
    }
    out.rows.push_back(std::move(rows));
  }
  if (variant == OffsetVariant::kSo) out.code = code;
  return out;
}

BinObservations::BinObservations(int n_bits, int b_bits, int c, int p)
    : n(n_bits), b(b_bits), groups(c), offsets(p),
      data((static_cast<std::size_t>(c) << b_bits) * static_cast<std::size_t>(p), 0.0) {}

BinObservations observe(SampleSource& source, const SubsamplingPlan& plan, const OffsetPlan& offsets) {
  if (source.n() != plan.n || offsets.n != plan.n) throw DimensionError("observation dimensions disagree");
  if (static_cast<int>(offsets.rows.size()) != plan.groups()) {
    throw DimensionError("offset plan has a different number of groups");
  }
  const int p_count = offsets.rows_per_group();
  BinObservations obs(plan.n, plan.b, plan.groups(), p_count);
  const std::uint64_t bins = plan.bins();
  const double scale = std::sqrt(std::ldexp(1.0, plan.n)) / static_cast<double>(bins);
  std::vector<double> buffer(bins);
  for (int c = 0; c < plan.groups(); ++c) {
    const auto positions = plan.sample_positions(c);
    const auto rows = offsets.group_rows(c);
    for (int p = 0; p < p_count; ++p) {
      const std::uint64_t d = rows[static_cast<std::size_t>(p)];
      for (std::uint64_t l = 0; l < bins; ++l) buffer[l] = source.sample(BitIndex(positions[l] ^ d, plan.n));
      fwht_unnormalized(buffer);
      for (std::uint64_t j = 0; j < bins; ++j) obs.at(c, j, p) = scale * buffer[j];
    }
  }
  return obs;
}

int nominal_rows_per_group(OffsetVariant variant, const OffsetParams& params, int n) {
  switch (variant) {
    case OffsetVariant::kNoiseless: return n + 1;
    case OffsetVariant::kNearLinear: return params.p1;
    case OffsetVariant::kNso: return params.p1 * params.p2;
    case OffsetVariant::kSo: return params.p1 + params.p2 + params.p3;
  }
  return 0;
}

std::uint64_t nominal_sample_count(const SubsamplingPlan& plan, const OffsetPlan& offsets) {
  return static_cast<std::uint64_t>(plan.groups()) * plan.bins() *
         static_cast<std::uint64_t>(nominal_rows_per_group(offsets.variant, offsets.params, plan.n));
}

void save_observations(const BinObservations& obs, OffsetVariant variant, const std::string& payload_path,
                       const std::string& header_path) {
  static_assert(std::endian::native == std::endian::little, "payload writer assumes little-endian host");
  std::ofstream payload(payload_path, std::ios::binary);
  if (!payload) throw std::runtime_error("cannot open " + payload_path);
  payload.write(reinterpret_cast<const char*>(obs.data.data()),
                static_cast<std::streamsize>(obs.data.size() * sizeof(double)));
  nlohmann::json header = {{"n", obs.n}, {"b", obs.b}, {"C", obs.groups}, {"P", obs.offsets},
                           {"variant", to_string(variant)}};
  std::ofstream meta(header_path);
  if (!meta) throw std::runtime_error("cannot open " + header_path);
  meta << header.dump(2) << '\n';
}

BinObservations load_observations(const std::string& payload_path, const std::string& header_path,
                                  OffsetVariant* variant) {
  std::ifstream meta(header_path);
  if (!meta) throw std::runtime_error("cannot open " + header_path);
  const auto header = nlohmann::json::parse(meta);
  BinObservations obs(header.at("n").get<int>(), header.at("b").get<int>(), header.at("C").get<int>(),
                      header.at("P").get<int>());
  if (variant) *variant = parse_variant(header.at("variant").get<std::string>());
  std::ifstream payload(payload_path, std::ios::binary);
  if (!payload) throw std::runtime_error("cannot open " + payload_path);
  payload.read(reinterpret_cast<char*>(obs.data.data()),
               static_cast<std::streamsize>(obs.data.size() * sizeof(double)));
  if (payload.gcount() != static_cast<std::streamsize>(obs.data.size() * sizeof(double))) {
    throw std::runtime_error("observation payload is shorter than the header implies");
  }
  if (payload.peek() != std::ifstream::traits_type::eof()) {
    throw std::runtime_error("observation payload is longer than the header implies");
  }
  return obs;
}

}  // namespace spright
