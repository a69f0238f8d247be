#include "spright/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "spright/frontend.hpp"
#include "spright/peeling.hpp"

namespace spright {

namespace {

std::uint64_t edge_mask(const std::vector<int>& e) {
  std::uint64_t mask = 0;
  for (int v : e) mask |= std::uint64_t{1} << (v - 1);
  return mask;
}

// Cached oracle; the cut function is scaled by N^{-1/2} so the orthonormal
// machinery sees the unnormalized coefficients directly.
class CutSource final : public SampleSource {
 public:
  CutSource(const CutOracle& oracle, int n) : oracle_(oracle), n_(n), scale_(std::sqrt(std::ldexp(1.0, -n))) {}
  int n() const override { return n_; }
  double sample(const BitIndex& m) override {
    auto it = cache_.find(m.value());
    if (it != cache_.end()) return it->second;
    const double v = scale_ * oracle_(m);
    cache_.emplace(m.value(), v);
    return v;
  }
  std::size_t distinct_samples() const override { return cache_.size(); }

 private:
  const CutOracle& oracle_;
  int n_;
  double scale_;
  std::unordered_map<std::uint64_t, double> cache_;
};

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int size) : parent(static_cast<std::size_t>(size)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

void Hypergraph::validate() const {
  if (n < 1 || n > kMaxBits) throw DimensionError("hypergraph n out of range");
  std::set<std::vector<int>> seen;
  for (const auto& e : edges) {
    if (e.size() < 2) throw std::invalid_argument("edges need at least two vertices");
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 1 || e[i] > n) throw std::invalid_argument("vertex id out of range");
      if (i > 0 && e[i] <= e[i - 1]) throw std::invalid_argument("edge vertices must be sorted and distinct");
    }
    if (!seen.insert(e).second) throw std::invalid_argument("duplicate edge");
  }
}

int Hypergraph::max_edge_size() const {
  std::size_t d = 0;
  for (const auto& e : edges) d = std::max(d, e.size());
  return static_cast<int>(d);
}

int cut_value(const Hypergraph& h, const BitIndex& m) {
  if (m.width() != h.n) throw DimensionError("partition width differs from n");
  int cut = 0;
  for (const auto& e : h.edges) {
    const std::uint64_t inside = m.value() & edge_mask(e);
    cut += inside != 0 && inside != edge_mask(e);
  }
  return cut;
}

SparseSpectrum analytic_spectrum(const Hypergraph& h) {
  SparseSpectrum spectrum(h.n);
  for (const auto& e : h.edges) {
    const double weight = std::ldexp(1.0, 1 - static_cast<int>(e.size()));
    spectrum.add(BitIndex::zero(h.n), 1.0 - weight);
    const std::uint64_t full = edge_mask(e);
    // Every nonempty submask of the edge with even cardinality.
    for (std::uint64_t sub = full; sub != 0; sub = (sub - 1) & full) {
      if (std::popcount(sub) % 2 == 0) spectrum.add(BitIndex(sub, h.n), -weight);
    }
  }
  return spectrum;
}

Hypergraph random_disjoint_hypergraph(int n, int s, int max_size, Rng& rng) {
  if (max_size < 2) throw std::invalid_argument("max edge size must be at least 2");
  std::vector<int> vertices(static_cast<std::size_t>(n));
  std::iota(vertices.begin(), vertices.end(), 1);
  std::shuffle(vertices.begin(), vertices.end(), rng);
  std::uniform_int_distribution<int> size(2, max_size);
  Hypergraph h;
  h.n = n;
  std::size_t next = 0;
  for (int i = 0; i < s; ++i) {
    const auto t = static_cast<std::size_t>(size(rng));
    if (next + t > vertices.size()) throw std::invalid_argument("not enough vertices for disjoint edges");
    std::vector<int> e(vertices.begin() + static_cast<std::ptrdiff_t>(next),
                       vertices.begin() + static_cast<std::ptrdiff_t>(next + t));
    std::sort(e.begin(), e.end());
    h.edges.push_back(std::move(e));
    next += t;
  }
  std::sort(h.edges.begin(), h.edges.end());
  return h;
}

Hypergraph random_hypergraph(int n, int s, int max_size, Rng& rng) {
  if (max_size < 2 || max_size > n) throw std::invalid_argument("bad max edge size");
  std::uniform_int_distribution<int> size(2, max_size);
  std::set<std::vector<int>> edges;
  std::vector<int> vertices(static_cast<std::size_t>(n));
  std::iota(vertices.begin(), vertices.end(), 1);
  while (static_cast<int>(edges.size()) < s) {
    std::shuffle(vertices.begin(), vertices.end(), rng);
    std::vector<int> e(vertices.begin(), vertices.begin() + size(rng));
    std::sort(e.begin(), e.end());
    edges.insert(std::move(e));
  }
  Hypergraph h;
  h.n = n;
  h.edges.assign(edges.begin(), edges.end());
  return h;
}

void write_hypergraph(std::ostream& out, const Hypergraph& h) {
  out << "n=" << h.n << '\n';
  for (const auto& e : h.edges) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << '\n';
  }
}

Hypergraph read_hypergraph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("n=", 0) != 0) throw std::runtime_error("hypergraph: missing n= header");
  Hypergraph h;
  h.n = std::stoi(line.substr(2));
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<int> e;
    for (int v; fields >> v;) e.push_back(v);
    if (!fields.eof()) throw std::runtime_error("hypergraph: bad edge line '" + line + "'");
    if (e.empty()) continue;
    std::sort(e.begin(), e.end());
    h.edges.push_back(std::move(e));
  }
  h.validate();
  return h;
}

std::optional<std::vector<std::vector<int>>> reconstruct_edges(const SparseSpectrum& spectrum) {
  const int n = spectrum.n();
  DisjointSets sets(n);
  std::vector<bool> touched(static_cast<std::size_t>(n), false);
  double dc = 0.0;
  for (const auto& [k, value] : spectrum.entries()) {
    if (k == 0) {
      dc = value;
      continue;
    }
    const int first = std::countr_zero(k);
    for (std::uint64_t rest = k; rest != 0; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      touched[static_cast<std::size_t>(v)] = true;
      sets.unite(v, first);
    }
  }

  std::map<int, std::uint64_t> components;
  for (int v = 0; v < n; ++v) {
    if (touched[static_cast<std::size_t>(v)]) components[sets.find(v)] |= std::uint64_t{1} << v;
  }
  std::vector<std::vector<int>> edges;
  double expected_dc = 0.0;
  for (const auto& [root, mask] : components) {
    const int size = std::popcount(mask);
    const double weight = std::ldexp(1.0, 1 - size);
    int count = 0;
    for (const auto& [k, value] : spectrum.entries()) {
      if (k == 0 || (k & ~mask) != 0) continue;
      if (std::popcount(k) % 2 != 0 || value != -weight) return std::nullopt;
      ++count;
    }
    if (count != (1 << (size - 1)) - 1) return std::nullopt;
    expected_dc += 1.0 - weight;
    std::vector<int> e;
    for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) e.push_back(std::countr_zero(rest) + 1);
    edges.push_back(std::move(e));
  }
  if (std::abs(dc - expected_dc) > 1e-12) return std::nullopt;
  std::sort(edges.begin(), edges.end());
  return edges;
}

SketchResult sketch_recover(const CutOracle& oracle, int n, const SketchOptions& options) {
  if (n < 2 || n > kMaxBits) throw DimensionError("sketch n out of range");
  const int d = options.max_edge_size > 0 ? options.max_edge_size : n;
  int b_max = std::min(n, 20);
  if (options.sparsity_budget > 0) {
    const int log_budget = static_cast<int>(std::ceil(std::log2(static_cast<double>(options.sparsity_budget))));
    b_max = std::min(n, std::max(2, log_budget + 2));
  }

  CutSource source(oracle, n);
  Rng rng = make_rng(options.seed, 0x736b65746368ull);
  const SubsamplingPlan full = build_random_plan(n, b_max, options.groups, rng);
  OffsetPlan offsets = build_offsets(OffsetVariant::kNoiseless, full, {}, std::nullopt, rng);

  DecodeOptions decode_options;
  decode_options.detector.zero_tol = 1e-9;
  decode_options.detector.value_grid = std::ldexp(1.0, 1 - d);

  SketchResult result;
  result.spectrum = SparseSpectrum(n);
  for (int b = std::min(2, b_max); b <= b_max; ++b) {
    const SubsamplingPlan plan = full.truncated(b);
    const BinObservations obs = observe(source, plan, offsets);
    DecodeResult decoded = decode(obs, plan, offsets, decode_options);
    result.spectrum = std::move(decoded.spectrum);
    result.bits = b;
    if (!decoded.report.stalled) {
      result.complete = true;
      break;
    }
  }
  result.queries = source.distinct_samples();
  if (result.complete) result.edges = reconstruct_edges(result.spectrum);
  return result;
}

}  // namespace spright
