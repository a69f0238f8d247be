#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "spright/signal_model.hpp"
#include "spright/spectrum.hpp"

namespace spright {

/// Vertices are 1-based; vertex v is index position v.
struct Hypergraph {
  int n = 0;
  std::vector<std::vector<int>> edges;  // each sorted, 2 <= |e|

  void validate() const;
  int max_edge_size() const;
};

/// Number of edges with vertices on both sides of the bipartition m.
int cut_value(const Hypergraph& h, const BitIndex& m);

/// Unnormalized expansion cut(m) = sum_k X[k] (-1)^<k,m>.
SparseSpectrum analytic_spectrum(const Hypergraph& h);

/// s vertex-disjoint edges with sizes uniform in [2, max_size].
Hypergraph random_disjoint_hypergraph(int n, int s, int max_size, Rng& rng);
/// s distinct edges that may share vertices.
Hypergraph random_hypergraph(int n, int s, int max_size, Rng& rng);

/// Header "n=<n>", then one edge per line as space-separated 1-based vertex ids.
void write_hypergraph(std::ostream& out, const Hypergraph& h);
Hypergraph read_hypergraph(std::istream& in);

using CutOracle = std::function<double(const BitIndex&)>;

struct SketchOptions {
  std::uint64_t sparsity_budget = 0;  // 0: no budget cap beyond b <= n
  int max_edge_size = 0;              // values snapped to multiples of 2^(1-d); 0 uses n
  int groups = 3;
  std::uint64_t seed = 1;
};

struct SketchResult {
  SparseSpectrum spectrum;  // unnormalized convention
  std::optional<std::vector<std::vector<int>>> edges;
  std::uint64_t queries = 0;
  int bits = 0;        // final bins-per-group exponent
  bool complete = false;  // every bin peeled to zero
};

/// Recovers the cut function's spectrum from cut queries with the noiseless
/// pipeline, growing b until every bin peels clean. Edges are rebuilt when the
/// spectrum matches a vertex-disjoint hypergraph.
SketchResult sketch_recover(const CutOracle& oracle, int n, const SketchOptions& options = {});

/// Edge list implied by a disjoint-edge spectrum, or nullopt when it does not fit.
std::optional<std::vector<std::vector<int>>> reconstruct_edges(const SparseSpectrum& spectrum);

}  // namespace spright
