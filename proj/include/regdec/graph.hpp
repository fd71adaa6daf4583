#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "regdec/bitmatrix.hpp"

namespace regdec {

// Simple undirected graph, dense bit-level adjacency, zero diagonal.
class Graph {
public:
  explicit Graph(int n) : n_(n), adj_(n) {
    if (n < 1) throw std::invalid_argument("Graph: node count must be >= 1");
  }

  int num_nodes() const { return n_; }
  bool edge(int i, int j) const { return adj_.get(i, j); }
  void add_edge(int i, int j) {
    if (i == j) throw std::invalid_argument("Graph: self-loop");
    adj_.set_sym(i, j, true);
  }
  const BitMatrix& adjacency() const { return adj_; }

  long long edge_count() const {
    long long c = 0;
    for (int i = 0; i < n_; ++i) c += adj_.row_count(i);
    return c / 2;
  }

  bool operator==(const Graph& o) const {
    return n_ == o.n_ && adj_ == o.adj_;
  }

private:
  int n_;
  BitMatrix adj_;
};

// Graph with ternary link knowledge: observed link (1), observed non-link (0)
// or missing (-1).  D holds observed links, B marks where data exists.
// Diagonal of B is forced to zero.
class MaskedGraph {
public:
  MaskedGraph(BitMatrix d, BitMatrix b) : n_(d.size()), d_(std::move(d)), b_(std::move(b)) {
    if (d_.size() != b_.size())
      throw std::invalid_argument("MaskedGraph: D/B size mismatch");
    for (int i = 0; i < n_; ++i) {
      if (b_.get(i, i) || d_.get(i, i))
        throw std::invalid_argument("MaskedGraph: diagonal must be missing");
      for (int j = 0; j < n_; ++j)
        if (d_.get(i, j) && !b_.get(i, j))
          throw std::invalid_argument("MaskedGraph: link observed where data is missing");
    }
  }

  // Full-data view of a plain graph: B is all ones off-diagonal.
  static MaskedGraph from_graph(const Graph& g) {
    const int n = g.num_nodes();
    BitMatrix b(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) b.set(i, j, true);
    return MaskedGraph(g.adjacency(), std::move(b));
  }

  int num_nodes() const { return n_; }
  // Ternary entry: 1 observed link, 0 observed non-link, -1 missing.
  int raw(int i, int j) const {
    if (!b_.get(i, j)) return -1;
    return d_.get(i, j) ? 1 : 0;
  }
  const BitMatrix& observed_links() const { return d_; }
  const BitMatrix& mask() const { return b_; }

private:
  int n_;
  BitMatrix d_; // observed links
  BitMatrix b_; // observation indicator
};

// Assignment of n nodes to k blocks, 0-based labels.
struct Partition {
  int n = 0;
  int k = 0;
  std::vector<int> assignment; // length n, values in [0, k)

  Partition() = default;
  Partition(int k_, std::vector<int> a) : n(static_cast<int>(a.size())), k(k_), assignment(std::move(a)) {
    validate();
  }

  void validate() const {
    if (k < 1 || k > n) throw std::invalid_argument("Partition: k out of range");
    for (int v : assignment)
      if (v < 0 || v >= k) throw std::invalid_argument("Partition: label out of range");
  }

  std::vector<long long> block_sizes() const {
    std::vector<long long> s(k, 0);
    for (int v : assignment) ++s[v];
    return s;
  }

  bool has_empty_block() const {
    auto s = block_sizes();
    return std::any_of(s.begin(), s.end(), [](long long x) { return x == 0; });
  }

  bool operator==(const Partition& o) const {
    return n == o.n && k == o.k && assignment == o.assignment;
  }
};

// Parameters of a planted stochastic block model.
struct SbmSpec {
  std::vector<int> block_sizes;         // k positive entries
  std::vector<std::vector<double>> p;   // symmetric k x k, entries in [0,1]
  std::uint64_t seed = 0;

  int num_blocks() const { return static_cast<int>(block_sizes.size()); }
  int num_nodes() const {
    return std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
  }

  void validate() const {
    const int k = num_blocks();
    if (k < 1) throw std::invalid_argument("SbmSpec: no blocks");
    for (int s : block_sizes)
      if (s < 1) throw std::invalid_argument("SbmSpec: block size must be positive");
    if (static_cast<int>(p.size()) != k)
      throw std::invalid_argument("SbmSpec: P must be k x k");
    for (int i = 0; i < k; ++i) {
      if (static_cast<int>(p[i].size()) != k)
        throw std::invalid_argument("SbmSpec: P must be k x k");
      for (int j = 0; j < k; ++j) {
        if (p[i][j] < 0.0 || p[i][j] > 1.0)
          throw std::invalid_argument("SbmSpec: P entry outside [0,1]");
        if (p[i][j] != p[j][i])
          throw std::invalid_argument("SbmSpec: P must be symmetric");
      }
    }
  }

  // Non-redundancy: identical rows make blocks indistinguishable.
  bool has_duplicate_rows() const {
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j)
        if (p[i] == p[j]) return true;
    return false;
  }

  // P entries drawn i.i.d. Uniform(0,1), symmetrized.
  static SbmSpec uniform_random(int k, int block_size, std::uint64_t seed) {
    SbmSpec s;
    s.block_sizes.assign(k, block_size);
    s.seed = seed;
    s.p.assign(k, std::vector<double>(k, 0.0));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) s.p[i][j] = s.p[j][i] = u(rng);
    return s;
  }

  // Constant within-block and cross-block link probabilities.
  static SbmSpec planted(int k, int block_size, double within, double cross,
                         std::uint64_t seed) {
    SbmSpec s;
    s.block_sizes.assign(k, block_size);
    s.seed = seed;
    s.p.assign(k, std::vector<double>(k, cross));
    for (int i = 0; i < k; ++i) s.p[i][i] = within;
    return s;
  }
};

// --- ingestion ---------------------------------------------------------

// One "u v" pair per line, whitespace separated, '#' comments allowed.
inline Graph load_edge_list(std::istream& in, int n) {
  Graph g(n);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u)) continue; // blank line
    if (!(ls >> v))
      throw std::runtime_error("edge list line " + std::to_string(lineno) +
                               ": expected two node ids");
    long long extra;
    if (ls >> extra)
      throw std::runtime_error("edge list line " + std::to_string(lineno) +
                               ": trailing tokens");
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::runtime_error("edge list line " + std::to_string(lineno) +
                               ": node id out of range");
    if (u == v)
      throw std::runtime_error("edge list line " + std::to_string(lineno) +
                               ": self-loop");
    g.add_edge(static_cast<int>(u), static_cast<int>(v));
  }
  return g;
}

// CSV of a symmetric square matrix with entries in {-1,0,1}.  Diagonal is
// overridden to -1 regardless of input.
inline MaskedGraph load_ternary_matrix(std::istream& in) {
  std::vector<std::vector<int>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<int> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      std::istringstream cs(cell);
      int v;
      if (!(cs >> v) || (v != -1 && v != 0 && v != 1))
        throw std::runtime_error("ternary matrix line " + std::to_string(lineno) +
                                 ": entry outside {-1,0,1}");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw std::runtime_error("ternary matrix: empty input");
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != n)
      throw std::runtime_error("ternary matrix: not square");
  for (int i = 0; i < n; ++i) rows[i][i] = -1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rows[i][j] != rows[j][i])
        throw std::runtime_error("ternary matrix: asymmetric entries");
  BitMatrix d(n), b(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      b.set(i, j, rows[i][j] != -1);
      d.set(i, j, rows[i][j] == 1);
    }
  return MaskedGraph(std::move(d), std::move(b));
}

// --- generation and sampling -------------------------------------------

// Draw a graph from the block model; returns it with the planted partition.
inline std::pair<Graph, Partition> generate_sbm(const SbmSpec& spec) {
  spec.validate();
  const int k = spec.num_blocks();
  const int n = spec.num_nodes();
  if (n < 2) throw std::invalid_argument("generate_sbm: need at least 2 nodes");
  std::vector<int> label(n);
  int pos = 0;
  for (int b = 0; b < k; ++b)
    for (int c = 0; c < spec.block_sizes[b]; ++c) label[pos++] = b;
  Graph g(n);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (u(rng) < spec.p[label[i]][label[j]]) g.add_edge(i, j);
  return {std::move(g), Partition(k, std::move(label))};
}

struct SampleResult {
  std::vector<int> node_ids; // ascending ids in the parent graph
  Graph induced;
};

// Uniform sample of n0 distinct nodes and the induced subgraph.
inline SampleResult uniform_sample(const Graph& g, int n0, std::uint64_t seed) {
  const int n = g.num_nodes();
  if (n0 < 1 || n0 > n) throw std::invalid_argument("uniform_sample: n0 out of range");
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n0; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  ids.resize(n0);
  std::sort(ids.begin(), ids.end());
  Graph sub(n0);
  for (int a = 0; a < n0; ++a)
    for (int b = a + 1; b < n0; ++b)
      if (g.edge(ids[a], ids[b])) sub.add_edge(a, b);
  return {std::move(ids), std::move(sub)};
}

// Mark each unordered node pair missing independently with probability q.
inline MaskedGraph drop_links(const Graph& g, double q, std::uint64_t seed) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("drop_links: q outside [0,1]");
  const int n = g.num_nodes();
  BitMatrix d(n), b(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (u(rng) < q) continue; // pair lost
      b.set_sym(i, j, true);
      if (g.edge(i, j)) d.set_sym(i, j, true);
    }
  return MaskedGraph(std::move(d), std::move(b));
}

} // namespace regdec
