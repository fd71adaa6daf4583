#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "regdec/codelength.hpp"
#include "regdec/graph.hpp"
#include "regdec/matching.hpp"
#include "regdec/solver.hpp"

namespace regdec {

// Sample-derived model driving the constant-cost block classifier.
struct ClassifierModel {
  int k = 0;
  std::vector<long long> block_sizes;   // sample block sizes
  std::vector<double> rel_sizes;        // block_sizes / n0
  std::vector<std::vector<double>> d;   // clamped block densities
  std::vector<int> sample_ids;          // node ids in the parent graph
  std::vector<int> sample_labels;       // block of each sample node
  double epsilon = 0.0;

  int sample_size() const { return static_cast<int>(sample_ids.size()); }
};

// Link counts from an out-of-sample node into each sample block.
struct LinkProfile {
  std::vector<long long> e;
};

inline ClassifierModel build_model(const Graph& sample_graph, const Partition& part,
                                   std::vector<int> sample_ids = {},
                                   double eps = 0.0) {
  if (part.n != sample_graph.num_nodes())
    throw std::invalid_argument("build_model: size mismatch");
  if (part.has_empty_block())
    throw std::invalid_argument("build_model: empty block");
  ClassifierModel m;
  m.k = part.k;
  m.epsilon = eps > 0.0 ? eps : default_clamp_epsilon(part.n);
  const BlockStats stats = block_stats(sample_graph, part);
  m.block_sizes = stats.n_alpha;
  m.rel_sizes.resize(part.k);
  for (int a = 0; a < part.k; ++a)
    m.rel_sizes[a] = static_cast<double>(stats.n_alpha[a]) / part.n;
  m.d.assign(part.k, std::vector<double>(part.k));
  for (int a = 0; a < part.k; ++a)
    for (int b = 0; b < part.k; ++b)
      m.d[a][b] = std::clamp(stats.p[a][b], m.epsilon, 1.0 - m.epsilon);
  if (sample_ids.empty()) {
    sample_ids.resize(part.n);
    std::iota(sample_ids.begin(), sample_ids.end(), 0);
  } else if (static_cast<int>(sample_ids.size()) != part.n) {
    throw std::invalid_argument("build_model: sample id count mismatch");
  }
  m.sample_ids = std::move(sample_ids);
  m.sample_labels = part.assignment;
  return m;
}

// Count links from node v (outside the sample) into each sample block.
inline LinkProfile link_profile(int v, const Graph& g, const ClassifierModel& m) {
  LinkProfile p;
  p.e.assign(m.k, 0);
  for (std::size_t s = 0; s < m.sample_ids.size(); ++s) {
    const int u = m.sample_ids[s];
    if (u == v) throw std::invalid_argument("link_profile: node is inside the sample");
    if (g.edge(v, u)) ++p.e[m.sample_labels[s]];
  }
  return p;
}

struct ClassifyResult {
  int block = 0;
  std::vector<double> costs;
};

// Maximum-likelihood block for a link profile: per candidate block, the
// Bernoulli code length of the profile under the model densities.
inline ClassifyResult classify(const LinkProfile& p, const ClassifierModel& m) {
  if (static_cast<int>(p.e.size()) != m.k)
    throw std::invalid_argument("classify: profile/model mismatch");
  ClassifyResult r;
  r.costs.assign(m.k, 0.0);
  for (int a = 0; a < m.k; ++a) {
    double c = 0.0;
    for (int j = 0; j < m.k; ++j) {
      const double ej = static_cast<double>(p.e[j]);
      c += -ej * std::log2(m.d[j][a]) -
           (static_cast<double>(m.block_sizes[j]) - ej) * std::log2(1.0 - m.d[j][a]);
    }
    r.costs[a] = c;
  }
  r.block = static_cast<int>(std::min_element(r.costs.begin(), r.costs.end()) -
                             r.costs.begin());
  return r;
}

// KL divergence between Bernoulli(q) and Bernoulli(p), in bits.
inline double kl_bernoulli(double q, double p) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("kl_bernoulli: q outside [0,1]");
  if (p <= 0.0 || p >= 1.0) {
    if (q == p) return 0.0;
    throw std::invalid_argument("kl_bernoulli: p outside (0,1)");
  }
  double s = 0.0;
  if (q > 0.0) s += q * std::log2(q / p);
  if (q < 1.0) s += (1.0 - q) * std::log2((1.0 - q) / (1.0 - p));
  return s;
}

namespace detail {

inline int argmin_kl(const std::vector<double>& q, const std::vector<double>& r,
                     const std::vector<std::vector<double>>& p) {
  const int k = static_cast<int>(q.size());
  int best = 0;
  double bv = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    double c = 0.0;
    for (int i = 0; i < k; ++i) c += r[i] * kl_bernoulli(q[i], p[j][i]);
    if (c < bv) {
      bv = c;
      best = j;
    }
  }
  return best;
}

} // namespace detail

// Size-weighted divergence form of the classifier; same argmin as classify.
inline int classify_kl(const LinkProfile& p, const ClassifierModel& m) {
  std::vector<double> q(m.k);
  for (int i = 0; i < m.k; ++i)
    q[i] = static_cast<double>(p.e[i]) / static_cast<double>(m.block_sizes[i]);
  return detail::argmin_kl(q, m.rel_sizes, m.d);
}

// Classification under the generator's true densities and block fractions.
inline int classify_ideal(const LinkProfile& p, const std::vector<long long>& sample_sizes,
                          const std::vector<std::vector<double>>& true_p,
                          const std::vector<double>& true_r, double eps) {
  const int k = static_cast<int>(sample_sizes.size());
  std::vector<double> q(k);
  for (int i = 0; i < k; ++i)
    q[i] = static_cast<double>(p.e[i]) / static_cast<double>(sample_sizes[i]);
  std::vector<std::vector<double>> pc(k, std::vector<double>(k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) pc[a][b] = std::clamp(true_p[a][b], eps, 1.0 - eps);
  return detail::argmin_kl(q, true_r, pc);
}

// Label every node of the parent graph: sample nodes keep their fitted
// labels, the rest are classified from their link profiles.
inline Partition extend_partition(const Graph& big, const ClassifierModel& m) {
  const int n = big.num_nodes();
  std::vector<int> labels(n, -1);
  std::unordered_set<int> in_sample(m.sample_ids.begin(), m.sample_ids.end());
  for (std::size_t s = 0; s < m.sample_ids.size(); ++s)
    labels[m.sample_ids[s]] = m.sample_labels[s];
  for (int v = 0; v < n; ++v) {
    if (in_sample.count(v)) continue;
    labels[v] = classify(link_profile(v, big, m), m).block;
  }
  return Partition(m.k, std::move(labels));
}

struct SuccessPoint {
  int n0 = 0;
  int trials = 0;
  double success = 0.0;
};

// Classification accuracy as a function of sample size.  Per trial: draw a
// graph from the spec, sample n0 nodes, label the sample, build the model,
// then classify fresh out-of-sample nodes against their planted labels.
// Sample labels come from the planted partition by default; with
// fit_sample set, the sample is labeled by the greedy solver instead
// (fitted blocks are matched to planted ones before scoring), so a sample
// too small to fit shows up as near-random accuracy.  Blocks absent from
// the sample are unreachable and their instances count as errors.
inline std::vector<SuccessPoint> success_curve(const SbmSpec& spec,
                                               const std::vector<int>& sample_sizes,
                                               int trials, int instances,
                                               std::uint64_t seed,
                                               bool fit_sample = false,
                                               const SolverConfig& solver_cfg = {}) {
  spec.validate();
  const int big_n = spec.num_nodes();
  std::vector<SuccessPoint> out;
  for (int n0 : sample_sizes) {
    if (n0 > big_n) throw std::invalid_argument("success_curve: n0 exceeds graph size");
    long long correct = 0, total = 0;
    for (int t = 0; t < trials; ++t) {
      SbmSpec s = spec;
      s.seed = detail::mix_seed(seed, n0, t);
      auto [g, planted] = generate_sbm(s);
      SampleResult sample = uniform_sample(g, n0, detail::mix_seed(seed, n0, t) + 1);

      std::vector<int> planted_sample(n0);
      for (int i = 0; i < n0; ++i)
        planted_sample[i] = planted.assignment[sample.node_ids[i]];

      std::vector<int> sample_labels;
      if (fit_sample) {
        // Full pipeline: the block structure of the sample comes from the
        // MDL scan, so an undersized sample yields too few blocks and the
        // accuracy degrades toward chance.
        SolverConfig cfg = solver_cfg;
        cfg.seed = detail::mix_seed(seed, n0, t) + 3;
        cfg.k_max = std::min(cfg.k_max, n0);
        sample_labels = greedy_mdl(sample.induced, cfg).partition.assignment;
      } else {
        sample_labels = planted_sample;
      }

      // Compact over non-empty blocks, then map each block to the planted
      // block it best overlaps on the sample.
      std::vector<int> remap(std::max(spec.num_blocks(), n0), -1);
      int kk = 0;
      for (int i = 0; i < n0; ++i)
        if (remap[sample_labels[i]] < 0) remap[sample_labels[i]] = kk++;
      std::vector<int> compact(n0);
      for (int i = 0; i < n0; ++i) compact[i] = remap[sample_labels[i]];
      const Partition sample_part(std::max(kk, 1), compact);
      const MatchResult match =
          match_partitions(sample_part, Partition(spec.num_blocks(), planted_sample));
      ClassifierModel model = build_model(sample.induced, sample_part, sample.node_ids);

      // Fresh instances: non-sample nodes in a seeded random order.
      std::vector<char> in_sample(big_n, 0);
      for (int id : sample.node_ids) in_sample[id] = 1;
      std::vector<int> pool;
      for (int v = 0; v < big_n; ++v)
        if (!in_sample[v]) pool.push_back(v);
      std::mt19937_64 rng(detail::mix_seed(seed, n0, t) + 2);
      std::shuffle(pool.begin(), pool.end(), rng);
      const int m = std::min<int>(instances, static_cast<int>(pool.size()));
      for (int idx = 0; idx < m; ++idx) {
        const int v = pool[idx];
        const int pred =
            match.pred_to_truth[classify(link_profile(v, g, model), model).block];
        correct += (pred == planted.assignment[v]);
        ++total;
      }
    }
    out.push_back({n0, trials, total > 0 ? static_cast<double>(correct) / total : 0.0});
  }
  return out;
}

} // namespace regdec
