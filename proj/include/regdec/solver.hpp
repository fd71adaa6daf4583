#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "regdec/codelength.hpp"
#include "regdec/graph.hpp"

namespace regdec {

struct SolverConfig {
  int restarts = 20;
  int max_inner_iters = 100;
  int k_min = 1;
  int k_max = 25; // clamped to n
  bool stop_at_first_minimum = false;
  std::uint64_t seed = 0;
  double epsilon = 0.0; // 0 -> 1/(2 C(n,2))
  int threads = 0;      // 0 -> hardware concurrency

  void validate() const {
    if (restarts < 1) throw std::invalid_argument("SolverConfig: restarts must be >= 1");
    if (max_inner_iters < 1)
      throw std::invalid_argument("SolverConfig: max_inner_iters must be >= 1");
    if (k_min < 1 || k_max < k_min)
      throw std::invalid_argument("SolverConfig: bad k range");
    if (epsilon < 0.0 || epsilon >= 0.5)
      throw std::invalid_argument("SolverConfig: epsilon outside [0, 0.5)");
  }
};

// Density floor keeping log terms finite; below any achievable empirical
// density on n nodes.
inline double default_clamp_epsilon(int n) {
  return n > 1 ? 1.0 / (static_cast<double>(n) * (n - 1)) : 0.25;
}

// Row-major n x k matrix of per-node reassignment costs.
struct LocalCosts {
  int n = 0;
  int k = 0;
  std::vector<double> c;
  double at(int i, int a) const { return c[static_cast<std::size_t>(i) * k + a]; }
};

namespace detail {

struct LogTables {
  // lp[b][a] = log2 of clamped density, lq its complement
  std::vector<std::vector<double>> lp, lq;
};

inline LogTables log_tables(const BlockStats& stats, double eps) {
  const int k = stats.k;
  LogTables t;
  t.lp.assign(k, std::vector<double>(k));
  t.lq.assign(k, std::vector<double>(k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const double p = std::clamp(stats.p[a][b], eps, 1.0 - eps);
      t.lp[a][b] = std::log2(p);
      t.lq[a][b] = std::log2(1.0 - p);
    }
  return t;
}

template <class GraphT>
LocalCosts local_costs_impl(const GraphT& g, const Partition& part,
                            const BlockStats& stats, double eps) {
  constexpr bool masked = std::is_same_v<GraphT, MaskedGraph>;
  const int n = part.n;
  const int k = part.k;
  const auto tables = log_tables(stats, eps);
  std::size_t words;
  if constexpr (masked)
    words = g.mask().words_per_row();
  else
    words = g.adjacency().words_per_row();
  const auto masks = detail::block_masks(part, words);
  LocalCosts out;
  out.n = n;
  out.k = k;
  out.c.assign(static_cast<std::size_t>(n) * k, 0.0);
  std::vector<double> e(k), m(k), scale(k);
  for (int i = 0; i < n; ++i) {
    for (int b = 0; b < k; ++b) {
      const double nbi = static_cast<double>(stats.n_alpha[b]) -
                         (part.assignment[i] == b ? 1.0 : 0.0);
      if constexpr (masked) {
        e[b] = g.observed_links().row_and_count(i, masks[b].data());
        m[b] = g.mask().row_and_count(i, masks[b].data());
        scale[b] = m[b] > 0.0 ? nbi / m[b] : 0.0;
      } else {
        e[b] = g.adjacency().row_and_count(i, masks[b].data());
        m[b] = nbi;
        scale[b] = 1.0;
      }
    }
    double* row = out.c.data() + static_cast<std::size_t>(i) * k;
    for (int a = 0; a < k; ++a) {
      double acc = 0.0;
      for (int b = 0; b < k; ++b)
        acc += scale[b] *
               (-e[b] * tables.lp[b][a] - (m[b] - e[b]) * tables.lq[b][a]);
      row[a] = acc;
    }
  }
  return out;
}

// Argmin per row with smallest-index tie-break, plus the summed row minima.
inline std::pair<Partition, double> argmin_rows(const LocalCosts& lc) {
  std::vector<int> a(lc.n);
  double total = 0.0;
  for (int i = 0; i < lc.n; ++i) {
    int best = 0;
    double bv = lc.at(i, 0);
    for (int j = 1; j < lc.k; ++j)
      if (lc.at(i, j) < bv) {
        bv = lc.at(i, j);
        best = j;
      }
    a[i] = best;
    total += bv;
  }
  return {Partition(lc.k, std::move(a)), total};
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (a + 1) + 0xBF58476D1CE4E5B9ULL * (b + 1);
  x ^= x >> 30;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

} // namespace detail

template <class GraphT>
LocalCosts local_cost_matrix(const GraphT& g, const Partition& part, double eps) {
  const BlockStats stats = block_stats(g, part);
  return detail::local_costs_impl(g, part, stats, eps);
}

// Simultaneous reassignment of every node to its cheapest block.  The result
// may contain empty blocks.
template <class GraphT>
Partition phi_step(const GraphT& g, const Partition& part, double eps) {
  return detail::argmin_rows(local_cost_matrix(g, part, eps)).first;
}

struct ArgmaxResult {
  Partition partition{1, {0}};
  double cost = 0.0;                 // sum of row minima at the kept partition
  std::vector<double> restart_costs; // one per restart
  int iterations_used = 0;           // inner iterations, summed over restarts
};

// Multi-restart greedy search for the best k-block partition.  Each restart
// iterates the reassignment map from a random non-degenerate start until a
// fixed point, an iteration cap, or a repeated cost (2-cycles of the
// simultaneous update).  The best partition seen is kept.
template <class GraphT>
ArgmaxResult argmax_k(const GraphT& g, int k, const SolverConfig& cfg) {
  cfg.validate();
  const int n = g.num_nodes();
  if (k < 1 || k > n) throw std::invalid_argument("argmax_k: k out of range");
  const double eps = cfg.epsilon > 0.0 ? cfg.epsilon : default_clamp_epsilon(n);

  struct Restart {
    Partition part{1, {0}};
    double cost = std::numeric_limits<double>::infinity();
    int iterations = 0;
  };

  auto run_one = [&](int r) {
    std::mt19937_64 rng(detail::mix_seed(cfg.seed, static_cast<std::uint64_t>(k), r));
    std::uniform_int_distribution<int> pick(0, k - 1);
    Partition cur(1, std::vector<int>{0});
    for (;;) {
      std::vector<int> a(n);
      for (int i = 0; i < n; ++i) a[i] = pick(rng);
      cur = Partition(k, std::move(a));
      if (!cur.has_empty_block()) break;
    }
    Restart best;
    std::vector<double> history;
    for (int it = 0; it < cfg.max_inner_iters; ++it) {
      auto [next, cost] = detail::argmin_rows(detail::local_costs_impl(
          g, cur, block_stats(g, cur), eps));
      best.iterations = it + 1;
      if (cost < best.cost) {
        best.cost = cost;
        best.part = cur;
      }
      if (next == cur) break; // fixed point
      const bool seen = std::any_of(history.begin(), history.end(), [&](double h) {
        return std::abs(h - cost) <= 1e-9 * std::max(1.0, std::abs(cost));
      });
      if (seen) break; // cycle
      history.push_back(cost);
      cur = std::move(next);
    }
    return best;
  };

  std::vector<Restart> results(cfg.restarts);
  int threads = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, cfg.restarts));
  if (threads == 1) {
    for (int r = 0; r < cfg.restarts; ++r) results[r] = run_one(r);
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      futs.push_back(std::async(std::launch::async, [&] {
        for (int r = next.fetch_add(1); r < cfg.restarts; r = next.fetch_add(1))
          results[r] = run_one(r);
      }));
    for (auto& f : futs) f.get();
  }

  ArgmaxResult out;
  int best = 0;
  for (int r = 1; r < cfg.restarts; ++r)
    if (results[r].cost < results[best].cost) best = r;
  out.partition = results[best].part;
  out.cost = results[best].cost;
  for (const auto& r : results) {
    out.restart_costs.push_back(r.cost);
    out.iterations_used += r.iterations;
  }
  return out;
}

struct FitResult {
  int k_star = 1;
  Partition partition{1, {0}};
  CodeLengthReport report;
  std::vector<std::pair<int, double>> per_k_totals;
  std::vector<double> restart_costs; // restarts of the winning k
  int iterations_used = 0;
  std::uint64_t seed = 0;
};

// Model-selection scan: fit each k in the range, compare full two-part
// totals, keep the smallest-total k (ties to the smaller k).
template <class GraphT>
FitResult greedy_mdl(const GraphT& g, const SolverConfig& cfg) {
  cfg.validate();
  const int n = g.num_nodes();
  const int k_lo = std::max(1, cfg.k_min);
  const int k_hi = std::min(cfg.k_max, n);
  if (k_lo > k_hi) throw std::invalid_argument("greedy_mdl: empty k range");

  FitResult fit;
  fit.seed = cfg.seed;
  double best_total = std::numeric_limits<double>::infinity();
  for (int k = k_lo; k <= k_hi; ++k) {
    ArgmaxResult ar = argmax_k(g, k, cfg);
    const CodeLengthReport rep = two_part_cost(block_stats(g, ar.partition), n);
    fit.per_k_totals.emplace_back(k, rep.total_bits);
    if (rep.total_bits < best_total) {
      best_total = rep.total_bits;
      fit.k_star = k;
      fit.partition = ar.partition;
      fit.report = rep;
      fit.restart_costs = std::move(ar.restart_costs);
      fit.iterations_used = ar.iterations_used;
    } else if (cfg.stop_at_first_minimum) {
      break;
    }
  }
  return fit;
}

} // namespace regdec
