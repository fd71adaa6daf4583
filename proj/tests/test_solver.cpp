#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "regdec/matching.hpp"
#include "regdec/solver.hpp"

using namespace regdec;

namespace {

Graph er_graph(int n, double p, std::uint64_t seed) {
  Graph g(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (u(rng) < p) g.add_edge(i, j);
  return g;
}

// Two disjoint complete graphs of the given size.
Graph two_cliques(int size) {
  Graph g(2 * size);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j) g.add_edge(c * size + i, c * size + j);
  return g;
}

Partition clique_partition(int size) {
  std::vector<int> a(2 * size, 0);
  for (int i = size; i < 2 * size; ++i) a[i] = 1;
  return Partition(2, a);
}

// Scalar reference for the reassignment costs: explicit loop over the other
// nodes, densities recomputed by pair counting.
double naive_cost(const Graph& g, const Partition& part, int node, int target,
                  double eps) {
  const int n = part.n;
  const int k = part.k;
  std::vector<std::vector<double>> links(k, std::vector<double>(k, 0));
  std::vector<std::vector<double>> cnt(k, std::vector<double>(k, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int a = part.assignment[i], b = part.assignment[j];
      cnt[a][b] += 1;
      cnt[b][a] += (a != b);
      if (g.edge(i, j)) {
        links[a][b] += 1;
        links[b][a] += (a != b);
      }
    }
  std::vector<std::vector<double>> p(k, std::vector<double>(k, 0));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      p[a][b] = std::clamp(cnt[a][b] > 0 ? links[a][b] / cnt[a][b] : 0.0, eps, 1.0 - eps);
  double c = 0;
  for (int j = 0; j < n; ++j) {
    if (j == node) continue;
    const double pj = p[part.assignment[j]][target];
    c += g.edge(node, j) ? -std::log2(pj) : -std::log2(1.0 - pj);
  }
  return c;
}

// All surjective assignments of n nodes onto k blocks.
void enumerate_partitions(int n, int k, const std::function<void(const Partition&)>& f) {
  std::vector<int> a(n, 0);
  for (;;) {
    Partition p(k, a);
    if (!p.has_empty_block()) f(p);
    int i = n - 1;
    while (i >= 0 && a[i] == k - 1) a[i--] = 0;
    if (i < 0) break;
    ++a[i];
  }
}

double likelihood_cost(const Graph& g, const Partition& part, double eps) {
  const LocalCosts lc = local_cost_matrix(g, part, eps);
  double total = 0;
  for (int i = 0; i < lc.n; ++i) {
    double best = lc.at(i, 0);
    for (int a = 1; a < lc.k; ++a) best = std::min(best, lc.at(i, a));
    total += best;
  }
  return total;
}

} // namespace

TEST_CASE("local_cost_matrix favors the planted clique") {
  const Graph g = two_cliques(4);
  const Partition part = clique_partition(4);
  const LocalCosts lc = local_cost_matrix(g, part, 1e-6);
  for (int i = 0; i < 8; ++i) {
    const int mine = part.assignment[i];
    CHECK(lc.at(i, mine) < lc.at(i, 1 - mine));
  }
}

TEST_CASE("local_cost_matrix with k=1 is a single column") {
  const Graph g = er_graph(10, 0.5, 4);
  const LocalCosts lc = local_cost_matrix(g, Partition(1, std::vector<int>(10, 0)),
                                          default_clamp_epsilon(10));
  CHECK(lc.k == 1);
  CHECK(lc.n == 10);
}

TEST_CASE("local_cost_matrix agrees with the scalar loop") {
  const Graph g = er_graph(30, 0.5, 100);
  std::vector<int> a(30);
  for (int i = 0; i < 30; ++i) a[i] = i % 3;
  const Partition part(3, a);
  const double eps = default_clamp_epsilon(30);
  const LocalCosts lc = local_cost_matrix(g, part, eps);
  for (int i = 0; i < 30; ++i)
    for (int t = 0; t < 3; ++t) {
      const double ref = naive_cost(g, part, i, t, eps);
      CHECK(lc.at(i, t) == Catch::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("phi_step fixes the planted clique partition") {
  const Graph g = two_cliques(4);
  const Partition part = clique_partition(4);
  CHECK(phi_step(g, part, 1e-6) == part);
}

TEST_CASE("phi_step keeps an all-in-one-block state under inf tie-breaking") {
  const Graph g = er_graph(12, 0.5, 8);
  const Partition part(2, std::vector<int>(12, 0));
  const Partition next = phi_step(g, part, default_clamp_epsilon(12));
  CHECK(next.assignment == std::vector<int>(12, 0));
}

TEST_CASE("phi_step on a single node is the identity") {
  Graph g(1);
  const Partition part(1, {0});
  CHECK(phi_step(g, part, 0.25) == part);
}

TEST_CASE("phi_step fixed points are idempotent") {
  const Graph g = er_graph(20, 0.4, 55);
  const double eps = default_clamp_epsilon(20);
  std::vector<int> a(20);
  for (int i = 0; i < 20; ++i) a[i] = i % 2;
  Partition cur(2, a);
  for (int it = 0; it < 50; ++it) {
    Partition next = phi_step(g, cur, eps);
    if (next == cur) break;
    cur = next;
  }
  const Partition fixed = phi_step(g, cur, eps);
  if (fixed == cur) CHECK(phi_step(g, fixed, eps) == fixed);
}

TEST_CASE("argmax_k recovers two cliques") {
  const Graph g = two_cliques(8);
  SolverConfig cfg;
  cfg.restarts = 20;
  cfg.seed = 3;
  const ArgmaxResult r = argmax_k(g, 2, cfg);
  CHECK(match_partitions(r.partition, clique_partition(8)).agreement == 1.0);
}

TEST_CASE("argmax_k with k=1 has no choice") {
  const Graph g = er_graph(15, 0.5, 1);
  SolverConfig cfg;
  cfg.restarts = 3;
  const ArgmaxResult r = argmax_k(g, 1, cfg);
  CHECK(r.partition.assignment == std::vector<int>(15, 0));
  CHECK(r.cost == Catch::Approx(likelihood_cost(g, r.partition,
                                                default_clamp_epsilon(15)))
                      .epsilon(1e-9));
}

TEST_CASE("argmax_k matches exhaustive search on the 6-path") {
  Graph g(6);
  for (int i = 0; i < 5; ++i) g.add_edge(i, i + 1);
  SolverConfig cfg;
  cfg.restarts = 200;
  cfg.seed = 12;
  const double eps = default_clamp_epsilon(6);
  cfg.epsilon = eps;
  const ArgmaxResult r = argmax_k(g, 2, cfg);
  double best = std::numeric_limits<double>::infinity();
  enumerate_partitions(6, 2, [&](const Partition& p) {
    best = std::min(best, likelihood_cost(g, p, eps));
  });
  CHECK(r.cost == Catch::Approx(best).epsilon(1e-9));
}

TEST_CASE("argmax_k is deterministic under a fixed seed") {
  const Graph g = er_graph(25, 0.4, 77);
  SolverConfig cfg;
  cfg.restarts = 8;
  cfg.seed = 5;
  const ArgmaxResult a = argmax_k(g, 3, cfg);
  const ArgmaxResult b = argmax_k(g, 3, cfg);
  CHECK(a.partition == b.partition);
  CHECK(a.restart_costs == b.restart_costs);
}

TEST_CASE("argmax_k recorded cost is reproducible from the partition") {
  const Graph g = er_graph(25, 0.4, 78);
  SolverConfig cfg;
  cfg.restarts = 5;
  cfg.seed = 9;
  const ArgmaxResult r = argmax_k(g, 3, cfg);
  const double re = likelihood_cost(g, r.partition, default_clamp_epsilon(25));
  CHECK(r.cost == Catch::Approx(re).epsilon(1e-9));
}

TEST_CASE("argmax_k masked path with full mask is bit-identical") {
  const Graph g = er_graph(20, 0.5, 31);
  const MaskedGraph m = MaskedGraph::from_graph(g);
  SolverConfig cfg;
  cfg.restarts = 5;
  cfg.seed = 21;
  const ArgmaxResult a = argmax_k(g, 3, cfg);
  const ArgmaxResult b = argmax_k(m, 3, cfg);
  CHECK(a.partition == b.partition);
  CHECK(a.cost == b.cost);
  CHECK(a.restart_costs == b.restart_costs);
}

TEST_CASE("argmax_k rejects bad arguments") {
  const Graph g = er_graph(5, 0.5, 2);
  SolverConfig cfg;
  CHECK_THROWS_AS(argmax_k(g, 0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(argmax_k(g, 6, cfg), std::invalid_argument);
  cfg.restarts = 0;
  CHECK_THROWS_AS(argmax_k(g, 2, cfg), std::invalid_argument);
}

TEST_CASE("greedy_mdl finds the planted number of blocks") {
  const SbmSpec s = SbmSpec::planted(4, 100, 0.8, 0.1, 404);
  auto [g, planted] = generate_sbm(s);
  SolverConfig cfg;
  cfg.restarts = 10;
  cfg.k_min = 1;
  cfg.k_max = 8;
  cfg.seed = 11;
  const FitResult fit = greedy_mdl(g, cfg);
  CHECK(fit.k_star == 4);
  CHECK(match_partitions(fit.partition, planted).agreement >= 0.99);
}

TEST_CASE("greedy_mdl keeps one block for the edgeless graph") {
  Graph g(12);
  SolverConfig cfg;
  cfg.restarts = 5;
  cfg.k_min = 1;
  cfg.k_max = 3;
  const FitResult fit = greedy_mdl(g, cfg);
  CHECK(fit.k_star == 1);
}

TEST_CASE("greedy_mdl keeps one block for the complete graph") {
  Graph g(5);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) g.add_edge(i, j);
  SolverConfig cfg;
  cfg.restarts = 5;
  cfg.k_min = 1;
  cfg.k_max = 2;
  const FitResult fit = greedy_mdl(g, cfg);
  CHECK(fit.k_star == 1);
}

TEST_CASE("greedy_mdl k_star attains the minimum of the scanned totals") {
  const Graph g = er_graph(40, 0.35, 61);
  SolverConfig cfg;
  cfg.restarts = 5;
  cfg.k_min = 1;
  cfg.k_max = 5;
  const FitResult fit = greedy_mdl(g, cfg);
  double best = std::numeric_limits<double>::infinity();
  int best_k = 0;
  for (auto [k, total] : fit.per_k_totals)
    if (total < best) {
      best = total;
      best_k = k;
    }
  CHECK(fit.k_star == best_k);
  CHECK(fit.report.total_bits == best);
}
