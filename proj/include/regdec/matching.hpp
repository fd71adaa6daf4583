#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "regdec/graph.hpp"

namespace regdec {

// Minimum-cost assignment on a square cost matrix (Hungarian algorithm with
// potentials, O(k^3)).  Returns the column assigned to each row.
inline std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("min_cost_assignment: matrix not square");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

struct MatchResult {
  double agreement = 0.0;          // fraction of nodes matched after relabeling
  std::vector<int> pred_to_truth;  // optimal relabeling of predicted blocks
};

// Best label agreement between a predicted and a reference partition over
// all block relabelings.
inline MatchResult match_partitions(const Partition& pred, const Partition& truth) {
  if (pred.n != truth.n) throw std::invalid_argument("match_partitions: size mismatch");
  const int k = std::max(pred.k, truth.k);
  std::vector<std::vector<long long>> confusion(k, std::vector<long long>(k, 0));
  for (int i = 0; i < pred.n; ++i) ++confusion[pred.assignment[i]][truth.assignment[i]];
  std::vector<std::vector<double>> cost(k, std::vector<double>(k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) cost[a][b] = -static_cast<double>(confusion[a][b]);
  MatchResult r;
  r.pred_to_truth = min_cost_assignment(cost);
  long long agree = 0;
  for (int a = 0; a < k; ++a) agree += confusion[a][r.pred_to_truth[a]];
  r.agreement = static_cast<double>(agree) / pred.n;
  return r;
}

} // namespace regdec
