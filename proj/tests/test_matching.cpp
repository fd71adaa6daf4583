#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "regdec/matching.hpp"

using namespace regdec;

TEST_CASE("min_cost_assignment matches brute force on random matrices") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> kd(1, 5);
  for (int t = 0; t < 200; ++t) {
    const int k = kd(rng);
    std::vector<std::vector<double>> cost(k, std::vector<double>(k));
    for (auto& row : cost)
      for (double& c : row) c = u(rng);
    const auto assign = min_cost_assignment(cost);
    double got = 0;
    for (int i = 0; i < k; ++i) got += cost[i][assign[i]];
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double c = 0;
      for (int i = 0; i < k; ++i) c += cost[i][perm[i]];
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(got == Catch::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("match_partitions is 1.0 on a relabeling") {
  Partition a(3, {0, 0, 1, 1, 2, 2});
  Partition b(3, {2, 2, 0, 0, 1, 1});
  CHECK(match_partitions(a, b).agreement == 1.0);
}

TEST_CASE("match_partitions counts the best overlap") {
  Partition a(2, {0, 0, 0, 1, 1, 1});
  Partition b(2, {0, 0, 1, 1, 1, 1});
  CHECK(match_partitions(a, b).agreement == Catch::Approx(5.0 / 6.0));
}

TEST_CASE("match_partitions handles unequal block counts") {
  Partition a(3, {0, 1, 2, 0});
  Partition b(2, {0, 1, 1, 0});
  const MatchResult r = match_partitions(a, b);
  CHECK(r.agreement >= 0.75);
}
