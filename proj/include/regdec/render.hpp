#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "regdec/graph.hpp"

namespace regdec {

inline constexpr int kMaxRenderNodes = 1 << 14;

namespace detail {

// Nodes sorted by (block, id): blocks appear as contiguous squares.
inline std::vector<int> block_order(const Partition& part) {
  std::vector<int> order(part.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return part.assignment[a] < part.assignment[b];
  });
  return order;
}

inline void write_pgm_header(std::ostream& os, int n) {
  os << "P5\n" << n << " " << n << "\n255\n";
}

} // namespace detail

// Adjacency heatmap, one pixel per entry: black = link, white = non-link.
inline void render_pgm(std::ostream& os, const Graph& g, const Partition& part) {
  if (part.n != g.num_nodes()) throw std::invalid_argument("render_pgm: size mismatch");
  if (g.num_nodes() > kMaxRenderNodes)
    throw std::invalid_argument("render_pgm: graph too large, subsample first");
  const auto order = detail::block_order(part);
  detail::write_pgm_header(os, part.n);
  std::vector<unsigned char> row(part.n);
  for (int i = 0; i < part.n; ++i) {
    for (int j = 0; j < part.n; ++j)
      row[j] = g.edge(order[i], order[j]) ? 0 : 255;
    os.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
}

// Masked variant: gray marks pairs without link data.
inline void render_pgm(std::ostream& os, const MaskedGraph& g, const Partition& part) {
  if (part.n != g.num_nodes()) throw std::invalid_argument("render_pgm: size mismatch");
  if (g.num_nodes() > kMaxRenderNodes)
    throw std::invalid_argument("render_pgm: graph too large, subsample first");
  const auto order = detail::block_order(part);
  detail::write_pgm_header(os, part.n);
  std::vector<unsigned char> row(part.n);
  for (int i = 0; i < part.n; ++i) {
    for (int j = 0; j < part.n; ++j) {
      const int v = g.raw(order[i], order[j]);
      row[j] = v == 1 ? 0 : (v == 0 ? 255 : 128);
    }
    os.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
}

} // namespace regdec
