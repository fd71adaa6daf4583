#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace regdec {

// Dense symmetric bit storage, row-major, 64-bit words per row.
class BitMatrix {
public:
  BitMatrix() = default;
  explicit BitMatrix(int n)
      : n_(n), words_(static_cast<std::size_t>(n + 63) / 64),
        w_(static_cast<std::size_t>(n) * words_, 0) {}

  int size() const { return n_; }
  std::size_t words_per_row() const { return words_; }

  bool get(int i, int j) const {
    return (row(i)[static_cast<std::size_t>(j) >> 6] >> (j & 63)) & 1u;
  }
  void set(int i, int j, bool v) {
    std::uint64_t& w = w_[static_cast<std::size_t>(i) * words_ +
                          (static_cast<std::size_t>(j) >> 6)];
    const std::uint64_t bit = std::uint64_t{1} << (j & 63);
    if (v)
      w |= bit;
    else
      w &= ~bit;
  }
  // Symmetric set.
  void set_sym(int i, int j, bool v) {
    set(i, j, v);
    set(j, i, v);
  }

  const std::uint64_t* row(int i) const {
    return w_.data() + static_cast<std::size_t>(i) * words_;
  }

  // Number of set bits in row i restricted to the given mask (words_ words).
  int row_and_count(int i, const std::uint64_t* mask) const {
    const std::uint64_t* r = row(i);
    int c = 0;
    for (std::size_t w = 0; w < words_; ++w) c += std::popcount(r[w] & mask[w]);
    return c;
  }

  int row_count(int i) const {
    const std::uint64_t* r = row(i);
    int c = 0;
    for (std::size_t w = 0; w < words_; ++w) c += std::popcount(r[w]);
    return c;
  }

  bool operator==(const BitMatrix& o) const {
    return n_ == o.n_ && w_ == o.w_;
  }

private:
  int n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> w_;
};

} // namespace regdec
