#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace jetviber {

inline constexpr std::size_t kMaxIndices = 6;

/// Multi-index over the independent variables (or, for function symbols,
/// over argument positions). Stored as a dense count vector; zero counts
/// are implicit.
class MultiIndex {
 public:
  MultiIndex() = default;

  static MultiIndex unit(std::size_t var, int count = 1) {
    MultiIndex m;
    m.counts_[var] = static_cast<std::uint8_t>(count);
    return m;
  }

  int operator[](std::size_t var) const { return counts_[var]; }
  void set(std::size_t var, int count) { counts_[var] = static_cast<std::uint8_t>(count); }
  void bump(std::size_t var, int by = 1) { counts_[var] = static_cast<std::uint8_t>(counts_[var] + by); }

  int order() const {
    int n = 0;
    for (auto c : counts_) n += c;
    return n;
  }
  bool empty() const { return order() == 0; }

  /// Componentwise `*this <= other`.
  bool divides(const MultiIndex& other) const {
    for (std::size_t i = 0; i < kMaxIndices; ++i)
      if (counts_[i] > other.counts_[i]) return false;
    return true;
  }

  MultiIndex operator+(const MultiIndex& o) const {
    MultiIndex r;
    for (std::size_t i = 0; i < kMaxIndices; ++i)
      r.counts_[i] = static_cast<std::uint8_t>(counts_[i] + o.counts_[i]);
    return r;
  }
  /// Requires `o.divides(*this)`.
  MultiIndex operator-(const MultiIndex& o) const {
    MultiIndex r;
    for (std::size_t i = 0; i < kMaxIndices; ++i)
      r.counts_[i] = static_cast<std::uint8_t>(counts_[i] - o.counts_[i]);
    return r;
  }

  bool operator==(const MultiIndex&) const = default;

  /// Canonical order: total order first, then lexicographic on the sorted
  /// letter sequence (so xx < xy < yy).
  std::strong_ordering operator<=>(const MultiIndex& o) const {
    if (auto c = order() <=> o.order(); c != 0) return c;
    for (std::size_t i = 0; i < kMaxIndices; ++i)
      if (counts_[i] != o.counts_[i]) return o.counts_[i] <=> counts_[i];
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t h = 0;
    for (auto c : counts_) h = h * 31 + c;
    return h;
  }

  const std::array<std::uint8_t, kMaxIndices>& counts() const { return counts_; }

 private:
  std::array<std::uint8_t, kMaxIndices> counts_{};
};

/// Product of binomials prod_i C(sigma_i, rho_i).
long multi_binomial(const MultiIndex& sigma, const MultiIndex& rho);

/// Calls `fn(rho)` for every rho <= sigma componentwise.
void for_each_sub_index(const MultiIndex& sigma, const std::function<void(const MultiIndex&)>& fn);

}  // namespace jetviber
