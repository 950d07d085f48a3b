#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace backresp {

/// Set of players as a bitset over a fixed player count, with its
/// population count kept alongside.
class Coalition {
 public:
  Coalition() = default;
  explicit Coalition(std::size_t player_count)
      : players_(player_count), words_((player_count + 63) / 64, 0) {}
  Coalition(std::size_t player_count, std::initializer_list<std::size_t> members) : Coalition(player_count) {
    for (auto m : members) insert(m);
  }

  /// Low `player_count` bits of `mask`; player_count <= 64.
  static Coalition from_mask(std::size_t player_count, std::uint64_t mask) {
    Coalition c(player_count);
    if (player_count < 64) mask &= (std::uint64_t{1} << player_count) - 1;
    if (!c.words_.empty()) c.words_[0] = mask;
    c.size_ = static_cast<std::size_t>(std::popcount(mask));
    return c;
  }

  static Coalition full(std::size_t player_count) {
    Coalition c(player_count);
    for (std::size_t i = 0; i < player_count; ++i) c.insert(i);
    return c;
  }

  std::size_t player_count() const noexcept { return players_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool contains(std::size_t p) const noexcept { return (words_[p >> 6] >> (p & 63)) & 1u; }

  void insert(std::size_t p) noexcept {
    auto& w = words_[p >> 6];
    const auto bit = std::uint64_t{1} << (p & 63);
    size_ += (w & bit) == 0;
    w |= bit;
  }

  void erase(std::size_t p) noexcept {
    auto& w = words_[p >> 6];
    const auto bit = std::uint64_t{1} << (p & 63);
    size_ -= (w & bit) != 0;
    w &= ~bit;
  }

  Coalition with(std::size_t p) const {
    Coalition c = *this;
    c.insert(p);
    return c;
  }

  bool subset_of(const Coalition& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
  }

  /// Only meaningful for player_count <= 64.
  std::uint64_t mask() const noexcept { return words_.empty() ? 0 : words_[0]; }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    out.reserve(size_);
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (auto bits = words_[w]; bits != 0; bits &= bits - 1) {
        out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      }
    }
    return out;
  }

  friend bool operator==(const Coalition&, const Coalition&) = default;

 private:
  std::size_t players_ = 0;
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace backresp
