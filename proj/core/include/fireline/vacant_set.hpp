#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace fireline {

// Ordered set of integer sites in a fixed range [lo, hi], stored as a
// hierarchy of 64-bit occupancy words. Predecessor and successor queries
// cost O(log_64 n); range insertion costs O(range / 64 + log_64 n).
class VacantSet {
 public:
  VacantSet(std::int64_t lo, std::int64_t hi, bool full);

  [[nodiscard]] std::int64_t lo() const noexcept { return lo_; }
  [[nodiscard]] std::int64_t hi() const noexcept { return hi_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool empty() const noexcept { return size_ == 0; }

  [[nodiscard]] bool contains(std::int64_t site) const noexcept;
  // Return true when the set changed.
  bool insert(std::int64_t site) noexcept;
  bool erase(std::int64_t site) noexcept;
  void insert_range(std::int64_t first, std::int64_t last) noexcept;

  // Largest element <= site, smallest element >= site.
  [[nodiscard]] std::optional<std::int64_t> floor(std::int64_t site) const noexcept;
  [[nodiscard]] std::optional<std::int64_t> ceil(std::int64_t site) const noexcept;

  template <class F>
  void for_each(F&& f) const {
    const auto& bottom = levels_.front();
    for (std::size_t w = 0; w < bottom.size(); ++w) {
      std::uint64_t word = bottom[w];
      while (word != 0) {
        const int bit = __builtin_ctzll(word);
        f(lo_ + static_cast<std::int64_t>(w * 64 + bit));
        word &= word - 1;
      }
    }
  }

 private:
  void set_bit(std::size_t pos) noexcept;
  void clear_bit(std::size_t pos) noexcept;
  [[nodiscard]] std::optional<std::size_t> prev_set(std::size_t pos) const noexcept;
  [[nodiscard]] std::optional<std::size_t> next_set(std::size_t pos) const noexcept;

  std::int64_t lo_;
  std::int64_t hi_;
  std::size_t size_ = 0;
  // levels_[0] holds one bit per site; bit j of levels_[k+1] is set iff word j
  // of levels_[k] is non-zero.
  std::vector<std::vector<std::uint64_t>> levels_;
};

}  // namespace fireline
