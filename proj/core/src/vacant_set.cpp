#include "fireline/vacant_set.hpp"

#include "fireline/errors.hpp"

namespace fireline {

namespace {

constexpr std::uint64_t low_mask(int bits) noexcept {
  // Bits [0, bits] inclusive.
  return bits >= 63 ? ~0ULL : ((1ULL << (bits + 1)) - 1);
}

}  // namespace

VacantSet::VacantSet(std::int64_t lo, std::int64_t hi, bool full) : lo_(lo), hi_(hi) {
  if (hi < lo) throw ConfigError("VacantSet: empty site range");
  std::size_t n = static_cast<std::size_t>(hi - lo + 1);
  do {
    const std::size_t words = (n + 63) / 64;
    levels_.emplace_back(words, 0ULL);
    n = words;
  } while (n > 1);
  if (full) insert_range(lo, hi);
}

bool VacantSet::contains(std::int64_t site) const noexcept {
  if (site < lo_ || site > hi_) return false;
  const auto pos = static_cast<std::size_t>(site - lo_);
  return (levels_[0][pos / 64] >> (pos % 64)) & 1ULL;
}

void VacantSet::set_bit(std::size_t pos) noexcept {
  for (auto& level : levels_) {
    const bool was_zero = level[pos / 64] == 0;
    level[pos / 64] |= 1ULL << (pos % 64);
    if (!was_zero) return;
    pos /= 64;
  }
}

void VacantSet::clear_bit(std::size_t pos) noexcept {
  for (auto& level : levels_) {
    level[pos / 64] &= ~(1ULL << (pos % 64));
    if (level[pos / 64] != 0) return;
    pos /= 64;
  }
}

bool VacantSet::insert(std::int64_t site) noexcept {
  if (site < lo_ || site > hi_ || contains(site)) return false;
  set_bit(static_cast<std::size_t>(site - lo_));
  ++size_;
  return true;
}

bool VacantSet::erase(std::int64_t site) noexcept {
  if (!contains(site)) return false;
  clear_bit(static_cast<std::size_t>(site - lo_));
  --size_;
  return true;
}

void VacantSet::insert_range(std::int64_t first, std::int64_t last) noexcept {
  if (first < lo_) first = lo_;
  if (last > hi_) last = hi_;
  if (first > last) return;
  auto pos = static_cast<std::size_t>(first - lo_);
  const auto end = static_cast<std::size_t>(last - lo_);
  auto& bottom = levels_[0];
  while (pos <= end) {
    const std::size_t w = pos / 64;
    const int from = static_cast<int>(pos % 64);
    const int to = (w == end / 64) ? static_cast<int>(end % 64) : 63;
    const std::uint64_t mask = low_mask(to) & ~(from == 0 ? 0ULL : low_mask(from - 1));
    const std::uint64_t before = bottom[w];
    bottom[w] |= mask;
    size_ += static_cast<std::size_t>(__builtin_popcountll(bottom[w] & ~before));
    if (before == 0 && bottom[w] != 0) {
      // Propagate non-emptiness upward.
      std::size_t p = w;
      for (std::size_t k = 1; k < levels_.size(); ++k) {
        const bool was_zero = levels_[k][p / 64] == 0;
        levels_[k][p / 64] |= 1ULL << (p % 64);
        if (!was_zero) break;
        p /= 64;
      }
    }
    pos = (w + 1) * 64;
  }
}

std::optional<std::size_t> VacantSet::prev_set(std::size_t pos) const noexcept {
  // Largest set bit at index <= pos at level 0.
  std::size_t k = 0;
  std::size_t p = pos;
  // Climb until a word has a set bit at or below p.
  while (true) {
    const std::uint64_t word = levels_[k][p / 64] & low_mask(static_cast<int>(p % 64));
    if (word != 0) {
      p = (p / 64) * 64 + (63 - static_cast<std::size_t>(__builtin_clzll(word)));
      break;
    }
    if (p / 64 == 0) return std::nullopt;
    p = p / 64 - 1;
    ++k;
    if (k == levels_.size()) return std::nullopt;
  }
  // Descend taking the highest set bit.
  while (k > 0) {
    --k;
    const std::uint64_t word = levels_[k][p];
    p = p * 64 + (63 - static_cast<std::size_t>(__builtin_clzll(word)));
  }
  return p;
}

std::optional<std::size_t> VacantSet::next_set(std::size_t pos) const noexcept {
  std::size_t k = 0;
  std::size_t p = pos;
  while (true) {
    if (p / 64 >= levels_[k].size()) return std::nullopt;
    const int shift = static_cast<int>(p % 64);
    const std::uint64_t word = levels_[k][p / 64] & (~0ULL << shift);
    if (word != 0) {
      p = (p / 64) * 64 + static_cast<std::size_t>(__builtin_ctzll(word));
      break;
    }
    p = p / 64 + 1;
    ++k;
    if (k == levels_.size()) return std::nullopt;
  }
  while (k > 0) {
    --k;
    const std::uint64_t word = levels_[k][p];
    p = p * 64 + static_cast<std::size_t>(__builtin_ctzll(word));
  }
  return p;
}

std::optional<std::int64_t> VacantSet::floor(std::int64_t site) const noexcept {
  if (site < lo_) return std::nullopt;
  if (site > hi_) site = hi_;
  auto p = prev_set(static_cast<std::size_t>(site - lo_));
  if (!p) return std::nullopt;
  return lo_ + static_cast<std::int64_t>(*p);
}

std::optional<std::int64_t> VacantSet::ceil(std::int64_t site) const noexcept {
  if (site > hi_) return std::nullopt;
  if (site < lo_) site = lo_;
  auto p = next_set(static_cast<std::size_t>(site - lo_));
  if (!p) return std::nullopt;
  return lo_ + static_cast<std::int64_t>(*p);
}

}  // namespace fireline
