#include "fireline/rng.hpp"

#include <cmath>

namespace fireline {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_label(std::string_view label) noexcept {
  // FNV-1a, then mixed.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return mix64(h);
}

std::uint64_t replica_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return mix64(mix64(master_seed) ^ mix64(index + kGolden));
}

CounterStream::CounterStream(const SeedSpec& seed, std::int64_t key) noexcept
    : CounterStream(seed.master_seed, seed.stream_label, key) {}

CounterStream::CounterStream(std::uint64_t master_seed, std::string_view label,
                             std::int64_t key) noexcept
    : key_(mix64(mix64(master_seed) ^ hash_label(label) ^
                 mix64(static_cast<std::uint64_t>(key) * kGolden + 1))) {}

std::uint64_t CounterStream::bits_at(std::uint64_t index) const noexcept {
  return mix64(key_ + (index + 1) * kGolden);
}

double CounterStream::uniform_at(std::uint64_t index) const noexcept {
  return (static_cast<double>(bits_at(index) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterStream::next_exponential(double rate) noexcept {
  return -std::log(next_uniform()) / rate;
}

}  // namespace fireline
