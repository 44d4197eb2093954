#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fireline {

// Names one reproducible random stream family. Streams are further keyed by a
// site (or replica) index and a draw counter, so any variate can be addressed
// directly without replaying other streams.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::string stream_label;
};

std::uint64_t mix64(std::uint64_t z) noexcept;
std::uint64_t hash_label(std::string_view label) noexcept;

// Seed of replica `index` derived from a master seed. Replica results depend
// only on (master, index).
std::uint64_t replica_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

// Counter-based stream: the value at position i is a pure function of
// (master_seed, label, key, i). Built on the SplitMix64 finalizer.
class CounterStream {
 public:
  CounterStream(const SeedSpec& seed, std::int64_t key = 0) noexcept;
  CounterStream(std::uint64_t master_seed, std::string_view label, std::int64_t key = 0) noexcept;

  [[nodiscard]] std::uint64_t bits_at(std::uint64_t index) const noexcept;
  // Uniform on the open interval (0,1).
  [[nodiscard]] double uniform_at(std::uint64_t index) const noexcept;

  std::uint64_t next_bits() noexcept { return bits_at(counter_++); }
  double next_uniform() noexcept { return uniform_at(counter_++); }
  double next_exponential(double rate) noexcept;

  [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace fireline
