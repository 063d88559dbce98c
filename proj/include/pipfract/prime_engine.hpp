// Copyright 2026 The pipfract Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// @file prime_engine.hpp
/// Segmented sieve of Eratosthenes over odd numbers, prime counting and
/// streaming nth-prime resolution, backed by an optional checkpoint cache.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace pipfract {

struct EngineConfig {
  /// Largest integer the engine will ever sieve up to (inclusive).
  std::uint64_t universe_bound = 32'000'000'000ULL;
  /// Maximum hi - lo of a single SieveSegment.
  std::uint64_t segment_span = std::uint64_t{1} << 26;
  /// Every `checkpoint_stride`-th prime is recorded by build_cache.
  std::uint64_t checkpoint_stride = 10'000'000;
  /// Number of segments sieved concurrently during streaming passes.
  unsigned threads = 1;
};

/// Primes in [lo, hi). Bit j of `words` stands for the odd number
/// first_odd() + 2j; the even prime 2 is tracked separately.
class SieveSegment {
 public:
  SieveSegment() = default;
  SieveSegment(std::uint64_t lo, std::uint64_t hi);

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }
  std::uint64_t first_odd() const noexcept { return lo_ | 1; }
  bool has_two() const noexcept { return has_two_; }

  /// Number of primes in the segment.
  std::uint64_t count() const noexcept;
  /// The r-th prime of the segment, 0-based; r < count().
  std::uint64_t select(std::uint64_t r) const;
  /// select() for each of the strictly ascending `ranks`, in one pass.
  void select_many(std::span<const std::uint64_t> ranks,
                   std::vector<std::uint64_t>& out) const;
  bool is_prime(std::uint64_t x) const;
  std::vector<std::uint64_t> primes() const;

  template <typename F>
  void for_each_prime(F&& f) const {
    if (has_two_) f(std::uint64_t{2});
    const std::uint64_t base = first_odd();
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = __builtin_ctzll(bits);
        f(base + 2 * (64 * static_cast<std::uint64_t>(w) + b));
        bits &= bits - 1;
      }
    }
  }

  std::span<std::uint64_t> words() noexcept { return words_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }
  void set_has_two(bool v) noexcept { has_two_ = v; }

 private:
  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  bool has_two_ = false;
  std::vector<std::uint64_t> words_;
};

struct PrimeCheckpoint {
  std::uint64_t index;  // 1-based n
  std::uint64_t value;  // p_n
};

struct CacheSummary {
  std::uint64_t prime_count;
  std::uint64_t max_prime;
  std::uint64_t checkpoints;
};

/// Checkpoint cache file. Layout: "PIPC", version byte 0x01, u64 stride,
/// u64 count, then count u64 primes; all integers little-endian. Entry j
/// (0-based) is the prime with index (j + 1) * stride.
struct CheckpointFile {
  std::uint64_t stride = 0;
  std::vector<std::uint64_t> primes;

  void write(const std::filesystem::path& path) const;
  static CheckpointFile read(const std::filesystem::path& path);
};

class PrimeEngine {
 public:
  explicit PrimeEngine(EngineConfig config = {});

  const EngineConfig& config() const noexcept { return config_; }

  /// Sieves [lo, hi). Throws std::invalid_argument when the span exceeds
  /// segment_span or lo >= hi, std::overflow_error when hi passes 2^64 - 2^32.
  SieveSegment sieve_range(std::uint64_t lo, std::uint64_t hi) const;

  /// pi(x).
  std::uint64_t prime_count(std::uint64_t x) const;

  /// p_n for n >= 1.
  std::uint64_t nth_prime(std::uint64_t n) const;

  /// p_i for each i of a strictly ascending index list, in one forward pass.
  std::vector<std::uint64_t> resolve_indices(
      std::span<const std::uint64_t> indices) const;

  /// Sieves [0, limit], writes a checkpoint file to `path` and installs the
  /// checkpoints in this engine.
  CacheSummary build_cache(std::uint64_t limit,
                           const std::filesystem::path& path);

  /// Installs checkpoints read from a cache file. A stride mismatch with the
  /// configuration is accepted; the file's stride wins.
  void load_cache(const std::filesystem::path& path);
  void set_checkpoints(std::vector<PrimeCheckpoint> checkpoints);
  const std::vector<PrimeCheckpoint>& checkpoints() const noexcept {
    return checkpoints_;
  }

  /// Odd base primes up to sqrt(universe_bound).
  std::span<const std::uint32_t> base_primes() const noexcept {
    return base_primes_;
  }

 private:
  struct Cursor {
    std::uint64_t next_lo;  // first number not yet sieved
    std::uint64_t count;    // primes < next_lo
  };

  Cursor start_for_index(std::uint64_t n) const;
  /// Streams segments [from, limit] in ascending order; `visit` returns
  /// false to stop. Segments may be sieved concurrently, visits are ordered.
  void stream(std::uint64_t from, std::uint64_t limit,
              const std::function<bool(const SieveSegment&)>& visit) const;

  EngineConfig config_;
  std::vector<std::uint32_t> base_primes_;
  std::vector<PrimeCheckpoint> checkpoints_;
};

/// Upper bound on p_n (Rosser–Schoenfeld / Dusart), exact for small n.
std::uint64_t nth_prime_upper_bound(std::uint64_t n);

}  // namespace pipfract
