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

#include "pipfract/prime_engine.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <string>

#include "pipfract/error.hpp"

namespace pipfract {

namespace {

// Bits per cache block; 32 KiB of flags stays resident in L1d.
constexpr std::uint64_t kBlockBits = std::uint64_t{1} << 18;

// Odd primes handled with per-word masks instead of per-bit crossing off.
constexpr std::array<std::uint32_t, 17> kSmallPrimes = {
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61};

// Largest universe bound accepted; keeps base primes in 32 bits and leaves
// headroom below 2^64 for segment arithmetic.
constexpr std::uint64_t kMaxUniverse = 10'000'000'000'000'000ULL;

// For small prime p and r = (global odd index of a word's bit 0) mod p,
// masks[r] has bit j set where odd index g = r + j satisfies
// g == (p - 1) / 2 (mod p), i.e. 2g + 1 is a multiple of p.
struct WordMasks {
  std::uint32_t p;
  std::vector<std::uint64_t> masks;
  std::uint32_t advance;  // 64 mod p
};

const std::vector<WordMasks>& small_prime_masks() {
  static const std::vector<WordMasks> table = [] {
    std::vector<WordMasks> out;
    for (std::uint32_t p : kSmallPrimes) {
      WordMasks wm{p, std::vector<std::uint64_t>(p, 0), 64 % p};
      const std::uint32_t target = (p - 1) / 2;
      for (std::uint32_t r = 0; r < p; ++r) {
        std::uint64_t m = 0;
        for (std::uint32_t j = 0; j < 64; ++j) {
          if ((r + j) % p == target) m |= std::uint64_t{1} << j;
        }
        wm.masks[r] = m;
      }
      out.push_back(std::move(wm));
    }
    return out;
  }();
  return table;
}

std::uint64_t isqrt(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

std::vector<std::uint32_t> simple_odd_primes(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 3) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 3; i * i <= limit; i += 2) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j <= limit; j += 2 * i) composite[j] = true;
  }
  for (std::uint64_t i = 3; i <= limit; i += 2) {
    if (!composite[i]) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

// Position of the r-th set bit (0-based) of x.
int select_in_word(std::uint64_t x, std::uint64_t r) {
  while (r--) x &= x - 1;
  return __builtin_ctzll(x);
}

}  // namespace

SieveSegment::SieveSegment(std::uint64_t lo, std::uint64_t hi)
    : lo_(lo), hi_(hi), has_two_(lo <= 2 && 2 < hi) {
  const std::uint64_t odd = lo | 1;
  const std::uint64_t nbits = hi > odd ? (hi - odd + 1) / 2 : 0;
  words_.assign((nbits + 63) / 64, ~std::uint64_t{0});
  if (nbits % 64 != 0) {
    words_.back() = (std::uint64_t{1} << (nbits % 64)) - 1;
  }
  // 1 is not prime.
  if (odd == 1 && nbits > 0) words_[0] &= ~std::uint64_t{1};
}

std::uint64_t SieveSegment::count() const noexcept {
  std::uint64_t c = has_two_ ? 1 : 0;
  for (std::uint64_t w : words_) c += std::popcount(w);
  return c;
}

std::uint64_t SieveSegment::select(std::uint64_t r) const {
  if (has_two_) {
    if (r == 0) return 2;
    --r;
  }
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const auto c = static_cast<std::uint64_t>(std::popcount(words_[w]));
    if (r < c) {
      const auto bit = static_cast<std::uint64_t>(select_in_word(words_[w], r));
      return first_odd() + 2 * (64 * static_cast<std::uint64_t>(w) + bit);
    }
    r -= c;
  }
  throw std::out_of_range("SieveSegment::select: rank beyond segment count");
}

void SieveSegment::select_many(std::span<const std::uint64_t> ranks,
                               std::vector<std::uint64_t>& out) const {
  std::size_t j = 0;
  std::uint64_t base = 0;  // rank of the first prime in words_[w]
  if (has_two_) {
    if (j < ranks.size() && ranks[j] == 0) {
      out.push_back(2);
      ++j;
    }
    base = 1;
  }
  for (std::size_t w = 0; w < words_.size() && j < ranks.size(); ++w) {
    const auto c = static_cast<std::uint64_t>(std::popcount(words_[w]));
    while (j < ranks.size() && ranks[j] < base + c) {
      const auto bit = static_cast<std::uint64_t>(select_in_word(words_[w], ranks[j] - base));
      out.push_back(first_odd() + 2 * (64 * static_cast<std::uint64_t>(w) + bit));
      ++j;
    }
    base += c;
  }
  if (j < ranks.size()) {
    throw std::out_of_range("SieveSegment::select_many: rank beyond segment count");
  }
}

bool SieveSegment::is_prime(std::uint64_t x) const {
  if (x < lo_ || x >= hi_) {
    throw std::out_of_range("SieveSegment::is_prime: outside segment");
  }
  if (x == 2) return has_two_;
  if (x % 2 == 0) return false;
  const std::uint64_t j = (x - first_odd()) / 2;
  return (words_[j / 64] >> (j % 64)) & 1;
}

std::vector<std::uint64_t> SieveSegment::primes() const {
  std::vector<std::uint64_t> out;
  out.reserve(count());
  for_each_prime([&](std::uint64_t p) { out.push_back(p); });
  return out;
}

std::uint64_t nth_prime_upper_bound(std::uint64_t n) {
  if (n < 6) return 13;
  const long double x = static_cast<long double>(n);
  const long double b = x * (std::log(x) + std::log(std::log(x)));
  return static_cast<std::uint64_t>(std::ceil(b)) + 1;
}

PrimeEngine::PrimeEngine(EngineConfig config) : config_(config) {
  if (config_.universe_bound < 2 || config_.universe_bound > kMaxUniverse) {
    throw std::invalid_argument("universe_bound must lie in [2, 1e16]");
  }
  if (config_.segment_span < 128) {
    throw std::invalid_argument("segment_span must be at least 128");
  }
  if (config_.checkpoint_stride == 0) {
    throw std::invalid_argument("checkpoint_stride must be positive");
  }
  if (config_.threads == 0) {
    throw std::invalid_argument("threads must be at least 1");
  }
  base_primes_ = simple_odd_primes(isqrt(config_.universe_bound + 1) + 1);
}

SieveSegment PrimeEngine::sieve_range(std::uint64_t lo, std::uint64_t hi) const {
  if (lo >= hi) throw std::invalid_argument("sieve_range: requires lo < hi");
  if (hi - lo > config_.segment_span) {
    throw std::invalid_argument("sieve_range: span " + std::to_string(hi - lo) +
                                " exceeds segment span " +
                                std::to_string(config_.segment_span));
  }
  if (hi > kMaxUniverse) throw std::overflow_error("sieve_range: hi too large");
  if (hi - 1 > config_.universe_bound) {
    throw std::out_of_range("sieve_range: hi beyond universe bound " +
                            std::to_string(config_.universe_bound));
  }

  SieveSegment seg(lo, hi);
  auto words = seg.words();
  if (words.empty()) return seg;

  const std::uint64_t first = seg.first_odd();
  const std::uint64_t g0 = (first - 1) / 2;  // global odd index of bit 0
  const std::uint64_t nbits = (hi - first + 1) / 2;
  const std::uint64_t root = isqrt(hi - 1);

  // Small primes: one AND per word per prime.
  for (const WordMasks& wm : small_prime_masks()) {
    if (wm.p > root) break;
    std::uint64_t r = g0 % wm.p;
    for (std::uint64_t& w : words) {
      w &= ~wm.masks[r];
      r += wm.advance;
      if (r >= wm.p) r -= wm.p;
    }
  }
  for (std::uint32_t p : kSmallPrimes) {
    if (p > root) break;
    if (p >= first && p < hi) {
      const std::uint64_t j = (p - first) / 2;
      words[j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }

  // Remaining base primes: cross off bit by bit, one cache block at a time.
  const auto begin = std::upper_bound(base_primes_.begin(), base_primes_.end(),
                                      kSmallPrimes.back());
  const auto end = std::upper_bound(begin, base_primes_.end(), root);
  const std::size_t np = static_cast<std::size_t>(end - begin);
  std::vector<std::uint64_t> next(np);
  for (std::size_t i = 0; i < np; ++i) {
    const std::uint64_t p = begin[i];
    std::uint64_t m = std::max(p * p, (first + p - 1) / p * p);
    if (m % 2 == 0) m += p;
    next[i] = (m - first) / 2;
  }
  std::uint64_t* bits = words.data();
  for (std::uint64_t block = 0; block < nbits; block += kBlockBits) {
    const std::uint64_t stop = std::min(nbits, block + kBlockBits);
    for (std::size_t i = 0; i < np; ++i) {
      const std::uint64_t p = begin[i];
      std::uint64_t j = next[i];
      for (; j < stop; j += p) bits[j >> 6] &= ~(std::uint64_t{1} << (j & 63));
      next[i] = j;
    }
  }
  return seg;
}

void PrimeEngine::stream(
    std::uint64_t from, std::uint64_t limit,
    const std::function<bool(const SieveSegment&)>& visit) const {
  const std::uint64_t span = config_.segment_span;
  std::uint64_t lo = from;
  while (lo <= limit) {
    if (config_.threads <= 1) {
      const std::uint64_t hi = std::min(limit, lo + span - 1) + 1;
      if (!visit(sieve_range(lo, hi))) return;
      lo = hi;
      continue;
    }
    std::vector<std::future<SieveSegment>> batch;
    for (unsigned t = 0; t < config_.threads && lo <= limit; ++t) {
      const std::uint64_t hi = std::min(limit, lo + span - 1) + 1;
      batch.push_back(std::async(std::launch::async,
                                 [this, lo, hi] { return sieve_range(lo, hi); }));
      lo = hi;
    }
    for (auto& f : batch) {
      if (!visit(f.get())) return;
    }
  }
}

PrimeEngine::Cursor PrimeEngine::start_for_index(std::uint64_t n) const {
  // Largest checkpoint with index strictly below n.
  auto it = std::lower_bound(
      checkpoints_.begin(), checkpoints_.end(), n,
      [](const PrimeCheckpoint& c, std::uint64_t v) { return c.index < v; });
  if (it == checkpoints_.begin()) return {0, 0};
  --it;
  return {it->value + 1, it->index};
}

std::uint64_t PrimeEngine::prime_count(std::uint64_t x) const {
  if (x < 2) return 0;
  if (x > config_.universe_bound) {
    throw std::out_of_range("prime_count: x beyond universe bound " +
                            std::to_string(config_.universe_bound));
  }
  auto it = std::upper_bound(
      checkpoints_.begin(), checkpoints_.end(), x,
      [](std::uint64_t v, const PrimeCheckpoint& c) { return v < c.value; });
  std::uint64_t from = 0;
  std::uint64_t count = 0;
  if (it != checkpoints_.begin()) {
    --it;
    from = it->value + 1;
    count = it->index;
  }
  if (from > x) return count;
  stream(from, x, [&](const SieveSegment& seg) {
    count += seg.count();
    return true;
  });
  return count;
}

std::uint64_t PrimeEngine::nth_prime(std::uint64_t n) const {
  if (n == 0) throw std::invalid_argument("nth_prime: n must be >= 1");
  const std::uint64_t idx[] = {n};
  return resolve_indices(idx).front();
}

std::vector<std::uint64_t> PrimeEngine::resolve_indices(
    std::span<const std::uint64_t> indices) const {
  std::vector<std::uint64_t> out;
  if (indices.empty()) return out;
  if (indices.front() == 0) {
    throw std::invalid_argument("resolve_indices: indices must be >= 1");
  }
  for (std::size_t i = 1; i < indices.size(); ++i) {
    if (indices[i] <= indices[i - 1]) {
      throw std::invalid_argument("resolve_indices: indices must be strictly ascending");
    }
  }
  out.reserve(indices.size());

  const std::uint64_t limit = std::min(
      config_.universe_bound, nth_prime_upper_bound(indices.back()));
  std::size_t pos = 0;
  std::vector<std::uint64_t> ranks;
  while (pos < indices.size()) {
    // Exact checkpoint hits need no sieving.
    auto hit = std::lower_bound(
        checkpoints_.begin(), checkpoints_.end(), indices[pos],
        [](const PrimeCheckpoint& c, std::uint64_t v) { return c.index < v; });
    if (hit != checkpoints_.end() && hit->index == indices[pos]) {
      out.push_back(hit->value);
      ++pos;
      continue;
    }
    Cursor cur = start_for_index(indices[pos]);
    if (cur.next_lo > limit) break;
    bool jump = false;
    stream(cur.next_lo, limit, [&](const SieveSegment& seg) {
      const std::uint64_t c = seg.count();
      ranks.clear();
      while (pos < indices.size() && indices[pos] <= cur.count + c) {
        ranks.push_back(indices[pos] - cur.count - 1);
        ++pos;
      }
      seg.select_many(ranks, out);
      cur.count += c;
      if (pos == indices.size()) return false;
      // Skip ahead when a checkpoint lies between here and the next target.
      if (start_for_index(indices[pos]).count > cur.count) {
        jump = true;
        return false;
      }
      return true;
    });
    if (!jump) break;
  }
  if (pos < indices.size()) {
    throw UniverseBoundError(indices[pos], config_.universe_bound);
  }
  return out;
}

void PrimeEngine::set_checkpoints(std::vector<PrimeCheckpoint> checkpoints) {
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i].index <= checkpoints[i - 1].index ||
        checkpoints[i].value <= checkpoints[i - 1].value) {
      throw std::invalid_argument("checkpoints must be strictly increasing");
    }
  }
  checkpoints_ = std::move(checkpoints);
}

CacheSummary PrimeEngine::build_cache(std::uint64_t limit,
                                      const std::filesystem::path& path) {
  if (limit < 2) throw std::invalid_argument("build_cache: limit must be >= 2");
  if (limit > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw std::out_of_range("build_cache: limit exceeds 2^63 - 1");
  }
  if (limit > config_.universe_bound) {
    throw std::out_of_range("build_cache: limit beyond universe bound " +
                            std::to_string(config_.universe_bound));
  }
  const std::uint64_t stride = config_.checkpoint_stride;
  CheckpointFile file{stride, {}};
  std::uint64_t count = 0;
  std::uint64_t max_prime = 0;
  std::vector<std::uint64_t> ranks;
  stream(0, limit, [&](const SieveSegment& seg) {
    const std::uint64_t c = seg.count();
    // Next multiple of the stride strictly above count.
    ranks.clear();
    for (std::uint64_t target = (count / stride + 1) * stride;
         target <= count + c; target += stride) {
      ranks.push_back(target - count - 1);
    }
    seg.select_many(ranks, file.primes);
    if (c > 0) max_prime = seg.select(c - 1);
    count += c;
    return true;
  });
  file.write(path);

  std::vector<PrimeCheckpoint> cps;
  cps.reserve(file.primes.size());
  for (std::size_t j = 0; j < file.primes.size(); ++j) {
    cps.push_back({(j + 1) * stride, file.primes[j]});
  }
  checkpoints_ = std::move(cps);
  return {count, max_prime, file.primes.size()};
}

void PrimeEngine::load_cache(const std::filesystem::path& path) {
  const CheckpointFile file = CheckpointFile::read(path);
  std::vector<PrimeCheckpoint> cps;
  cps.reserve(file.primes.size());
  for (std::size_t j = 0; j < file.primes.size(); ++j) {
    cps.push_back({(j + 1) * file.stride, file.primes[j]});
  }
  set_checkpoints(std::move(cps));
}

}  // namespace pipfract
