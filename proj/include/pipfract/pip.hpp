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

/// @file pip.hpp
/// Iterated prime-indexed primes with index-set shift, and the asymptotic
/// approximations and lower bounds for their growth.

#pragma once

#include <cstdint>
#include <vector>

#include "pipfract/prime_engine.hpp"

namespace pipfract {

/// Default ceiling on the prime-index order.
inline constexpr unsigned kMaxPipOrder = 8;

/// Identifies the sequence q_s^k: `order` nested prime lookups, each index
/// shifted left by `shift`.
struct PipSpec {
  unsigned order = 1;       // k
  std::uint64_t shift = 0;  // s

  friend bool operator==(const PipSpec&, const PipSpec&) = default;
};

struct PipSeries {
  PipSpec spec;
  std::uint64_t start = 1;
  std::vector<std::uint64_t> values;  // q(start), q(start + 1), ...
};

/// q_s^k(i) = p_{s + p_{s + ... p_{s + i}}} with k prime lookups.
/// Order 0 is the shifted identity s + i.
std::uint64_t pip(const PrimeEngine& engine, const PipSpec& spec,
                  std::uint64_t i, unsigned max_order = kMaxPipOrder);

/// q_s^k(i) for i in [i_lo, i_hi], one streaming pass per nesting level.
/// Throws UniverseBoundError naming the failing prime index.
PipSeries pip_range(const PrimeEngine& engine, const PipSpec& spec,
                    std::uint64_t i_lo, std::uint64_t i_hi,
                    unsigned max_order = kMaxPipOrder);

/// n log^2 n + 3 n log n log log n, the second-order PIP growth with the
/// O(n log n) term dropped. Requires n >= 3.
double broughan_barnett_approx(double n);

/// n (log n)^k.
double pip_asymptotic(double n, unsigned k);

/// f^k(n) with f(x) = x (log x + log log x - 1), the iterated Dusart-style
/// lower bound for q_0^k(n). Requires n >= 4 and k >= 1.
double pip_lower_bound(double n, unsigned k);

}  // namespace pipfract
