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

/// @file daleth.hpp
/// Forward finite differences of PIP sequences (the daleth family), the
/// sign filter and 256-level quantization.

#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "pipfract/pip.hpp"

namespace pipfract {

inline constexpr unsigned kMaxDifferenceOrder = 12;

/// daleth_{h,s,i}^{n,k}: n-th forward difference with spacing h of q_s^k.
struct DalethSpec {
  std::uint64_t spacing = 1;  // h
  unsigned diff_order = 2;    // n
  std::uint64_t shift = 0;    // s
  unsigned pip_order = 1;     // k

  PipSpec pip() const { return {pip_order, shift}; }
  friend bool operator==(const DalethSpec&, const DalethSpec&) = default;
};

/// A contiguous run of a 1-indexed integer sequence.
struct Series {
  std::variant<std::monostate, PipSpec, DalethSpec> spec;
  std::uint64_t start = 1;
  std::vector<std::int64_t> values;

  std::size_t size() const noexcept { return values.size(); }
  /// Index of the last element.
  std::uint64_t end_index() const noexcept { return start + values.size() - 1; }
};

/// Exact C(n, m) for 0 <= m <= n <= 62.
std::int64_t binomial(unsigned n, unsigned m);

/// out[i] = sum_{m=0}^{n} (-1)^m C(n, m) v[i + (n - m) h]; length |v| - n h.
/// Throws std::overflow_error rather than wrapping.
std::vector<std::int64_t> finite_difference(std::span<const std::int64_t> values,
                                            unsigned n, std::uint64_t h);

/// daleth values for i in [i_lo, i_hi].
Series daleth_range(const PrimeEngine& engine, const DalethSpec& spec,
                    std::uint64_t i_lo, std::uint64_t i_hi);

/// Elementwise sgn into {-1, 0, 1}.
Series sign_filter(const Series& series);

/// Affine map of [min, max] onto [0, 255], rounded half away from zero.
/// A constant series maps to all zeros.
Series quantize256(const Series& series);

}  // namespace pipfract
