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

#include "pipfract/daleth.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace pipfract {

std::int64_t binomial(unsigned n, unsigned m) {
  if (m > n || n > 62) {
    throw std::out_of_range("binomial: requires 0 <= m <= n <= 62");
  }
  m = std::min(m, n - m);
  // C(n, j) = C(n, j-1) (n - j + 1) / j stays integral at every step; the
  // 128-bit product cannot overflow for n <= 62.
  unsigned __int128 c = 1;
  for (unsigned j = 1; j <= m; ++j) c = c * (n - j + 1) / j;
  return static_cast<std::int64_t>(c);
}

std::vector<std::int64_t> finite_difference(std::span<const std::int64_t> values,
                                            unsigned n, std::uint64_t h) {
  if (h < 1) throw std::invalid_argument("finite_difference: spacing must be >= 1");
  if (n > kMaxDifferenceOrder) {
    throw std::invalid_argument("finite_difference: order exceeds " +
                                std::to_string(kMaxDifferenceOrder));
  }
  const unsigned __int128 reach = static_cast<unsigned __int128>(n) * h;
  if (values.size() <= reach) {
    throw std::invalid_argument("finite_difference: need more than n*h = " +
                                std::to_string(static_cast<std::uint64_t>(reach)) +
                                " values, got " + std::to_string(values.size()));
  }
  if (n == 0) return {values.begin(), values.end()};

  std::vector<std::int64_t> coeff(n + 1);
  for (unsigned m = 0; m <= n; ++m) {
    coeff[m] = (m % 2 ? -1 : 1) * binomial(n, m);
  }
  const std::size_t len = values.size() - static_cast<std::size_t>(reach);
  std::vector<std::int64_t> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    std::int64_t acc = 0;
    for (unsigned m = 0; m <= n; ++m) {
      std::int64_t term;
      if (__builtin_mul_overflow(coeff[m], values[i + (n - m) * h], &term) ||
          __builtin_add_overflow(acc, term, &acc)) {
        throw std::overflow_error("finite_difference: signed 64-bit overflow at offset " +
                                  std::to_string(i));
      }
    }
    out[i] = acc;
  }
  return out;
}

Series daleth_range(const PrimeEngine& engine, const DalethSpec& spec,
                    std::uint64_t i_lo, std::uint64_t i_hi) {
  if (spec.spacing < 1) throw std::invalid_argument("daleth_range: spacing must be >= 1");
  if (spec.diff_order > kMaxDifferenceOrder) {
    throw std::invalid_argument("daleth_range: difference order exceeds " +
                                std::to_string(kMaxDifferenceOrder));
  }
  const std::uint64_t reach = spec.diff_order * spec.spacing;
  const PipSeries q = pip_range(engine, spec.pip(), i_lo, i_hi + reach);
  std::vector<std::int64_t> raw(q.values.size());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    if (q.values[j] > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw std::overflow_error("daleth_range: PIP value exceeds signed 64-bit");
    }
    raw[j] = static_cast<std::int64_t>(q.values[j]);
  }
  return {spec, i_lo, finite_difference(raw, spec.diff_order, spec.spacing)};
}

Series sign_filter(const Series& series) {
  Series out{series.spec, series.start, {}};
  out.values.reserve(series.size());
  for (std::int64_t v : series.values) out.values.push_back((v > 0) - (v < 0));
  return out;
}

Series quantize256(const Series& series) {
  if (series.values.empty()) throw std::invalid_argument("quantize256: empty series");
  const auto [lo_it, hi_it] = std::minmax_element(series.values.begin(), series.values.end());
  const __int128 lo = *lo_it;
  const __int128 range = static_cast<__int128>(*hi_it) - lo;
  Series out{series.spec, series.start, {}};
  out.values.reserve(series.size());
  for (std::int64_t v : series.values) {
    if (range == 0) {
      out.values.push_back(0);
      continue;
    }
    // nint(a * 255 / range) for a >= 0, ties away from zero, exactly.
    const __int128 a = static_cast<__int128>(v) - lo;
    out.values.push_back(static_cast<std::int64_t>((2 * a * 255 + range) / (2 * range)));
  }
  return out;
}

}  // namespace pipfract
