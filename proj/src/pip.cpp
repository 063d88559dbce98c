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

#include "pipfract/pip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pipfract/error.hpp"

namespace pipfract {

namespace {

void check_order(const PipSpec& spec, unsigned max_order) {
  if (spec.order > max_order) {
    throw std::invalid_argument("prime-index order " + std::to_string(spec.order) +
                                " exceeds maximum " + std::to_string(max_order));
  }
}

std::uint64_t shifted(std::uint64_t s, std::uint64_t v, std::uint64_t bound) {
  if (v > bound - std::min(bound, s)) throw UniverseBoundError(s + v, bound);
  return s + v;
}

}  // namespace

PipSeries pip_range(const PrimeEngine& engine, const PipSpec& spec,
                    std::uint64_t i_lo, std::uint64_t i_hi, unsigned max_order) {
  check_order(spec, max_order);
  if (i_lo < 1 || i_lo > i_hi) {
    throw std::invalid_argument("pip_range: requires 1 <= i_lo <= i_hi");
  }
  const std::uint64_t bound = engine.config().universe_bound;
  PipSeries out{spec, i_lo, {}};
  out.values.reserve(i_hi - i_lo + 1);
  for (std::uint64_t i = i_lo; i <= i_hi; ++i) out.values.push_back(i);
  if (spec.order == 0) {
    for (auto& v : out.values) v = shifted(spec.shift, v, bound);
    return out;
  }
  // Level r maps each value v of level r - 1 to p_{s + v}. Values stay
  // strictly ascending, so each level is a single resolve pass.
  for (unsigned level = 0; level < spec.order; ++level) {
    for (auto& v : out.values) v = shifted(spec.shift, v, bound);
    out.values = engine.resolve_indices(out.values);
  }
  return out;
}

std::uint64_t pip(const PrimeEngine& engine, const PipSpec& spec,
                  std::uint64_t i, unsigned max_order) {
  if (i < 1) throw std::invalid_argument("pip: requires i >= 1");
  return pip_range(engine, spec, i, i, max_order).values.front();
}

double broughan_barnett_approx(double n) {
  if (!(n >= 3.0)) throw std::domain_error("broughan_barnett_approx: requires n >= 3");
  const double l = std::log(n);
  return n * l * l + 3.0 * n * l * std::log(l);
}

double pip_asymptotic(double n, unsigned k) {
  if (!(n >= 2.0)) throw std::domain_error("pip_asymptotic: requires n >= 2");
  return n * std::pow(std::log(n), static_cast<double>(k));
}

double pip_lower_bound(double n, unsigned k) {
  if (!(n >= 4.0)) throw std::domain_error("pip_lower_bound: requires n >= 4");
  if (k < 1) throw std::domain_error("pip_lower_bound: requires k >= 1");
  double x = n;
  for (unsigned r = 0; r < k; ++r) {
    const double l = std::log(x);
    x = x * (l + std::log(l) - 1.0);
  }
  return x;
}

}  // namespace pipfract
