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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pipfract {

/// A requested prime lies beyond the configured universe bound.
/// `index()` is the 1-based prime index whose value could not be produced.
class UniverseBoundError : public std::out_of_range {
 public:
  UniverseBoundError(std::uint64_t index, std::uint64_t bound)
      : std::out_of_range("prime index " + std::to_string(index) +
                          " exceeds universe bound " + std::to_string(bound)),
        index_(index),
        bound_(bound) {}

  std::uint64_t index() const noexcept { return index_; }
  std::uint64_t bound() const noexcept { return bound_; }

 private:
  std::uint64_t index_;
  std::uint64_t bound_;
};

/// Statistical fit or estimator called on a sample that cannot support it
/// (constant data, too few points).
class DegenerateSampleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace pipfract
