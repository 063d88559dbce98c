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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "pipfract/prime_engine.hpp"

namespace pipfract {

inline constexpr const char* kCacheEnvVar = "PIPFRACT_CACHE";

struct RunConfig {
  std::uint64_t universe_bound = EngineConfig{}.universe_bound;
  std::filesystem::path cache_path = "pipfract.cache";
  std::uint64_t segment_span = EngineConfig{}.segment_span;
  std::uint64_t checkpoint_stride = EngineConfig{}.checkpoint_stride;
  std::filesystem::path output_dir = ".";
  unsigned threads = 1;

  EngineConfig engine() const {
    return {universe_bound, segment_span, checkpoint_stride, threads};
  }
  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

/// Applies `key = value` lines onto `cfg`. Blank lines and lines starting
/// with '#' are skipped; unknown keys are errors.
void apply_config_text(RunConfig& cfg, std::istream& in);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Applies one key; throws std::invalid_argument for unknown keys or bad values.
void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// Parses "lo:hi" (inclusive) or a single "n" as n:n.
std::pair<std::uint64_t, std::uint64_t> parse_index_range(const std::string& text);

}  // namespace pipfract
