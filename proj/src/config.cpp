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

#include "pipfract/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <stdexcept>

namespace pipfract {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  // Accept digit separators and scientific shorthand like 3.2e10.
  std::string digits;
  for (char c : text) {
    if (c != '_' && c != '\'' && c != ',') digits += c;
  }
  std::uint64_t v = 0;
  const char* end = digits.data() + digits.size();
  auto [p, ec] = std::from_chars(digits.data(), end, v);
  if (ec == std::errc() && p == end) return v;
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(digits, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == digits.size() && used > 0 && d >= 0 && d < 1.8e19 && d == static_cast<double>(static_cast<std::uint64_t>(d))) {
    return static_cast<std::uint64_t>(d);
  }
  throw std::invalid_argument("invalid integer for " + key + ": '" + text + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (universe_bound < 2) throw std::invalid_argument("universe_bound must be >= 2");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (checkpoint_stride < 1) throw std::invalid_argument("checkpoint_stride must be >= 1");
  if (segment_span < 128) throw std::invalid_argument("segment_span must be >= 128");
}

void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "universe_bound") {
    cfg.universe_bound = parse_u64(key, value);
  } else if (key == "cache_path") {
    cfg.cache_path = value;
  } else if (key == "segment_span") {
    cfg.segment_span = parse_u64(key, value);
  } else if (key == "checkpoint_stride") {
    cfg.checkpoint_stride = parse_u64(key, value);
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else if (key == "threads") {
    cfg.threads = static_cast<unsigned>(parse_u64(key, value));
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

void apply_config_text(RunConfig& cfg, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    apply_config_key(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  apply_config_text(cfg, in);
}

std::pair<std::uint64_t, std::uint64_t> parse_index_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const std::uint64_t v = parse_u64("range", trim(text));
    return {v, v};
  }
  const std::uint64_t lo = parse_u64("range", trim(text.substr(0, colon)));
  const std::uint64_t hi = parse_u64("range", trim(text.substr(colon + 1)));
  if (lo > hi) throw std::invalid_argument("range '" + text + "' has lo > hi");
  return {lo, hi};
}

}  // namespace pipfract
