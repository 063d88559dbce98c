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

#include <array>
#include <fstream>
#include <stdexcept>

#include "pipfract/prime_engine.hpp"

namespace pipfract {

namespace {

constexpr std::array<char, 4> kMagic = {'P', 'I', 'P', 'C'};
constexpr unsigned char kVersion = 0x01;

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b.data(), b.size());
}

std::uint64_t get_u64(std::istream& is) {
  std::array<unsigned char, 8> b;
  if (!is.read(reinterpret_cast<char*>(b.data()), b.size())) {
    throw std::runtime_error("checkpoint file truncated");
  }
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace

void CheckpointFile::write(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write(kMagic.data(), kMagic.size());
  os.put(static_cast<char>(kVersion));
  put_u64(os, stride);
  put_u64(os, primes.size());
  for (std::uint64_t p : primes) put_u64(os, p);
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

CheckpointFile CheckpointFile::read(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) {
    throw std::runtime_error(path.string() + ": not a checkpoint file");
  }
  const int version = is.get();
  if (version != kVersion) {
    throw std::runtime_error(path.string() + ": unsupported version " +
                             std::to_string(version));
  }
  CheckpointFile file;
  file.stride = get_u64(is);
  if (file.stride == 0) throw std::runtime_error(path.string() + ": zero stride");
  const std::uint64_t count = get_u64(is);
  const auto size = std::filesystem::file_size(path);
  if (size != 21 + 8 * count) {
    throw std::runtime_error(path.string() + ": size does not match count");
  }
  file.primes.resize(count);
  for (auto& p : file.primes) p = get_u64(is);
  return file;
}

}  // namespace pipfract
