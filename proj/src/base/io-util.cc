// src/base/io-util.cc

// Copyright 2026  The latent-tta Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "tta/base/io-util.h"

#include <zlib.h>

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tta/base/error.h"

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace tta {

std::uint32_t Crc32(std::span<const unsigned char> bytes, std::uint32_t seed) {
  uLong crc = seed;
  const unsigned char *p = bytes.data();
  std::size_t left = bytes.size();
  while (left > 0) {
    uInt chunk = static_cast<uInt>(std::min<std::size_t>(left, 1u << 30));
    crc = crc32(crc, p, chunk);
    p += chunk;
    left -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::uint32_t Crc32(std::span<const double> values, std::uint32_t seed) {
  return Crc32(std::span<const unsigned char>(
                   reinterpret_cast<const unsigned char *>(values.data()),
                   values.size() * sizeof(double)),
               seed);
}

std::string Crc32Hex(std::uint32_t crc) {
  char buf[9];
  std::snprintf(buf, sizeof(buf), "%08x", crc);
  return buf;
}

std::string FileCrc32Hex(const std::filesystem::path &path) {
  std::string bytes = ReadTextFile(path);
  return Crc32Hex(Crc32(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char *>(bytes.data()), bytes.size())));
}

void WriteU32(std::ostream &os, std::uint32_t v) {
  os.write(reinterpret_cast<const char *>(&v), sizeof(v));
}

void WriteU64(std::ostream &os, std::uint64_t v) {
  os.write(reinterpret_cast<const char *>(&v), sizeof(v));
}

void WriteDoubles(std::ostream &os, std::span<const double> v) {
  os.write(reinterpret_cast<const char *>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void WriteLengthPrefixed(std::ostream &os, const std::string &s) {
  WriteU32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

bool ReadU32(std::istream &is, std::uint32_t *v) {
  is.read(reinterpret_cast<char *>(v), sizeof(*v));
  return static_cast<bool>(is);
}

bool ReadU64(std::istream &is, std::uint64_t *v) {
  is.read(reinterpret_cast<char *>(v), sizeof(*v));
  return static_cast<bool>(is);
}

bool ReadDoubles(std::istream &is, std::span<double> v) {
  is.read(reinterpret_cast<char *>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
  return static_cast<bool>(is);
}

bool ReadLengthPrefixed(std::istream &is, std::string *s,
                        std::uint32_t max_len) {
  std::uint32_t n = 0;
  if (!ReadU32(is, &n) || n > max_len) return false;
  s->resize(n);
  is.read(s->data(), n);
  return static_cast<bool>(is);
}

std::string ReadTextFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::filesystem::path &path, const std::string &text) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

}  // namespace tta
