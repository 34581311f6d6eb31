// include/tta/base/io-util.h

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

#ifndef TTA_BASE_IO_UTIL_H_
#define TTA_BASE_IO_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace tta {

/// CRC-32 (zlib polynomial) over raw bytes, rendered as 8 hex digits.
std::uint32_t Crc32(std::span<const unsigned char> bytes,
                    std::uint32_t seed = 0);
std::uint32_t Crc32(std::span<const double> values, std::uint32_t seed = 0);
std::string Crc32Hex(std::uint32_t crc);

/// CRC of a whole file, used for artifact hashing in tests and stage checks.
std::string FileCrc32Hex(const std::filesystem::path &path);

// Little-endian primitives.  The host is assumed little-endian (checked at
// compile time in io-util.cc).
void WriteU32(std::ostream &os, std::uint32_t v);
void WriteU64(std::ostream &os, std::uint64_t v);
void WriteDoubles(std::ostream &os, std::span<const double> v);
void WriteLengthPrefixed(std::ostream &os, const std::string &s);

/// Readers return false on short reads instead of throwing so that callers
/// can map truncation to their own error code.
bool ReadU32(std::istream &is, std::uint32_t *v);
bool ReadU64(std::istream &is, std::uint64_t *v);
bool ReadDoubles(std::istream &is, std::span<double> v);
bool ReadLengthPrefixed(std::istream &is, std::string *s,
                        std::uint32_t max_len = 1u << 28);

std::string ReadTextFile(const std::filesystem::path &path);
void WriteTextFile(const std::filesystem::path &path, const std::string &text);

}  // namespace tta

#endif  // TTA_BASE_IO_UTIL_H_
