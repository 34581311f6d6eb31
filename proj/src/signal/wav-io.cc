// src/signal/wav-io.cc

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

#include "tta/signal/wav-io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "tta/base/error.h"
#include "tta/signal/resample.h"

namespace tta::signal {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T Load(const char *p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void Put(std::string *buf, T v) {
  buf->append(reinterpret_cast<const char *>(&v), sizeof(T));
}

}  // namespace

Waveform ReadWav(const std::filesystem::path &path, int target_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  const auto fail = [&](const std::string &why) {
    return Error(ErrorCode::kIo, path.string() + ": " + why);
  };
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0)
    throw fail("not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const char *data = nullptr;
  std::size_t data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id = bytes.substr(pos, 4);
    const std::uint32_t len = Load<std::uint32_t>(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size() && id != "data") throw fail("truncated chunk");
    if (id == "fmt ") {
      if (len < 16) throw fail("short fmt chunk");
      format = Load<std::uint16_t>(bytes.data() + body);
      channels = Load<std::uint16_t>(bytes.data() + body + 2);
      rate = Load<std::uint32_t>(bytes.data() + body + 4);
      bits = Load<std::uint16_t>(bytes.data() + body + 14);
      if (format == kFormatExtensible && len >= 26)
        format = Load<std::uint16_t>(bytes.data() + body + 24);
    } else if (id == "data") {
      data = bytes.data() + body;
      data_len = std::min<std::size_t>(len, bytes.size() - body);
      break;
    }
    pos = body + len + (len & 1u);
  }
  if (!data || rate == 0) throw fail("missing fmt or data chunk");
  if (channels != 1) throw fail("only mono audio is supported");

  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  if (format == kFormatPcm && bits == 16) {
    const std::size_t n = data_len / 2;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      w.samples[i] = Load<std::int16_t>(data + 2 * i) / 32768.0;
  } else if (format == kFormatFloat && bits == 32) {
    const std::size_t n = data_len / 4;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) w.samples[i] = Load<float>(data + 4 * i);
  } else {
    throw fail("unsupported sample format (need PCM16 or float32)");
  }
  if (w.samples.empty()) throw fail("no samples");
  CheckWaveform(w);
  if (target_rate > 0 && w.sample_rate != target_rate)
    w = Resample(w, target_rate);
  return w;
}

void WriteWav(const std::filesystem::path &path, const Waveform &w,
              WavEncoding encoding) {
  CheckWaveform(w);
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t data_len =
      static_cast<std::uint32_t>(w.size() * (bits / 8));
  std::string buf;
  buf.reserve(44 + data_len);
  buf += "RIFF";
  Put<std::uint32_t>(&buf, 36 + data_len);
  buf += "WAVEfmt ";
  Put<std::uint32_t>(&buf, 16);
  Put<std::uint16_t>(&buf, pcm ? kFormatPcm : kFormatFloat);
  Put<std::uint16_t>(&buf, 1);
  Put<std::uint32_t>(&buf, static_cast<std::uint32_t>(w.sample_rate));
  Put<std::uint32_t>(&buf,
                     static_cast<std::uint32_t>(w.sample_rate) * (bits / 8));
  Put<std::uint16_t>(&buf, bits / 8);
  Put<std::uint16_t>(&buf, bits);
  buf += "data";
  Put<std::uint32_t>(&buf, data_len);
  for (double v : w.samples) {
    if (pcm) {
      const double c = std::clamp(v, -1.0, 32767.0 / 32768.0);
      Put<std::int16_t>(&buf, static_cast<std::int16_t>(std::lround(c * 32768.0)));
    } else {
      Put<float>(&buf, static_cast<float>(v));
    }
  }
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace tta::signal
