// src/model/checkpoint.cc

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

#include "tta/model/checkpoint.h"

#include <fstream>

#include "tta/base/error.h"
#include "tta/base/io-util.h"
#include "tta/model/am-model.h"

namespace tta::model {
namespace {
constexpr char kMagic[] = "TTACKPT1";
}  // namespace

std::unique_ptr<SeModel> MakeModel(const std::string &kind,
                                   const nlohmann::json &config) {
  if (kind == "am") return std::make_unique<AmModel>(AmConfigFromJson(config));
  throw Error(ErrorCode::kInvalidArgument, "unknown model kind: " + kind);
}

void SaveCheckpoint(const SeModel &model, const std::filesystem::path &path,
                    const nlohmann::json &meta) {
  const ParamSet &ps = model.params();
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t i = 0; i < ps.size(); ++i)
    list.push_back({{"name", ps[i].name},
                    {"shape", ps[i].value.shape()},
                    {"crc32", Crc32Hex(Crc32(ps[i].value.values()))}});
  nlohmann::json header = {{"kind", model.Kind()},
                           {"config", model.ConfigJson()},
                           {"meta", meta},
                           {"params", list}};
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(kMagic, 8);
    WriteLengthPrefixed(out, header.dump());
    for (std::size_t i = 0; i < ps.size(); ++i)
      WriteDoubles(out, ps[i].value.values());
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::unique_ptr<SeModel> LoadCheckpoint(const std::filesystem::path &path,
                                        nlohmann::json *meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  char magic[8];
  std::string text;
  if (!in.read(magic, 8) || std::string(magic, 8) != kMagic ||
      !ReadLengthPrefixed(in, &text))
    throw Error(ErrorCode::kCorruptFile, path.string() + ": bad header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptFile, path.string() + ": " + e.what());
  }
  std::unique_ptr<SeModel> model;
  try {
    model = MakeModel(header.at("kind").get<std::string>(),
                      header.at("config"));
    const auto &list = header.at("params");
    ParamSet &ps = model->params();
    if (list.size() != ps.size())
      throw Error(ErrorCode::kCorruptFile,
                  path.string() + ": parameter list does not match model");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const auto &e = list[i];
      if (e.at("name").get<std::string>() != ps[i].name ||
          e.at("shape").get<std::vector<std::size_t>>() != ps[i].value.shape())
        throw Error(ErrorCode::kCorruptFile,
                    path.string() + ": unexpected tensor " +
                        e.at("name").get<std::string>());
      if (!ReadDoubles(in, ps[i].value.values()))
        throw Error(ErrorCode::kCorruptFile,
                    path.string() + ": truncated at " + ps[i].name);
      if (Crc32Hex(Crc32(ps[i].value.values())) !=
          e.at("crc32").get<std::string>())
        throw Error(ErrorCode::kCorruptFile,
                    path.string() + ": checksum mismatch in " + ps[i].name);
    }
    if (meta) *meta = header.value("meta", nlohmann::json::object());
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptFile, path.string() + ": " + e.what());
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw Error(ErrorCode::kCorruptFile, path.string() + ": trailing bytes");
  return model;
}

}  // namespace tta::model
