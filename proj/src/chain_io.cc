// Copyright 2026 The Medchain Authors.
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

#include "medchain/chain_io.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "medchain/error.h"

namespace medchain {
namespace {

using nlohmann::json;

json BlockToJson(const Block& b) {
  return json{{"record", "block"},
              {"height", b.height},
              {"prev_hash", ToHex(b.prev_hash)},
              {"nonce", b.nonce},
              {"round", b.round},
              {"miner_id", b.miner.value},
              {"mc_id", b.mc.value},
              {"timestamp", b.timestamp},
              {"payload_digest", ToHex(b.payload_digest)},
              {"payload", b.payload}};
}

absl::StatusOr<Block> BlockFromJson(const json& j) {
  Block b;
  b.height = j.at("height").get<std::uint64_t>();
  absl::StatusOr<Digest> prev = DigestFromHex(j.at("prev_hash").get<std::string>());
  if (!prev.ok()) return prev.status();
  b.prev_hash = *prev;
  b.nonce = j.at("nonce").get<std::uint64_t>();
  b.round = j.at("round").get<std::uint64_t>();
  b.miner = MinerId{j.at("miner_id").get<std::uint32_t>()};
  b.mc = McId{j.at("mc_id").get<std::uint32_t>()};
  b.timestamp = j.at("timestamp").get<std::uint64_t>();
  absl::StatusOr<Digest> pd =
      DigestFromHex(j.at("payload_digest").get<std::string>());
  if (!pd.ok()) return pd.status();
  b.payload_digest = *pd;
  b.payload = j.at("payload").get<std::vector<double>>();
  return b;
}

}  // namespace

absl::Status WriteChain(const Chain& chain, std::ostream& out) {
  const ChainOptions& o = chain.options();
  json header{{"record", "chain"},
              {"schema", kChainSchemaVersion},
              {"difficulty", o.difficulty},
              {"miner_count", o.miner_count},
              {"block_reward", o.block_reward},
              {"embed_payload", o.embed_payload}};
  out << header.dump() << '\n';
  for (const Block& b : chain.blocks()) out << BlockToJson(b).dump() << '\n';
  if (!out) return MakeError(ErrorKind::kIoError, "failed writing chain");
  return absl::OkStatus();
}

absl::StatusOr<Chain> ReadChain(std::istream& in) {
  std::string line;
  int line_no = 0;
  ChainOptions options;
  bool have_header = false;
  std::vector<Block> blocks;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string kind = j.at("record").get<std::string>();
      if (kind == "chain") {
        if (j.at("schema").get<int>() != kChainSchemaVersion) {
          return MakeError(ErrorKind::kParseError,
                           absl::StrCat("line ", line_no,
                                        ": unsupported chain schema"));
        }
        options.difficulty = j.at("difficulty").get<int>();
        options.miner_count = j.at("miner_count").get<std::size_t>();
        options.block_reward = j.at("block_reward").get<double>();
        options.embed_payload = j.at("embed_payload").get<bool>();
        have_header = true;
      } else if (kind == "block") {
        absl::StatusOr<Block> b = BlockFromJson(j);
        if (!b.ok()) {
          return MakeError(ErrorKind::kParseError,
                           absl::StrCat("line ", line_no, ": ",
                                        b.status().message()));
        }
        blocks.push_back(*std::move(b));
      } else {
        return MakeError(ErrorKind::kParseError,
                         absl::StrCat("line ", line_no, ": unknown record '",
                                      kind, "'"));
      }
    } catch (const json::exception& e) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat("line ", line_no, ": ", e.what()));
    }
  }
  if (!have_header) {
    return MakeError(ErrorKind::kParseError, "missing chain header record");
  }
  if (blocks.empty()) {
    return MakeError(ErrorKind::kParseError, "chain has no genesis block");
  }
  return Chain::FromBlocks(std::move(blocks), options);
}

absl::Status ExportChain(const Chain& chain, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return MakeError(ErrorKind::kIoError, absl::StrCat("cannot open ", path));
  }
  return WriteChain(chain, out);
}

absl::StatusOr<Chain> ImportChain(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kIoError, absl::StrCat("cannot open ", path));
  }
  return ReadChain(in);
}

}  // namespace medchain
