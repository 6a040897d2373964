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

#include "medchain/ledger.h"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "absl/strings/str_cat.h"
#include "medchain/error.h"

namespace medchain {
namespace {

void PutU64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutDigest(std::vector<std::uint8_t>& out, const Digest& d) {
  out.insert(out.end(), d.begin(), d.end());
}

}  // namespace

Digest Sha256(std::span<const std::uint8_t> bytes) {
  Digest out{};
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(),
             nullptr);
  return out;
}

std::string ToHex(const Digest& digest) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint8_t b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xF]);
  }
  return out;
}

absl::StatusOr<Digest> DigestFromHex(std::string_view hex) {
  if (hex.size() != 64) {
    return MakeError(ErrorKind::kParseError, "digest must be 64 hex chars");
  }
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Digest d{};
  for (std::size_t i = 0; i < d.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat("bad hex digit in digest ", Sv(hex)));
    }
    d[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return d;
}

Digest PayloadDigest(std::span<const double> payload) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(payload.size() * 8);
  for (double v : payload) PutU64(bytes, std::bit_cast<std::uint64_t>(v));
  return Sha256(bytes);
}

std::vector<std::uint8_t> EncodeHeader(const Block& block) {
  std::vector<std::uint8_t> out;
  out.reserve(8 * 6 + 64);
  PutU64(out, block.height);
  PutDigest(out, block.prev_hash);
  PutU64(out, block.round);
  PutU64(out, block.miner.value);
  PutU64(out, block.mc.value);
  PutU64(out, block.timestamp);
  PutDigest(out, block.payload_digest);
  PutU64(out, block.nonce);
  return out;
}

Digest BlockHash(const Block& block) { return Sha256(EncodeHeader(block)); }

bool MeetsDifficulty(const Digest& hash, int difficulty) {
  int remaining = difficulty;
  for (std::uint8_t byte : hash) {
    if (remaining <= 0) return true;
    if (remaining >= 8) {
      if (byte != 0) return false;
      remaining -= 8;
    } else {
      return (byte >> (8 - remaining)) == 0;
    }
  }
  return remaining <= 0;
}

bool VerifyUpload(std::span<const double> weights, std::size_t expected_len) {
  if (weights.size() != expected_len) return false;
  return std::all_of(weights.begin(), weights.end(),
                     [](double v) { return std::isfinite(v); });
}

Chain Chain::Init(WeightVector genesis_weights, const ChainOptions& options) {
  Block genesis;
  genesis.payload_digest = PayloadDigest(genesis_weights);
  if (options.embed_payload) genesis.payload = std::move(genesis_weights);
  Chain chain;
  chain.options_ = options;
  chain.blocks_.push_back(std::move(genesis));
  return chain;
}

Chain Chain::FromBlocks(std::vector<Block> blocks,
                        const ChainOptions& options) {
  Chain chain;
  chain.options_ = options;
  chain.blocks_ = std::move(blocks);
  for (std::size_t i = 1; i < chain.blocks_.size(); ++i) {
    chain.rewards_[chain.blocks_[i].miner] += options.block_reward;
    chain.broadcasts_ += options.miner_count - 1;
  }
  return chain;
}

absl::StatusOr<MineReceipt> Chain::MineBlock(std::uint64_t round,
                                             MinerId miner, McId mc,
                                             std::span<const double> weights,
                                             std::size_t expected_len,
                                             Rng& rng) {
  if (!VerifyUpload(weights, expected_len)) {
    return MakeError(ErrorKind::kVerificationFailed,
                     absl::StrCat("upload from MC ", mc.value, " for round ",
                                  round, " rejected"));
  }
  Block block;
  block.height = blocks_.size();
  block.prev_hash = TipHash();
  block.round = round;
  block.miner = miner;
  block.mc = mc;
  block.timestamp = blocks_.back().timestamp + 1;
  block.payload_digest = PayloadDigest(weights);
  if (options_.embed_payload) {
    block.payload.assign(weights.begin(), weights.end());
  }

  MineReceipt receipt;
  block.nonce = rng();
  for (;;) {
    ++receipt.attempts;
    receipt.hash = BlockHash(block);
    if (MeetsDifficulty(receipt.hash, options_.difficulty)) break;
    ++block.nonce;
  }
  receipt.height = block.height;
  blocks_.push_back(std::move(block));
  rewards_[miner] += options_.block_reward;
  broadcasts_ += options_.miner_count - 1;
  return receipt;
}

bool Chain::Verify() const {
  if (blocks_.empty()) return false;
  const Block& genesis = blocks_.front();
  if (genesis.height != 0 || genesis.prev_hash != Digest{}) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Block& b = blocks_[i];
    if (b.height != i) return false;
    if (options_.embed_payload || !b.payload.empty()) {
      if (PayloadDigest(b.payload) != b.payload_digest) return false;
    }
    if (i == 0) continue;
    const Block& prev = blocks_[i - 1];
    if (b.prev_hash != BlockHash(prev)) return false;
    if (b.timestamp <= prev.timestamp) return false;
    if (!MeetsDifficulty(BlockHash(b), options_.difficulty)) return false;
  }
  return true;
}

absl::StatusOr<std::vector<RoundUpload>> Chain::FetchRoundWeights(
    std::uint64_t round, std::size_t expected_count) const {
  if (!options_.embed_payload) {
    return MakeError(ErrorKind::kIncompleteRound,
                     "chain stores payload digests only");
  }
  std::vector<RoundUpload> out;
  for (std::size_t i = 1; i < blocks_.size(); ++i) {
    const Block& b = blocks_[i];
    if (b.round == round) out.push_back({b.mc, b.miner, b.payload});
  }
  if (out.size() < expected_count) {
    return MakeError(ErrorKind::kIncompleteRound,
                     absl::StrCat("round ", round, " has ", out.size(),
                                  " of ", expected_count, " uploads"));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RoundUpload& a, const RoundUpload& b) {
                     return a.mc < b.mc;
                   });
  return out;
}

double Chain::reward(MinerId miner) const {
  auto it = rewards_.find(miner);
  return it == rewards_.end() ? 0.0 : it->second;
}

}  // namespace medchain
