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

#ifndef MEDCHAIN_LEDGER_H_
#define MEDCHAIN_LEDGER_H_

// A single-writer proof-of-work chain carrying model weights. Each block
// holds one MC's upload for one global round, mined by the MC's associated
// miner. The block hash is SHA-256 over a canonical little-endian header
// encoding; a block is valid when its hash starts with `difficulty` zero bits.

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "medchain/dp_optimizer.h"
#include "medchain/ids.h"
#include "medchain/rng.h"

namespace medchain {

using Digest = std::array<std::uint8_t, 32>;

std::string ToHex(const Digest& digest);
absl::StatusOr<Digest> DigestFromHex(std::string_view hex);

Digest Sha256(std::span<const std::uint8_t> bytes);

// SHA-256 of the payload as consecutive little-endian IEEE-754 doubles.
Digest PayloadDigest(std::span<const double> payload);

struct Block {
  std::uint64_t height = 0;
  Digest prev_hash{};
  std::uint64_t nonce = 0;
  std::uint64_t round = 0;
  MinerId miner;
  McId mc;
  WeightVector payload;  // empty in digest-only chains
  Digest payload_digest{};
  std::uint64_t timestamp = 0;  // logical clock
};

// Canonical header bytes: height, prev_hash, round, miner, mc, timestamp,
// payload_digest, nonce.
std::vector<std::uint8_t> EncodeHeader(const Block& block);
Digest BlockHash(const Block& block);
bool MeetsDifficulty(const Digest& hash, int difficulty);

// Accepts iff the length matches and every entry is finite.
bool VerifyUpload(std::span<const double> weights, std::size_t expected_len);

struct ChainOptions {
  int difficulty = 8;           // leading zero bits
  std::size_t miner_count = 1;  // S, for broadcast accounting
  double block_reward = 10.0;
  bool embed_payload = true;    // false: store digests only
};

struct MineReceipt {
  std::uint64_t height = 0;
  std::uint64_t attempts = 0;
  Digest hash{};
};

struct RoundUpload {
  McId mc;
  MinerId miner;
  WeightVector weights;
};

class Chain {
 public:
  // A chain holding only the genesis block (exempt from proof of work).
  static Chain Init(WeightVector genesis_weights, const ChainOptions& options);

  // Rebuilds a chain from stored blocks, e.g. after import. Reward and
  // broadcast bookkeeping are recomputed; validity is not checked here.
  static Chain FromBlocks(std::vector<Block> blocks,
                          const ChainOptions& options);

  // Verifies the upload, searches nonces sequentially from a random start
  // until the difficulty predicate holds, appends the block, credits the
  // reward and records S - 1 broadcasts. VerificationFailed if the upload is
  // rejected.
  absl::StatusOr<MineReceipt> MineBlock(std::uint64_t round, MinerId miner,
                                        McId mc,
                                        std::span<const double> weights,
                                        std::size_t expected_len, Rng& rng);

  // Hash linkage, heights, clock, proof of work and payload digests.
  bool Verify() const;

  // All uploads of `round` in ascending MC order. IncompleteRound when fewer
  // than `expected_count` exist.
  absl::StatusOr<std::vector<RoundUpload>> FetchRoundWeights(
      std::uint64_t round, std::size_t expected_count) const;

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  const ChainOptions& options() const { return options_; }
  const std::map<MinerId, double>& reward_ledger() const { return rewards_; }
  double reward(MinerId miner) const;
  std::uint64_t broadcast_log() const { return broadcasts_; }
  Digest TipHash() const { return BlockHash(blocks_.back()); }

 private:
  Chain() = default;

  ChainOptions options_;
  std::vector<Block> blocks_;
  std::map<MinerId, double> rewards_;
  std::uint64_t broadcasts_ = 0;
};

}  // namespace medchain

#endif  // MEDCHAIN_LEDGER_H_
