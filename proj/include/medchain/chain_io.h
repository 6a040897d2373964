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

#ifndef MEDCHAIN_CHAIN_IO_H_
#define MEDCHAIN_CHAIN_IO_H_

// Chain audit files: JSON lines, a header record followed by one record per
// block in height order. Digests are lowercase hex.
//
//   {"record":"chain","schema":1,"difficulty":8,"miner_count":5,
//    "block_reward":10.0,"embed_payload":true}
//   {"record":"block","height":0,"prev_hash":"00..","nonce":0,"round":0,
//    "miner_id":0,"mc_id":0,"timestamp":0,"payload_digest":"..",
//    "payload":[...]}

#include <iosfwd>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "medchain/ledger.h"

namespace medchain {

inline constexpr int kChainSchemaVersion = 1;

absl::Status WriteChain(const Chain& chain, std::ostream& out);
absl::StatusOr<Chain> ReadChain(std::istream& in);

absl::Status ExportChain(const Chain& chain, const std::string& path);
absl::StatusOr<Chain> ImportChain(const std::string& path);

}  // namespace medchain

#endif  // MEDCHAIN_CHAIN_IO_H_
