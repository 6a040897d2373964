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

#ifndef MEDCHAIN_IDS_H_
#define MEDCHAIN_IDS_H_

#include <compare>
#include <cstdint>
#include <functional>

namespace medchain {

struct McId {
  std::uint32_t value = 0;
  auto operator<=>(const McId&) const = default;
};

struct MinerId {
  std::uint32_t value = 0;
  auto operator<=>(const MinerId&) const = default;
};

}  // namespace medchain

template <>
struct std::hash<medchain::McId> {
  std::size_t operator()(medchain::McId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

template <>
struct std::hash<medchain::MinerId> {
  std::size_t operator()(medchain::MinerId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

#endif  // MEDCHAIN_IDS_H_
