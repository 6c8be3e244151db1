// Copyright 2026 The hamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hamlearn {

using Rng = std::mt19937_64;

/// Independent generator for a named substream of a root seed. The same
/// (seed, name, index) always yields the same sequence.
inline Rng substream(uint64_t seed, std::string_view name, uint64_t index = 0) {
    uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(h), static_cast<uint32_t>(h >> 32),
                      static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32)};
    return Rng(seq);
}

/// Child generator seeded from a parent draw.
inline Rng fork(Rng& parent, std::string_view name) {
    return substream(parent(), name);
}

}  // namespace hamlearn
