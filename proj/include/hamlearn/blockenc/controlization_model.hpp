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

#include "hamlearn/core/random.hpp"

namespace hamlearn {

/// How controlled queries are realized inside encoding constructions.
struct Controlization {
    bool enabled = false;  // false: direct ctrl-U
    int64_t segments = 1;  // qDRIFT segments per controlled query
    Rng* rng = nullptr;    // trajectory source, required when enabled
};

}  // namespace hamlearn
