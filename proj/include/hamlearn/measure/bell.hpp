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

#include <random>
#include <vector>

#include "hamlearn/core.hpp"
#include "hamlearn/measure/pseudo_choi.hpp"

namespace hamlearn {

/// Born probabilities of the Bell basis {(P (x) I)|Omega>}, indexed by
/// PauliString::index(). Computed by the CNOT ladder + Hadamard basis change.
inline std::vector<double> bell_distribution(const Vector& psi) {
    const int q = qubits_for_dim(psi.size());
    if (q < 2 || q % 2) throw DimensionMismatch("bell_distribution: state must have 2n qubits");
    const int n = q / 2;
    Vector v = psi;
    std::vector<Gate> change;
    for (int i = 0; i < n; ++i) change.push_back({GateKind::CNOT, i, n + i});
    for (int i = 0; i < n; ++i) change.push_back({GateKind::H, i});
    apply_gates(v, q, change);
    // Outcome index j: system bits (z) are the high half, reference bits (x)
    // the low half, matching PauliString::from_index.
    std::vector<double> p(static_cast<size_t>(v.size()));
    for (Eigen::Index j = 0; j < v.size(); ++j) p[static_cast<size_t>(j)] = std::norm(v(j));
    return p;
}

/// Repeated Bell sampling of one fixed state.
class BellSampler {
   public:
    explicit BellSampler(const PseudoChoiState& s) : n_(s.n) {
        if (s.with_reference) throw DimensionMismatch("bell sampling needs a referenceless pseudo-Choi state");
        const auto p = bell_distribution(s.vector());
        dist_ = std::discrete_distribution<uint64_t>(p.begin(), p.end());
    }
    PauliString operator()(Rng& rng) { return PauliString::from_index(n_, dist_(rng)); }

   private:
    int n_;
    std::discrete_distribution<uint64_t> dist_;
};

inline PauliString bell_sample(const PseudoChoiState& s, Rng& rng) { return BellSampler(s)(rng); }

}  // namespace hamlearn
