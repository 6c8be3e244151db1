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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include "hamlearn/blockenc.hpp"
#include "hamlearn/learner/config.hpp"
#include "hamlearn/measure.hpp"

namespace hamlearn {

/// Attempts that suffice for N successes at success rate p with
/// probability 1 - e^{-c}: ceil(2(c+1)N/p).
inline uint64_t copies_to_queries(uint64_t N, double p, double c = 1.0) {
    if (!(p > 0 && p <= 1)) throw OutOfRange("copies_to_queries: p must lie in (0, 1]");
    if (!(c >= 0)) throw OutOfRange("copies_to_queries: c must be non-negative");
    const double v = std::ceil(2.0 * (c + 1.0) * static_cast<double>(N) / p);
    if (!(v < 1.8e19)) throw CopyBudgetExhausted("copies_to_queries: attempt count overflows");
    return static_cast<uint64_t>(v);
}

/// Attempts until the N-th success: N + NegBin(N, p).
inline uint64_t sample_attempts(uint64_t N, double p, Rng& rng) {
    if (N == 0) return 0;
    if (p >= 1.0) return N;
    std::negative_binomial_distribution<uint64_t> nb(N, p);
    return N + nb(rng);
}

/// Post-selection probability of the referenced preparation.
inline double pchoi_ref_success(const BlockEncoding& b) {
    const Matrix blk = b.block();
    return 0.5 * (blk.squaredNorm() / static_cast<double>(blk.rows()) + 1.0);
}

/// Post-selection probability of the referenceless preparation.
inline double pchoi_refless_success(const BlockEncoding& b) {
    const Matrix blk = b.block();
    return blk.squaredNorm() / static_cast<double>(blk.rows());
}

/// Charges `attempts` preparations built on `b` to the oracle.
inline void charge_preparations(const QueryOracle& oracle, const BlockEncoding& b, uint64_t attempts,
                                bool with_reference, StageReport* report = nullptr) {
    oracle.charge(b.cost, attempts);
    oracle.ledger().add_experiments(attempts);
    const int anc = b.a + b.n + (with_reference ? 1 : 0);
    oracle.ledger().note_ancillas(anc);
    if (report) {
        report->cost += detail::scaled(b.cost, attempts);
        report->experiments += attempts;
        report->ancillas = std::max(report->ancillas, anc);
    }
}

inline constexpr int kMaxPreparationAttempts = 64;

/// One referenced pseudo-Choi copy; repeats post-selection until it succeeds
/// (at least 1/2 per attempt, capped at 64 attempts).
inline PseudoChoiState prepare_pchoi_ref(const BlockEncoding& b, const QueryOracle& oracle, double scale, Rng& rng,
                                         StageReport* report = nullptr) {
    std::bernoulli_distribution ok(pchoi_ref_success(b));
    uint64_t attempts = 0;
    bool success = false;
    while (!success && attempts < kMaxPreparationAttempts) {
        ++attempts;
        success = ok(rng);
    }
    charge_preparations(oracle, b, attempts, true, report);
    if (!success) throw CopyBudgetExhausted("prepare_pchoi_ref: post-selection failed 64 times");
    if (report) ++report->copies;
    return pchoi_referenced(b.block(), scale);
}

/// One referenceless attempt; empty on post-selection failure.
inline std::optional<PseudoChoiState> prepare_pchoi_refless(const BlockEncoding& b, const QueryOracle& oracle,
                                                            double scale, Rng& rng, StageReport* report = nullptr) {
    const double p = pchoi_refless_success(b);
    charge_preparations(oracle, b, 1, false, report);
    if (!std::bernoulli_distribution(p)(rng)) return std::nullopt;
    if (report) ++report->copies;
    return pchoi_referenceless(b.block(), scale);
}

}  // namespace hamlearn
