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
#include <random>
#include <set>

#include "hamlearn/learner/preparation.hpp"

namespace hamlearn {

struct StructureOptions {
    double gamma = 0.5;      // threshold, in the units of the encoded coefficients
    double delta = 0.1;
    double unit = 1.0;       // block coefficient per unit of gamma
    double norm_sq = 1.0;    // upper bound on the squared l2 norm, same units as gamma
    int m_bound = 1;
    double c_cc = 1.0;
    bool early_stop = true;
    EstimatorMode estimator = EstimatorMode::kShadows;
};

/// Successful copies N = ceil(c_cc ||lambda||^2 log(m/delta) / gamma^2).
inline uint64_t structure_copies(double norm_sq, double gamma, int m_bound, double delta, double c_cc) {
    if (!(gamma > 0)) throw OutOfRange("structure threshold must be positive");
    const double lg = std::max(1.0, std::log(static_cast<double>(m_bound) / delta));
    return std::max<uint64_t>(1, static_cast<uint64_t>(std::ceil(c_cc * norm_sq * lg / (gamma * gamma))));
}

/// Union of Bell outcomes over referenceless copies of the state encoded by
/// `b`. Attempts are charged to the oracle; when the attempt cap for the
/// threshold is reached the estimate is flagged instead of thrown.
inline StructureEstimate identify_structure(const BlockEncoding& b, const QueryOracle& oracle,
                                            const StructureOptions& opt, Rng& rng, StageReport* report = nullptr) {
    if (!(opt.gamma > 0)) throw OutOfRange("identify_structure: gamma must be positive");
    StructureEstimate out;
    out.threshold = opt.gamma;
    const uint64_t need = structure_copies(opt.norm_sq, opt.gamma, opt.m_bound, opt.delta, opt.c_cc);
    const double p = pchoi_refless_success(b);
    const double p_floor = std::min(1.0, std::pow(opt.gamma * opt.unit, 2));
    const uint64_t cap = copies_to_queries(need, p_floor, std::log(1.0 / opt.delta));

    const Matrix blk = b.block();
    uint64_t successes = need;
    uint64_t trials = 0;
    if (opt.estimator == EstimatorMode::kExact) {
        if (p > 0) {
            const auto probs = bell_distribution(pchoi_referenceless(blk, 1.0).vector());
            const double floor = opt.gamma * opt.unit * (1.0 - 1e-9);
            for (size_t j = 1; j < probs.size(); ++j)
                if (std::sqrt(probs[j] * p) >= floor) out.terms.insert(PauliString::from_index(b.n, j));
            const double expected = std::ceil(static_cast<double>(need) / p);
            trials = expected >= static_cast<double>(cap) ? cap : static_cast<uint64_t>(expected);
            out.budget_exhausted = trials == cap;
        } else {
            trials = cap;
            successes = 0;
            out.budget_exhausted = true;
        }
    } else if (p <= 0) {
        trials = cap;
        successes = 0;
        out.budget_exhausted = true;
    } else {
        BellSampler sampler(pchoi_referenceless(blk, 1.0));
        uint64_t since_new = 0;
        uint64_t k = 0;
        for (; k < need; ++k) {
            const PauliString s = sampler(rng);
            if (!s.is_identity() && out.terms.insert(s).second) since_new = 0;
            else ++since_new;
            if (opt.early_stop) {
                const double seen = static_cast<double>(std::max<size_t>(out.terms.size(), 1));
                const uint64_t bound = structure_copies(seen, opt.gamma, opt.m_bound, opt.delta, opt.c_cc);
                if (k + 1 >= bound && 2 * since_new >= bound) {
                    ++k;
                    break;
                }
            }
        }
        successes = k;
        trials = sample_attempts(successes, p, rng);
        if (trials > cap) {
            // Attempts ran out first: keep only what the cap could have produced.
            std::binomial_distribution<uint64_t> bin(cap, p);
            const uint64_t got = std::min<uint64_t>(bin(rng), successes - 1);
            StructureEstimate cut;
            cut.threshold = opt.gamma;
            cut.budget_exhausted = true;
            BellSampler again(pchoi_referenceless(blk, 1.0));
            for (uint64_t i = 0; i < got; ++i) {
                const PauliString s = again(rng);
                if (!s.is_identity()) cut.terms.insert(s);
            }
            out = std::move(cut);
            successes = got;
            trials = cap;
        }
    }
    out.successes = successes;
    out.trials = trials;
    charge_preparations(oracle, b, trials, false, report);
    if (report) {
        report->copies += successes;
        report->threshold = opt.gamma;
        report->budget_exhausted = report->budget_exhausted || out.budget_exhausted;
    }
    return out;
}

}  // namespace hamlearn
