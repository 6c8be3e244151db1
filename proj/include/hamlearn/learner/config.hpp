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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hamlearn/core.hpp"

namespace hamlearn {

enum class LearnMode { kTimeReversal, kTimeForward, kGalactic };
enum class ControlMode { kExact, kQDrift };
/// kExact replaces sampling by exact expectations and deterministic
/// thresholding; costs are still charged as if sampling had run.
enum class EstimatorMode { kShadows, kExact };

inline std::string to_string(LearnMode m) {
    switch (m) {
        case LearnMode::kTimeReversal: return "time-reversal";
        case LearnMode::kTimeForward: return "time-forward";
        case LearnMode::kGalactic: return "galactic";
    }
    return "?";
}
inline std::string to_string(ControlMode m) { return m == ControlMode::kExact ? "exact" : "qdrift"; }
inline std::string to_string(EstimatorMode m) { return m == EstimatorMode::kShadows ? "shadows" : "exact"; }

/// Constants hidden inside the O(.) bounds.
struct Constants {
    double c_d = 4.0;        // arcsin polynomial queries per log(1/eps)
    double c_amp = 2.0;      // spectral amplification queries
    double c_sh = 1.0;       // shadow copies
    double c_cc = 1.0;       // coupon-collector copies
    double c_enc = 0.05;     // encoding error per round, in units of the round precision
    double c_N = 1.0;        // qDRIFT segments
    double c_boost = 3.0;    // median-boosting repetitions per log(1/zeta)
    double c_ctrl = 1.0;     // multiplier on the controlization threshold shift
    int mom_batches = 10;    // median-of-means batches
};

struct LearnerConfig {
    double epsilon = 0.1;
    double delta = 0.1;
    int m_bound = 1;
    LearnMode mode = LearnMode::kTimeReversal;
    double galactic_p = 1.0;
    ControlMode control = ControlMode::kExact;
    double control_gamma = 0.0;  // per-query controlization error; 0 selects segments automatically
    EstimatorMode estimator = EstimatorMode::kShadows;
    bool exact_encodings = false;       // exact arcsin transform instead of the polynomial
    std::optional<double> norm_bound;   // declared bound on ||H||, time-forward only
    Constants constants;
    uint64_t seed = 0;
    int workers = 1;

    void validate() const {
        if (!(epsilon > 0 && epsilon < 1)) throw ConfigError("epsilon must lie in (0, 1)");
        if (!(delta > 0 && delta < 1)) throw ConfigError("delta must lie in (0, 1)");
        if (m_bound < 1) throw ConfigError("m_bound must be at least 1");
        if (mode == LearnMode::kGalactic && !(galactic_p >= 1)) throw ConfigError("galactic p must be >= 1");
        if (control_gamma < 0) throw ConfigError("control_gamma must be non-negative");
        if (norm_bound && !(*norm_bound > 0)) throw ConfigError("norm_bound must be positive");
        if (workers < 1) throw ConfigError("workers must be at least 1");
        if (constants.mom_batches < 1) throw ConfigError("mom_batches must be at least 1");
        for (double c : {constants.c_d, constants.c_amp, constants.c_sh, constants.c_cc, constants.c_enc,
                         constants.c_N, constants.c_boost})
            if (!(c > 0)) throw ConfigError("constants must be positive");
        if (constants.c_ctrl < 0) throw ConfigError("c_ctrl must be non-negative");
    }
};

struct StructureEstimate {
    std::set<PauliString> terms;
    double threshold = 0.0;
    uint64_t successes = 0;
    uint64_t trials = 0;
    bool budget_exhausted = false;
};

struct ParameterEstimate {
    std::map<PauliString, double> entries;
    double epsilon = 0.0;
    double delta = 0.0;

    double max_error(const SparseHamiltonian& truth) const {
        double e = 0.0;
        for (const auto& t : truth.terms()) {
            auto it = entries.find(t.pauli);
            e = std::max(e, std::abs(t.coefficient - (it == entries.end() ? 0.0 : it->second)));
        }
        for (const auto& [p, v] : entries) e = std::max(e, std::abs(truth.coefficient(p) - v));
        return e;
    }
};

/// Resources and outcome of one learner stage.
struct StageReport {
    std::string name;
    int round = 0;
    QueryCost cost;            // aggregated over all attempts
    uint64_t experiments = 0;
    uint64_t copies = 0;       // successful preparations consumed
    int ancillas = 0;
    int64_t segments = 1;
    double threshold = 0.0;    // structure threshold (target units), if any
    bool budget_exhausted = false;
};

struct RoundReport {
    int round = 0;
    double eta = 1.0;
    double zeta = 0.0;
    std::vector<PauliString> new_terms;
    std::map<PauliString, double> estimate;  // after the round
};

struct LearnTrace {
    std::vector<StageReport> stages;
    std::vector<RoundReport> rounds;
    double delta_used = 0.0;  // the Delta normalization
    int K = 0;                // matrix-log order (time-forward)
    double lambda = 0.0;      // matrix-log LCU normalization (time-forward)
};

namespace detail {

inline QueryCost scaled(const QueryCost& c, uint64_t uses) {
    QueryCost out;
    out.queries = c.queries * uses;
    out.time = c.time * static_cast<double>(uses);
    out.negative_queries = c.negative_queries * uses;
    if (uses > 0) out.t_min = c.t_min;
    return out;
}

}  // namespace detail

}  // namespace hamlearn
