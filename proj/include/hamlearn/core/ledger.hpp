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
#include <limits>
#include <mutex>

namespace hamlearn {

/// Evolution cost of one use of some primitive.
struct QueryCost {
    uint64_t queries = 0;
    double time = 0.0;  // sum of |t|
    double t_min = std::numeric_limits<double>::infinity();
    uint64_t negative_queries = 0;

    /// `count` queries of duration |t| each, `negative` of which run backwards.
    static QueryCost uniform(uint64_t count, double abs_t, uint64_t negative = 0) {
        QueryCost c;
        c.queries = count;
        c.time = static_cast<double>(count) * abs_t;
        if (count > 0 && abs_t > 0) c.t_min = abs_t;
        c.negative_queries = negative;
        return c;
    }

    QueryCost& operator+=(const QueryCost& o) {
        queries += o.queries;
        time += o.time;
        t_min = std::min(t_min, o.t_min);
        negative_queries += o.negative_queries;
        return *this;
    }
    friend QueryCost operator+(QueryCost a, const QueryCost& b) { return a += b; }
};

struct LedgerSnapshot {
    double t_total = 0.0;
    uint64_t n_exp = 0;
    double t_min_observed = std::numeric_limits<double>::infinity();
    int n_anc_max = 0;
    uint64_t query_count = 0;
    uint64_t negative_queries = 0;
};

/// Thread-safe accumulator of evolution-time resources.
class CostLedger {
   public:
    void record_query(double t) { charge(QueryCost::uniform(1, std::abs(t), t < 0 ? 1 : 0), 1); }

    void charge(const QueryCost& c, uint64_t uses) {
        if (uses == 0 || c.queries == 0) return;
        std::lock_guard lock(mu_);
        s_.query_count += c.queries * uses;
        s_.t_total += c.time * static_cast<double>(uses);
        s_.negative_queries += c.negative_queries * uses;
        if (c.t_min > 0) s_.t_min_observed = std::min(s_.t_min_observed, c.t_min);
    }

    void add_experiments(uint64_t k) {
        std::lock_guard lock(mu_);
        s_.n_exp += k;
    }

    void note_ancillas(int a) {
        std::lock_guard lock(mu_);
        s_.n_anc_max = std::max(s_.n_anc_max, a);
    }

    LedgerSnapshot snapshot() const {
        std::lock_guard lock(mu_);
        return s_;
    }

   private:
    mutable std::mutex mu_;
    LedgerSnapshot s_;
};

}  // namespace hamlearn
