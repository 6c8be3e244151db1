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
#include <thread>
#include <vector>

#include "hamlearn/learner/preparation.hpp"

namespace hamlearn {

struct ParameterOptions {
    double epsilon = 0.1;   // target accuracy in the units of `scale`
    double delta = 0.1;
    double scale = 1.0;     // coefficient per unit of block entry
    double c_sh = 1.0;
    int batches = 10;
    EstimatorMode estimator = EstimatorMode::kShadows;
    int workers = 1;
};

/// Copies N = ceil(c_sh scale^2 log(|terms|/delta) / (eps/2)^2).
inline uint64_t parameter_copies(size_t terms, double eps, double delta, double scale, double c_sh) {
    if (!(eps > 0)) throw OutOfRange("parameter estimation accuracy must be positive");
    const double lg = std::max(std::log(static_cast<double>(std::max<size_t>(terms, 1)) / delta), std::log(2.0));
    return static_cast<uint64_t>(std::ceil(c_sh * scale * scale * lg / (0.25 * eps * eps)));
}

namespace detail {

inline constexpr uint64_t kShadowChunk = 2048;

/// Round-robin batch sums of shadow values, by operator and batch.
struct BatchSums {
    std::vector<double> re, im;
    std::vector<uint64_t> count;
    size_t batches = 1;

    BatchSums(size_t ops, size_t k) : re(ops * k, 0.0), im(ops * k, 0.0), count(k, 0), batches(k) {}

    void merge(const BatchSums& o) {
        for (size_t i = 0; i < re.size(); ++i) {
            re[i] += o.re[i];
            im[i] += o.im[i];
        }
        for (size_t b = 0; b < batches; ++b) count[b] += o.count[b];
    }

    cplx estimate(size_t op) const {
        std::vector<double> r(batches), i(batches);
        for (size_t b = 0; b < batches; ++b) {
            const double c = static_cast<double>(std::max<uint64_t>(count[b], 1));
            r[b] = re[op * batches + b] / c;
            i[b] = im[op * batches + b] / c;
        }
        return {median(r), median(i)};
    }
};

/// Shadow values of `ops` over samples [begin, end) of one fixed state.
inline void shadow_chunk(const Vector& psi, const std::vector<DecodingOperator>& ops, uint64_t seed, uint64_t chunk,
                         uint64_t begin, uint64_t end, BatchSums& out) {
    Rng rng = substream(seed, "shadow-chunk", chunk);
    const double dim1 = static_cast<double>(psi.size()) + 1.0;
    std::vector<cplx> vu(ops.size());
    for (size_t o = 0; o < ops.size(); ++o) vu[o] = ops[o].v.dot(ops[o].u);
    for (uint64_t s = begin; s < end; ++s) {
        const Vector w = shadow_snapshot(psi, rng);
        const size_t b = static_cast<size_t>(s % out.batches);
        for (size_t o = 0; o < ops.size(); ++o) {
            const cplx val = dim1 * ops[o].v.dot(w) * w.dot(ops[o].u) - vu[o];
            out.re[o * out.batches + b] += val.real();
            out.im[o * out.batches + b] += val.imag();
        }
        ++out.count[b];
    }
}

/// Median-of-means shadow estimates of every operator from N samples,
/// split into fixed chunks so the result does not depend on `workers`.
inline std::vector<cplx> shadow_estimates(const Vector& psi, const std::vector<DecodingOperator>& ops, uint64_t N,
                                          int batches, uint64_t seed, int workers) {
    const size_t k = static_cast<size_t>(std::clamp<uint64_t>(static_cast<uint64_t>(std::max(batches, 1)), 1, N));
    const uint64_t chunks = (N + kShadowChunk - 1) / kShadowChunk;
    std::vector<BatchSums> parts(chunks, BatchSums(ops.size(), k));
    auto run = [&](uint64_t c) {
        shadow_chunk(psi, ops, seed, c, c * kShadowChunk, std::min(N, (c + 1) * kShadowChunk), parts[c]);
    };
    const uint64_t w = std::min<uint64_t>(static_cast<uint64_t>(std::max(workers, 1)), chunks);
    if (w <= 1) {
        for (uint64_t c = 0; c < chunks; ++c) run(c);
    } else {
        std::vector<std::thread> pool;
        for (uint64_t t = 0; t < w; ++t)
            pool.emplace_back([&, t] {
                for (uint64_t c = t; c < chunks; c += w) run(c);
            });
        for (auto& th : pool) th.join();
    }
    BatchSums total(ops.size(), k);
    for (const auto& p : parts) total.merge(p);
    std::vector<cplx> out(ops.size());
    for (size_t o = 0; o < ops.size(); ++o) out[o] = total.estimate(o);
    return out;
}

}  // namespace detail

/// Estimates scale * (block coefficient) for each term from referenced
/// pseudo-Choi copies of the state encoded by `b`.
inline ParameterEstimate estimate_parameters(const std::vector<PauliString>& terms, const BlockEncoding& b,
                                             const QueryOracle& oracle, const ParameterOptions& opt, Rng& rng,
                                             StageReport* report = nullptr) {
    if (terms.empty()) throw OutOfRange("estimate_parameters: no terms");
    ParameterEstimate out;
    out.epsilon = opt.epsilon;
    out.delta = opt.delta;
    const uint64_t N = parameter_copies(terms.size(), opt.epsilon, opt.delta, opt.scale, opt.c_sh);
    const uint64_t attempts = sample_attempts(N, pchoi_ref_success(b), rng);
    charge_preparations(oracle, b, attempts, true, report);
    if (report) report->copies += N;

    const PseudoChoiState state = pchoi_referenced(b.block(), opt.scale);
    std::vector<DecodingOperator> ops;
    ops.reserve(terms.size() + 1);
    ops.push_back(decoding_normalizer(b.n));
    for (const auto& t : terms) ops.push_back(decoding_term(t));

    std::vector<cplx> o(ops.size());
    if (opt.estimator == EstimatorMode::kExact) {
        for (size_t i = 0; i < ops.size(); ++i) o[i] = exact_expectation(state.vector(), ops[i]);
    } else {
        o = detail::shadow_estimates(state.vector(), ops, N, opt.batches, rng(), opt.workers);
    }
    for (size_t i = 0; i < terms.size(); ++i) out.entries[terms[i]] = lambda_from_shadows(o[i + 1], o[0], opt.scale);
    return out;
}

/// Per-term median over independent repetitions.
inline ParameterEstimate median_estimate(const std::vector<ParameterEstimate>& reps) {
    if (reps.empty()) throw OutOfRange("median_estimate: no repetitions");
    ParameterEstimate out = reps.front();
    for (auto& [p, v] : out.entries) {
        std::vector<double> xs;
        for (const auto& r : reps) xs.push_back(r.entries.at(p));
        v = detail::median(xs);
    }
    return out;
}

}  // namespace hamlearn
