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
#include <random>
#include <vector>

#include "hamlearn/core.hpp"
#include "hamlearn/measure/clifford.hpp"
#include "hamlearn/measure/fast_clifford.hpp"
#include "hamlearn/measure/pseudo_choi.hpp"

namespace hamlearn {

struct ShadowSample {
    Clifford clifford;
    uint64_t outcome = 0;

    /// C^dagger |b>.
    Vector snapshot() const {
        const int d = clifford.d();
        Vector w = Vector::Zero(Eigen::Index{1} << d);
        w(static_cast<Eigen::Index>(outcome)) = 1.0;
        clifford.apply_inverse(w);
        return w;
    }
};

namespace detail {

inline uint64_t sample_basis(const Vector& phi, Rng& rng) {
    std::uniform_real_distribution<double> uni(0, 1);
    double r = uni(rng) * phi.squaredNorm();
    Eigen::Index j = 0;
    for (; j + 1 < phi.size(); ++j) {
        r -= std::norm(phi(j));
        if (r < 0) break;
    }
    return static_cast<uint64_t>(j);
}

}  // namespace detail

/// Rotate psi by a uniformly random Clifford and measure all qubits.
inline ShadowSample sample_shadow(const Vector& psi, Rng& rng) {
    const int d = qubits_for_dim(psi.size());
    if (d < 1) throw DimensionMismatch("sample_shadow: state dimension must be 2^d");
    ShadowSample s{random_clifford(d, rng), 0};
    Vector phi = psi;
    s.clifford.apply(phi);
    s.outcome = detail::sample_basis(phi, rng);
    return s;
}

/// Snapshot C^dagger|b> of one shadow round, without keeping the tableau.
/// Same distribution as sample_shadow(psi, rng).snapshot().
inline Vector shadow_snapshot(const Vector& psi, Rng& rng) {
    const int d = qubits_for_dim(psi.size());
    if (d < 1) throw DimensionMismatch("shadow_snapshot: state dimension must be 2^d");
    const FastClifford c = FastClifford::sample(d, rng);
    Vector w = psi;
    c.apply(w);
    const uint64_t b = detail::sample_basis(w, rng);
    w.setZero();
    w(static_cast<Eigen::Index>(b)) = 1.0;
    c.apply_inverse(w);
    return w;
}

/// (2^d + 1) <v|w><w|u> - <v|u> for snapshot w.
inline cplx shadow_value(const Vector& w, const DecodingOperator& o) {
    const double dim = static_cast<double>(w.size());
    return (dim + 1.0) * o.v.dot(w) * w.dot(o.u) - o.v.dot(o.u);
}

inline cplx shadow_value(const ShadowSample& s, const DecodingOperator& o) { return shadow_value(s.snapshot(), o); }

namespace detail {

inline double median(std::vector<double> x) {
    const size_t k = x.size() / 2;
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k), x.end());
    double m = x[k];
    if (x.size() % 2 == 0) m = 0.5 * (m + *std::max_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k)));
    return m;
}

}  // namespace detail

/// Median of batch means, taken separately on real and imaginary parts.
inline cplx median_of_means(const std::vector<cplx>& values, int batches = 10) {
    if (values.empty()) throw OutOfRange("median_of_means: no samples");
    const size_t k = std::min<size_t>(static_cast<size_t>(std::max(batches, 1)), values.size());
    std::vector<double> re(k, 0.0), im(k, 0.0);
    std::vector<size_t> cnt(k, 0);
    for (size_t i = 0; i < values.size(); ++i) {
        re[i % k] += values[i].real();
        im[i % k] += values[i].imag();
        ++cnt[i % k];
    }
    for (size_t b = 0; b < k; ++b) {
        re[b] /= static_cast<double>(cnt[b]);
        im[b] /= static_cast<double>(cnt[b]);
    }
    return {detail::median(re), detail::median(im)};
}

inline cplx shadow_estimate(const std::vector<ShadowSample>& samples, const DecodingOperator& o, int batches = 10) {
    if (samples.empty()) throw OutOfRange("shadow_estimate: empty sample list");
    std::vector<cplx> vals;
    vals.reserve(samples.size());
    for (const auto& s : samples) {
        if (Eigen::Index{1} << s.clifford.d() != o.u.size())
            throw DimensionMismatch("shadow_estimate: sample and operator dimensions differ");
        vals.push_back(shadow_value(s, o));
    }
    return median_of_means(vals, batches);
}

/// Streaming estimator for many decoding operators at once; keeps only the
/// per-sample values, never the samples.
class ShadowAccumulator {
   public:
    ShadowAccumulator(std::vector<DecodingOperator> ops, int batches = 10)
        : ops_(std::move(ops)), batches_(batches), values_(ops_.size()) {}

    void add(const ShadowSample& s) { add_snapshot(s.snapshot()); }
    void add_snapshot(const Vector& w) {
        for (size_t i = 0; i < ops_.size(); ++i) values_[i].push_back(shadow_value(w, ops_[i]));
    }
    /// Merge another accumulator over the same operators.
    void merge(const ShadowAccumulator& o) {
        for (size_t i = 0; i < ops_.size(); ++i)
            values_[i].insert(values_[i].end(), o.values_[i].begin(), o.values_[i].end());
    }

    size_t samples() const { return values_.empty() ? 0 : values_[0].size(); }
    const std::vector<cplx>& values(size_t i) const { return values_[i]; }
    cplx estimate(size_t i) const { return median_of_means(values_[i], batches_); }
    const std::vector<DecodingOperator>& operators() const { return ops_; }

   private:
    std::vector<DecodingOperator> ops_;
    int batches_;
    std::vector<std::vector<cplx>> values_;
};

inline constexpr double kNormalizerFloor = 0.1;

/// scale * Re[o_a] / Re[o_N].
inline double lambda_from_shadows(cplx o_a, cplx o_n, double scale) {
    if (!(o_n.real() > kNormalizerFloor))
        throw DegenerateNormalizer("normalizer estimate Re[o_N] = " + std::to_string(o_n.real()) + " below 0.1");
    return scale * o_a.real() / o_n.real();
}

}  // namespace hamlearn
