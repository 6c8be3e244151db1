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
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "hamlearn/channels.hpp"
#include "hamlearn/learner.hpp"

namespace hamlearn {

struct CheckResult {
    std::string name;
    bool pass = false;
    bool flagged = false;  // passed, but close enough to the bound to report
    std::string detail;
};

namespace checks {

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

using CoefficientFn = std::function<MatrixLogCoefficients(int)>;

/// sum_j c_j x^j == sum_{k<=K} (-1)^{k+1} (x-1)^k / k as exact rationals
/// (both scaled by lcm(1..K)), and Lambda within its closed-form bounds.
inline CheckResult matrix_log_coefficients_check(int k_max = 20, const CoefficientFn& coeffs = matrix_log_coefficients) {
    using i128 = __int128;
    CheckResult r{"matrix-log coefficients", true, false, ""};
    int bad_identity = 0, bad_bounds = 0;
    for (int K = 1; K <= k_max; ++K) {
        i128 L = 1;
        for (int k = 1; k <= K; ++k) L = L / std::gcd(static_cast<long long>(L), static_cast<long long>(k)) * k;
        const auto c = coeffs(K);
        for (int j = 0; j <= K; ++j) {
            i128 series = 0;
            for (int k = std::max(j, 1); k <= K; ++k) {
                const int sign = ((k + 1) + (k - j)) % 2 == 0 ? 1 : -1;
                series += sign * static_cast<i128>(binomial(k, j)) * (L / k);
            }
            // c_j must be the rational series / L to double precision.
            const double exact = static_cast<double>(series) / static_cast<double>(L);
            const double got = c.c[static_cast<size_t>(j)];
            if (std::abs(got - exact) > 1e-12 * std::max(1.0, std::abs(exact))) ++bad_identity;
        }
        double lambda = 0;
        for (double v : c.c) lambda += std::abs(v);
        const auto [lo, hi] = matrix_log_lambda_bounds(K);
        if (lambda < lo - 1e-12 || lambda > hi + 1e-12 || std::abs(lambda - c.lambda) > 1e-9 * lambda) ++bad_bounds;
    }
    r.pass = bad_identity == 0 && bad_bounds == 0;
    r.detail = "K=1.." + std::to_string(k_max) + ": " + std::to_string(bad_identity) + " coefficient mismatches, " +
               std::to_string(bad_bounds) + " Lambda bound violations";
    return r;
}

struct LambdaRow {
    int K;
    double lambda, lo, hi;
};

inline std::vector<LambdaRow> lambda_table(int k_max = 20) {
    std::vector<LambdaRow> rows;
    for (int K = 1; K <= k_max; ++K) {
        const auto [lo, hi] = matrix_log_lambda_bounds(K);
        rows.push_back({K, matrix_log_coefficients(K).lambda, lo, hi});
    }
    return rows;
}

/// ||H/Delta - i L_K(e^{-iH/Delta})|| <= 2^{-(K+1)} at Delta = 2||H||.
inline CheckResult truncation_check(int instances = 200, uint64_t seed = 17) {
    CheckResult r{"matrix-log truncation", true, false, ""};
    Rng rng = substream(seed, "truncation");
    std::uniform_int_distribution<int> nd(1, 3);
    std::uniform_int_distribution<int> md(1, 4);
    double worst = 0;
    for (int rep = 0; rep < instances; ++rep) {
        const int n = nd(rng);
        const auto h = random_hamiltonian(n, static_cast<size_t>(std::min(md(rng), (1 << (2 * n)) - 1)), 0.1, rng);
        const Matrix hd = hamiltonian_dense(h).matrix();
        const double delta = 2.0 * operator_norm(hd);
        const Matrix u = hermitian_function(hd, [delta](double x) { return std::exp(-kI * x / delta); });
        const Matrix id = Matrix::Identity(u.rows(), u.cols());
        for (int K : {2, 4, 6}) {
            Matrix series = Matrix::Zero(u.rows(), u.cols()), pw = id;
            for (int k = 1; k <= K; ++k) {
                pw = pw * (u - id);
                series += ((k % 2 == 1) ? 1.0 : -1.0) / k * pw;
            }
            const double ratio = operator_norm(hd / delta - kI * series) / std::ldexp(1.0, -(K + 1));
            worst = std::max(worst, ratio);
        }
    }
    r.pass = worst <= 1.0;
    r.detail = std::to_string(instances) + " instances, K in {2,4,6}: worst error / 2^-(K+1) = " + fmt(worst);
    return r;
}

/// Builds one encoding of every kind with the audit enabled.
inline CheckResult encoding_audit_check(uint64_t seed = 23) {
    auto& audit = EncodingAudit::instance();
    const bool was = audit.enabled();
    const size_t checked0 = audit.checked(), failed0 = audit.failures().size();
    audit.set_enabled(true);
    Rng rng = substream(seed, "audit");
    for (int rep = 0; rep < 6; ++rep) {
        const int n = 1 + rep % 2;
        const auto h = random_hamiltonian(n, static_cast<size_t>(1 + rep % 3), 0.1, rng);
        QueryOracle tr(h, AccessMode::kTimeReversal);
        QueryOracle tf(h, AccessMode::kTimeForward);
        const double delta = 2.0 * static_cast<double>(h.m());
        pauli_lcu_encoding(h);
        for (double eps : {1e-1, 1e-2, 1e-4}) arcsin_encoding(tr, delta, eps);
        const auto bh = arcsin_encoding(tr, delta, 0.01, {4.0, true, true, {}});
        const auto br = residual_encoding(bh, h, delta);
        amplify(br, 0.5, 0.01, {delta, 0.01, 2.0, 1});
        for (int K = 1; K <= 6; ++K) matrix_log_encoding(tf, 2.0 * tf.audit_norm(), K);
    }
    CheckResult r{"block-encoding audit", true, false, ""};
    auto f = audit.failures();
    f.erase(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(failed0));
    const size_t checked = audit.checked() - checked0;
    r.pass = f.empty() && checked > 0;
    r.detail = std::to_string(checked) + " encodings verified, " + std::to_string(f.size()) + " above claim";
    if (!f.empty()) r.detail += " (first: " + f.front().label + " " + fmt(f.front().error) + " > " + fmt(f.front().claimed) + ")";
    audit.set_enabled(was);
    return r;
}

inline double chi2_pvalue(const std::vector<double>& observed, const std::vector<double>& expected) {
    double stat = 0;
    int bins = 0;
    for (size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0) {
            if (observed[i] > 0) return 0.0;
            continue;
        }
        stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
        ++bins;
    }
    if (bins < 2) return 1.0;
    boost::math::chi_squared dist(bins - 1);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Bell outcomes against |lambda_a|^2 / ||lambda||^2.
inline CheckResult bell_check(int instances = 20, int draws = 10000, uint64_t seed = 99) {
    CheckResult r{"Bell sampling chi-squared", true, false, ""};
    Rng rng = substream(seed, "bell");
    double min_p = 1.0;
    for (int inst = 0; inst < instances; ++inst) {
        const int n = 1 + inst % 3;
        const size_t m = std::min<size_t>(1 + inst % 5, (size_t{1} << (2 * n)) - 1);
        const auto h = random_hamiltonian(n, m, 0.1, rng);
        const auto s = pchoi_referenceless(hamiltonian_dense(h).matrix(), 1.0);
        const double l2 = h.l2_norm_sq();
        std::vector<double> expect(size_t{1} << (2 * n), 0.0), obs(expect.size(), 0.0);
        for (const auto& t : h.terms()) expect[t.pauli.index()] = t.coefficient * t.coefficient / l2 * draws;
        BellSampler sampler(s);
        for (int i = 0; i < draws; ++i) obs[sampler(rng).index()] += 1;
        min_p = std::min(min_p, chi2_pvalue(obs, expect));
    }
    r.pass = min_p > 1e-3;
    r.detail = std::to_string(instances) + " instances x " + std::to_string(draws) + " draws: min p-value " + fmt(min_p);
    return r;
}

/// Single-sample variance of every decoding operator and bias of the mean.
inline CheckResult shadow_check(int states = 10, int samples = 10000, uint64_t seed = 31) {
    CheckResult r{"shadow variance and bias", true, false, ""};
    Rng rng = substream(seed, "shadows");
    double worst_var = 0, worst_bias = 0;
    for (int inst = 0; inst < states; ++inst) {
        const int n = 1 + inst % 3;
        const auto h = random_hamiltonian(n, std::min<size_t>(1 + inst % 4, (size_t{1} << (2 * n)) - 1), 0.1, rng);
        const double delta = 2.0 * h.l1_norm();
        const auto s = pchoi_referenced(hamiltonian_dense(h).matrix() / delta, delta);
        std::vector<DecodingOperator> ops{decoding_normalizer(n)};
        for (const auto& t : h.terms()) ops.push_back(decoding_term(t.pauli));
        std::vector<cplx> sum(ops.size());
        std::vector<double> sq(ops.size(), 0.0);
        for (int i = 0; i < samples; ++i) {
            const Vector w = shadow_snapshot(s.vector(), rng);
            for (size_t k = 0; k < ops.size(); ++k) {
                const cplx v = shadow_value(w, ops[k]);
                sum[k] += v;
                sq[k] += std::norm(v);
            }
        }
        for (size_t k = 0; k < ops.size(); ++k) {
            const cplx mean = sum[k] / static_cast<double>(samples);
            const double var = (sq[k] - samples * std::norm(mean)) / (samples - 1);
            worst_var = std::max(worst_var, var);
            const double sigma = std::sqrt(var / samples);
            const double bias = std::abs(mean - exact_expectation(s.vector(), ops[k]));
            worst_bias = std::max(worst_bias, bias / std::max(sigma, 1e-300));
        }
    }
    r.pass = worst_var <= 6.5 && worst_bias <= 4.0;
    r.flagged = worst_var > 6.0 && worst_var <= 6.5;
    r.detail = std::to_string(states) + " states x " + std::to_string(samples) + " samples: max variance " +
               fmt(worst_var) + ", max |bias|/sigma " + fmt(worst_bias);
    return r;
}

/// Exact qDRIFT-averaged channel against controlled e^{-iHt}.
inline CheckResult controlization_check(int instances = 50, uint64_t seed = 8) {
    CheckResult r{"controlization Choi distance", true, false, ""};
    Rng rng = substream(seed, "controlization");
    std::uniform_int_distribution<int> nd(1, 2);
    std::uniform_real_distribution<double> th(0.05, 1.0);
    std::uniform_int_distribution<int64_t> Nd(1, 200);
    double worst = 0, time_err = 0;
    for (int rep = 0; rep < instances; ++rep) {
        const int n = nd(rng);
        const auto h = random_hamiltonian(n, static_cast<size_t>(1 + rep % 3), 0.1, rng);
        const DenseOperator hd = hamiltonian_dense(h);
        const double norm = operator_norm(hd.matrix());
        const double t = th(rng) / norm;
        const int64_t N = Nd(rng);
        const ControlSpec spec("1");
        const double d = choi_trace_distance(qdrift_channel_choi(hd, t, N, spec),
                                             unitary_choi(controlled_target(hd, t, spec)));
        worst = std::max(worst, d / (t * t * norm * norm / static_cast<double>(N)));
        QueryOracle o(h, AccessMode::kTimeReversal);
        qdrift_sample(o, t, N, spec, rng);
        time_err = std::max(time_err, std::abs(o.ledger().snapshot().t_total - t));
    }
    r.pass = worst <= 1.0 && time_err <= 1e-12;
    r.detail = std::to_string(instances) + " (H, t, N): worst distance / (t||H||)^2/N = " + fmt(worst) +
               ", charged-time error " + fmt(time_err);
    return r;
}

/// Q = ceil(2(c+1)N/p) Bernoulli trials give N successes except with
/// frequency at most e^{-cN}.
inline CheckResult copies_check(int reps = 10000, uint64_t seed = 4) {
    CheckResult r{"copies-to-queries", true, false, ""};
    Rng rng = substream(seed, "copies");
    std::string d;
    for (double p : {0.5, 0.2}) {
        const uint64_t N = 10;
        const double c = 1.0;
        const uint64_t Q = copies_to_queries(N, p, c);
        int fail = 0;
        for (int k = 0; k < reps; ++k) {
            uint64_t got = 0;
            std::bernoulli_distribution b(p);
            for (uint64_t q = 0; q < Q; ++q) got += b(rng);
            fail += got < N;
        }
        const double freq = static_cast<double>(fail) / reps;
        r.pass = r.pass && freq <= std::exp(-c * static_cast<double>(N));
        d += std::string(d.empty() ? "" : "; ") + "p=" + fmt(p) + " Q=" + std::to_string(Q) + " failures " +
             std::to_string(fail) + "/" + std::to_string(reps);
    }
    r.detail = d;
    return r;
}

/// Mean successful copies to collect every term against the sample bound.
inline CheckResult coupon_check(int runs = 2000, uint64_t seed = 5) {
    CheckResult r{"coupon-collector bound", true, false, ""};
    Rng rng = substream(seed, "coupon");
    double worst = 0;
    for (int m : {2, 3, 5}) {
        std::vector<Term> terms;
        for (int a = 0; a < m; ++a) terms.push_back({PauliString::from_index(2, static_cast<uint64_t>(a + 1)), 1.0 / std::sqrt(m)});
        const auto s = pchoi_referenceless(hamiltonian_dense(SparseHamiltonian(2, terms)).matrix(), 1.0);
        BellSampler sampler(s);
        const double gamma = 0.5 / std::sqrt(m);
        const auto bound = static_cast<double>(structure_copies(1.0, gamma, m, 0.1, 1.0));
        int over = 0;
        for (int k = 0; k < runs; ++k) {
            std::set<PauliString> seen;
            uint64_t c = 0;
            while (seen.size() < static_cast<size_t>(m)) {
                seen.insert(sampler(rng));
                ++c;
            }
            over += static_cast<double>(c) > bound;
        }
        worst = std::max(worst, static_cast<double>(over) / runs);
    }
    r.pass = worst <= 0.1;
    r.detail = "uniform m in {2,3,5}: worst frequency of exceeding the copy bound " + fmt(worst);
    return r;
}

struct GalacticRow {
    double p;
    GalacticParams g;
};

inline std::vector<GalacticRow> galactic_table(double h_norm = 1.0, double eps = 0.1) {
    std::vector<GalacticRow> rows;
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0, 32.0, 64.0}) rows.push_back({p, galactic_params(p, h_norm, eps)});
    return rows;
}

/// p = 1 reproduces K = ceil(log2(Delta/eps)); K >= 1 up to p = 64.
inline CheckResult galactic_check() {
    CheckResult r{"galactic parameters", true, false, ""};
    int off = 0, small = 0;
    for (double hn : {0.25, 0.5, 1.0, 2.0, 5.0})
        for (double eps : {0.4, 0.2, 0.1, 0.05, 0.01, 0.001}) {
            const auto g = galactic_params(1.0, hn, eps);
            off += std::abs(g.K - matrix_log_order(2.0 * hn, eps)) > 1;
            for (int p = 1; p <= 64; ++p) small += galactic_params(p, hn, eps).K < 1;
            for (double p = 1.0; p <= 64.0; p += 0.25) small += galactic_params(p, hn, eps).K < 1;
        }
    r.pass = off == 0 && small == 0;
    r.detail = std::to_string(off) + " p=1 mismatches beyond +-1, " + std::to_string(small) + " cases with K < 1";
    return r;
}

}  // namespace checks
}  // namespace hamlearn
