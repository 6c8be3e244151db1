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

#include <cmath>
#include <utility>
#include <vector>

#include "hamlearn/blockenc/controlization_model.hpp"
#include "hamlearn/blockenc/lcu.hpp"
#include "hamlearn/channels/controlization.hpp"

namespace hamlearn {

using u128 = unsigned __int128;

inline u128 binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    u128 r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<u128>(n - k + i) / static_cast<u128>(i);
    return r;
}

struct MatrixLogCoefficients {
    std::vector<double> c;  // c_0 .. c_K
    double lambda = 0.0;    // sum_j |c_j|
};

/// Coefficients of L_K(U) = sum_{k=1}^K (-1)^{k+1} (U - I)^k / k in powers of U.
inline MatrixLogCoefficients matrix_log_coefficients(int K) {
    if (K < 1 || K > 40) throw OutOfRange("matrix_log_coefficients: K must be in [1, 40]");
    MatrixLogCoefficients out;
    out.c.assign(static_cast<size_t>(K + 1), 0.0);
    double h = 0;
    for (int k = 1; k <= K; ++k) h += 1.0 / k;
    out.c[0] = -h;
    for (int j = 1; j <= K; ++j) {
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        out.c[static_cast<size_t>(j)] = sign * static_cast<double>(binomial(K, j)) / j;
    }
    for (double v : out.c) out.lambda += std::abs(v);
    return out;
}

/// [log(K+1) + (2^K - 1)/K, log K + 2^K].
inline std::pair<double, double> matrix_log_lambda_bounds(int K) {
    const double p = std::ldexp(1.0, K);
    return {std::log(K + 1.0) + (p - 1.0) / K, std::log(static_cast<double>(K)) + p};
}

/// r^{K+1} / ((K+1)(1-r)).
inline double truncation_error_bound(double r, int K) {
    if (!(r >= 0 && r < 1)) throw OutOfRange("truncation_error_bound: need 0 <= r < 1");
    return std::pow(r, K + 1) / ((K + 1) * (1.0 - r));
}

/// K = ceil(log2(Delta/eps)), at least 1.
inline int matrix_log_order(double delta, double eps) {
    return std::max(1, static_cast<int>(std::ceil(std::log2(delta / eps) - 1e-12)));
}

struct MatrixLogOptions {
    bool check_norm = true;
    Controlization control;
    double r_bound = 0.5;  // promised ||H||/Delta; tightens the claimed truncation error
};

/// (Lambda, ceil(log2(K+1)), 2^{-(K+1)})-encoding of H/Delta as i L_K(U),
/// U = e^{-iH/Delta}, using only forward evolutions U^j.
inline BlockEncoding matrix_log_encoding(const QueryOracle& oracle, double delta, int K,
                                         const MatrixLogOptions& opt = {}) {
    if (!(delta > 0)) throw OutOfRange("matrix_log_encoding: Delta must be positive");
    if (opt.check_norm) oracle.check_normalization(delta);
    const auto coeffs = matrix_log_coefficients(K);
    const int b = lcu_ancillas(static_cast<size_t>(K + 1));
    const int64_t segs = opt.control.enabled ? opt.control.segments : 1;
    if (opt.control.enabled) {
        if (b > ControlSpec::kMaxControls) throw OutOfRange("controlized matrix-log encoding supports K <= 7");
        if (!opt.control.rng) throw OutOfRange("controlized construction needs an rng");
    }

    std::vector<Matrix> powers(static_cast<size_t>(K + 1));
    powers[0] = Matrix::Identity(Eigen::Index{1} << oracle.n(), Eigen::Index{1} << oracle.n());
    for (int j = 1; j <= K; ++j) powers[static_cast<size_t>(j)] = oracle.propagator(j / delta).matrix();

    std::vector<Matrix> branch = powers;
    if (opt.control.enabled) {
        // SEL = V_K ... V_1 with V_j = |j><j| (x) U^j + (I - |j><j|) (x) A_j.
        branch.assign(static_cast<size_t>(K + 1), powers[0]);
        for (int j = 1; j <= K; ++j) {
            const double tj = j / delta;
            const auto seq = sample_qdrift_sequence(oracle.n(), tj, segs, ControlSpec(b, static_cast<uint32_t>(j)),
                                                    *opt.control.rng);
            const Matrix a = qdrift_off_block(seq, oracle.propagator(tj / static_cast<double>(segs)).matrix());
            for (int i = 0; i <= K; ++i)
                branch[static_cast<size_t>(i)] = (i == j ? powers[static_cast<size_t>(j)] : a) * branch[static_cast<size_t>(i)];
        }
    }

    std::vector<BlockEncoding> encs;
    std::vector<cplx> y;
    for (int j = 0; j <= K; ++j) {
        QueryCost c;
        if (j > 0) c = opt.control.enabled ? qdrift_cost(j / delta, segs) : QueryCost::uniform(1, j / delta);
        encs.push_back(unitary_encoding(branch[static_cast<size_t>(j)], "U^" + std::to_string(j), c));
        y.push_back(kI * coeffs.c[static_cast<size_t>(j)]);
    }
    BlockEncoding out = lcu_encoding(encs, y, "H/Delta (matrix log)");
    double trunc = std::ldexp(1.0, -(K + 1));
    if (opt.r_bound < 0.5) {
        if (opt.check_norm && oracle.audit_norm() > opt.r_bound * delta + 1e-12)
            throw NormalizationViolation("matrix_log_encoding: ||H||/Delta exceeds the promised r_bound");
        trunc = std::min(trunc, truncation_error_bound(opt.r_bound, K));
    }
    out.eps_claimed += trunc;
    out.controlized = opt.control.enabled;
    out.reference.reset();
    if (detail::auditing()) out.reference = oracle.audit_dense_hamiltonian() / delta;
    return detail::finish(std::move(out));
}

}  // namespace hamlearn
