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
#include <vector>

#include "hamlearn/blockenc/block_encoding.hpp"
#include "hamlearn/blockenc/controlization_model.hpp"
#include "hamlearn/channels/controlization.hpp"

namespace hamlearn {

/// Odd Chebyshev interpolant of (2/pi) arcsin(x) on [-1/2, 1/2].
class ArcsinApproximant {
   public:
    static ArcsinApproximant with_degree(int degree) {
        if (degree < 1 || degree % 2 == 0) throw OutOfRange("arcsin approximant degree must be odd and positive");
        ArcsinApproximant p;
        const int N = degree + 1;
        p.coeffs_.assign(static_cast<size_t>(degree + 1), 0.0);
        for (int j = 1; j <= degree; j += 2) {
            double s = 0;
            for (int k = 0; k < N; ++k) {
                const double th = kPi * (k + 0.5) / N;
                s += target(0.5 * std::cos(th)) * std::cos(j * th);
            }
            p.coeffs_[static_cast<size_t>(j)] = 2.0 * s / N;
        }
        return p;
    }

    /// Smallest odd degree whose measured sup-error is at most `tol`.
    static ArcsinApproximant for_error(double tol) {
        for (int d = 1; d <= 401; d += 2) {
            auto p = with_degree(d);
            if (p.sup_error() <= tol) return p;
        }
        throw OutOfRange("arcsin approximant: tolerance unreachable");
    }

    static double target(double x) { return (2.0 / kPi) * std::asin(x); }

    double operator()(double x) const {
        const double y = 2.0 * x;  // Clenshaw in T_j(y)
        double b1 = 0, b2 = 0;
        for (size_t j = coeffs_.size(); j-- > 1;) {
            const double b0 = 2.0 * y * b1 - b2 + coeffs_[j];
            b2 = b1;
            b1 = b0;
        }
        return y * b1 - b2 + coeffs_[0];
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    double sup_error(int grid = 4001) const {
        double e = 0;
        for (int i = 0; i < grid; ++i) {
            const double x = -0.5 + static_cast<double>(i) / (grid - 1);
            e = std::max(e, std::abs((*this)(x) - target(x)));
        }
        return e;
    }

   private:
    std::vector<double> coeffs_;
};

struct ArcsinOptions {
    double c_d = 4.0;
    /// Encode H/Delta exactly instead of through the polynomial.
    bool exact = false;
    bool check_norm = true;
    Controlization control;
};

/// Controlled queries used per arcsin encoding.
inline uint64_t arcsin_queries(double eps, double c_d) {
    return std::max<uint64_t>(2, static_cast<uint64_t>(std::ceil(c_d * std::log(1.0 / eps))));
}

/// (pi/2, 2, eps)-encoding of H/Delta from P(sin(H/Delta)).
inline BlockEncoding arcsin_encoding(const QueryOracle& oracle, double delta, double eps,
                                     const ArcsinOptions& opt = {}) {
    oracle.require_time_reversal("arcsin_encoding");
    if (!(eps > 0 && eps <= kPi / 4 + 1e-15)) throw OutOfRange("arcsin_encoding: eps must be in (0, pi/4]");
    if (!(delta > 0)) throw OutOfRange("arcsin_encoding: Delta must be positive");
    if (opt.check_norm) oracle.check_normalization(delta);

    const double t = 1.0 / delta;
    const Matrix u = oracle.propagator(t).matrix();
    const Matrix ud = oracle.propagator(-t).matrix();
    Matrix s;
    const int64_t segs = opt.control.enabled ? opt.control.segments : 1;
    if (opt.control.enabled) {
        if (!opt.control.rng) throw OutOfRange("controlized construction needs an rng");
        const ControlSpec spec("1");
        const auto fwd = sample_qdrift_sequence(oracle.n(), t, segs, spec, *opt.control.rng);
        const auto bwd = sample_qdrift_sequence(oracle.n(), -t, segs, spec, *opt.control.rng);
        const Matrix a = qdrift_off_block(fwd, oracle.propagator(t / static_cast<double>(segs)).matrix());
        const Matrix b = qdrift_off_block(bwd, oracle.propagator(-t / static_cast<double>(segs)).matrix());
        s = 0.5 * (-kI * a * ud + kI * u * b);
    } else {
        s = 0.5 * kI * (u - ud);
    }

    Matrix block;
    if (opt.exact && !opt.control.enabled) {
        const Matrix herm = 0.5 * (s + s.adjoint());
        block = hermitian_function(herm, [](double x) {
            return cplx(ArcsinApproximant::target(std::clamp(x, -1.0, 1.0)), 0.0);
        });
    } else {
        const auto p = ArcsinApproximant::for_error(2.0 * eps / kPi);
        Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Eigen::VectorXd sv = svd.singularValues();
        for (Eigen::Index i = 0; i < sv.size(); ++i) sv(i) = p(sv(i));
        block = svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
    }

    BlockEncoding out = pad_ancillas(dilation_encoding(block, 1.0, "arcsin"), 2);
    out.alpha = kPi / 2;
    out.eps_claimed = eps;
    out.target_label = "H/Delta (arcsin)";
    out.controlized = opt.control.enabled;
    const uint64_t q1 = arcsin_queries(eps, opt.c_d);
    const auto useg = static_cast<uint64_t>(segs);
    out.cost = QueryCost::uniform(q1 * useg, t / static_cast<double>(segs), (q1 / 2) * useg);
    out.reference.reset();
    if (detail::auditing()) out.reference = oracle.audit_dense_hamiltonian() / delta;
    return detail::finish(std::move(out));
}

}  // namespace hamlearn
