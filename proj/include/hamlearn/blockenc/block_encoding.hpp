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
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hamlearn/core.hpp"

namespace hamlearn {

/// Unitary U on a + n qubits (ancillas most significant) with
/// ||A - alpha <0^a|U|0^a>|| <= eps_claimed for the target A.
struct BlockEncoding {
    DenseOperator unitary;
    double alpha = 1.0;
    int a = 0;
    double eps_claimed = 0.0;
    std::string target_label;
    int n = 0;
    /// Evolution cost of one application of `unitary`.
    QueryCost cost;
    /// Target matrix, only populated while the encoding audit is enabled.
    std::optional<Matrix> reference;
    /// Built from sampled controlization trajectories; no per-trajectory
    /// spectral guarantee is claimed.
    bool controlized = false;

    Matrix block() const {
        const Eigen::Index d = Eigen::Index{1} << n;
        return unitary.matrix().topLeftCorner(d, d);
    }
    /// alpha * block, the encoded approximation of the target.
    Matrix encoded() const { return alpha * block(); }
    int total_qubits() const { return a + n; }
};

inline double verify_encoding(const BlockEncoding& b, const Matrix& reference) {
    const Eigen::Index d = Eigen::Index{1} << b.n;
    if (reference.rows() != d || reference.cols() != d) throw DimensionMismatch("verify_encoding: size mismatch");
    return operator_norm(reference - b.encoded());
}
inline double verify_encoding(const BlockEncoding& b, const DenseOperator& reference) {
    return verify_encoding(b, reference.matrix());
}

struct AuditRecord {
    std::string label;
    double error = 0.0;
    double claimed = 0.0;
};

/// Process-wide registry that checks every constructed encoding against its
/// target while enabled.
class EncodingAudit {
   public:
    static EncodingAudit& instance() {
        static EncodingAudit a;
        return a;
    }

    void set_enabled(bool on) {
        std::lock_guard lock(mu_);
        enabled_ = on;
    }
    bool enabled() const {
        std::lock_guard lock(mu_);
        return enabled_;
    }
    void reset() {
        std::lock_guard lock(mu_);
        checked_ = skipped_ = 0;
        failures_.clear();
    }

    void record(const BlockEncoding& b) {
        if (!enabled()) return;
        if (b.controlized || !b.reference) {
            std::lock_guard lock(mu_);
            ++skipped_;
            return;
        }
        const double err = verify_encoding(b, *b.reference);
        std::lock_guard lock(mu_);
        ++checked_;
        if (err > b.eps_claimed + 1e-9) failures_.push_back({b.target_label, err, b.eps_claimed});
    }

    size_t checked() const {
        std::lock_guard lock(mu_);
        return checked_;
    }
    size_t skipped() const {
        std::lock_guard lock(mu_);
        return skipped_;
    }
    std::vector<AuditRecord> failures() const {
        std::lock_guard lock(mu_);
        return failures_;
    }

   private:
    mutable std::mutex mu_;
    bool enabled_ = false;
    size_t checked_ = 0;
    size_t skipped_ = 0;
    std::vector<AuditRecord> failures_;
};

namespace detail {
inline bool auditing() { return EncodingAudit::instance().enabled(); }
inline BlockEncoding finish(BlockEncoding b) {
    EncodingAudit::instance().record(b);
    return b;
}
}  // namespace detail

/// (1, 0, 0)-encoding of a unitary.
inline BlockEncoding unitary_encoding(const Matrix& u, std::string label, QueryCost cost = {}) {
    BlockEncoding b;
    b.unitary = DenseOperator(u);
    b.alpha = 1.0;
    b.a = 0;
    b.n = b.unitary.qubits();
    b.target_label = std::move(label);
    b.cost = cost;
    if (detail::auditing()) b.reference = u;
    return detail::finish(std::move(b));
}

/// Exact (alpha, 1, 0)-encoding of A through the unitary dilation of A/alpha.
inline BlockEncoding dilation_encoding(const Matrix& a, double alpha, std::string label = "dilation") {
    if (!(alpha > 0)) throw OutOfRange("dilation_encoding: alpha must be positive");
    const Matrix c = a / alpha;
    if (operator_norm(c) > 1.0 + 1e-12) throw NormTooLarge("dilation_encoding: ||A/alpha|| > 1");
    const Eigen::Index d = c.rows();
    // One SVD C = W S V^dagger for both defect operators keeps
    // C sqrt(I - C^dagger C) = sqrt(I - C C^dagger) C exact in floating point.
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd s = svd.singularValues().cwiseMin(1.0);
    Eigen::VectorXd defect(d);
    for (Eigen::Index i = 0; i < d; ++i) defect(i) = std::sqrt((1.0 - s(i)) * (1.0 + s(i)));
    const Matrix& w = svd.matrixU();
    const Matrix& v = svd.matrixV();
    Matrix u(2 * d, 2 * d);
    u.topLeftCorner(d, d) = w * s.asDiagonal() * v.adjoint();
    u.topRightCorner(d, d) = w * defect.asDiagonal() * w.adjoint();
    u.bottomLeftCorner(d, d) = v * defect.asDiagonal() * v.adjoint();
    u.bottomRightCorner(d, d) = -v * s.asDiagonal() * w.adjoint();
    BlockEncoding b;
    b.unitary = DenseOperator(std::move(u));
    b.alpha = alpha;
    b.a = 1;
    b.n = qubits_for_dim(d);
    b.target_label = std::move(label);
    if (detail::auditing()) b.reference = a;
    return detail::finish(std::move(b));
}
inline BlockEncoding dilation_encoding(const DenseOperator& a, double alpha, std::string label = "dilation") {
    return dilation_encoding(a.matrix(), alpha, std::move(label));
}

/// Adds idle ancillas (most significant) up to `a_new`.
inline BlockEncoding pad_ancillas(const BlockEncoding& b, int a_new) {
    if (a_new < b.a) throw OutOfRange("pad_ancillas: cannot remove ancillas");
    if (a_new == b.a) return b;
    BlockEncoding out = b;
    const Eigen::Index extra = Eigen::Index{1} << (a_new - b.a);
    out.unitary = DenseOperator(kron(Matrix::Identity(extra, extra), b.unitary.matrix()));
    out.a = a_new;
    return out;
}

/// Same unitary read as an encoding of A/factor.
inline BlockEncoding reinterpret(const BlockEncoding& b, double factor, std::string label) {
    BlockEncoding out = b;
    out.alpha = b.alpha / factor;
    out.eps_claimed = b.eps_claimed / factor;
    out.target_label = std::move(label);
    if (out.reference) *out.reference /= factor;
    return out;
}

}  // namespace hamlearn
