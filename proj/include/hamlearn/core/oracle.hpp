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
#include <memory>
#include <string>

#include "hamlearn/core/hamiltonian.hpp"
#include "hamlearn/core/ledger.hpp"

namespace hamlearn {

enum class AccessMode { kTimeReversal, kTimeForward };

inline std::string to_string(AccessMode m) {
    return m == AccessMode::kTimeReversal ? "time-reversal" : "time-forward";
}

inline constexpr double kTimeFloor = 1e-12;

/// Black-box access to e^{-iHt}. Learner code only sees unitaries and the
/// ledger; the Hamiltonian itself stays private.
class QueryOracle {
   public:
    QueryOracle(SparseHamiltonian h, AccessMode mode, std::shared_ptr<CostLedger> ledger = nullptr,
                double trace_shift = 0.0)
        : h_(std::move(h)),
          mode_(mode),
          ledger_(ledger ? std::move(ledger) : std::make_shared<CostLedger>()),
          trace_shift_(trace_shift) {
        Matrix dense = hamiltonian_dense(h_).matrix();
        dense.diagonal().array() += trace_shift_;
        Eigen::SelfAdjointEigenSolver<Matrix> es(dense);
        evecs_ = es.eigenvectors();
        evals_ = es.eigenvalues();
        norm_ = evals_.cwiseAbs().maxCoeff();
    }

    int n() const { return h_.n(); }
    AccessMode mode() const { return mode_; }
    CostLedger& ledger() const { return *ledger_; }
    std::shared_ptr<CostLedger> ledger_ptr() const { return ledger_; }

    /// e^{-iHt}, charged as one query.
    DenseOperator evolve(double t) const {
        DenseOperator u = propagator(t);
        if (std::abs(t) >= kTimeFloor) ledger_->record_query(t);
        else ledger_->charge(QueryCost{1, 0.0}, 1);
        return u;
    }

    /// e^{-iHt} for use inside a construction that charges its own cost.
    DenseOperator propagator(double t) const {
        if (mode_ == AccessMode::kTimeForward && t < 0)
            throw NegativeTimeForbidden("time-forward oracle cannot evolve for t < 0");
        if (std::abs(t) < kTimeFloor) return DenseOperator::identity(n());
        Eigen::VectorXcd ph(evals_.size());
        for (Eigen::Index i = 0; i < evals_.size(); ++i) ph(i) = std::exp(-kI * evals_(i) * t);
        return DenseOperator(evecs_ * ph.asDiagonal() * evecs_.adjoint());
    }

    /// Bulk charge for `uses` repetitions of a primitive costing `c`.
    void charge(const QueryCost& c, uint64_t uses = 1) const {
        if (mode_ == AccessMode::kTimeForward && c.negative_queries > 0)
            throw AccessModeViolation("time-forward oracle cannot be charged negative-time queries");
        ledger_->charge(c, uses);
    }

    void require_time_reversal(const char* what) const {
        if (mode_ != AccessMode::kTimeReversal)
            throw AccessModeViolation(std::string(what) + " requires time-reversal access");
    }

    /// Throws NormalizationViolation when Delta < 2||H||.
    void check_normalization(double delta) const {
        if (delta < 2.0 * norm_ - 1e-12)
            throw NormalizationViolation("Delta = " + std::to_string(delta) + " is below 2||H|| = " +
                                         std::to_string(2.0 * norm_));
    }

    /// Verification-only access to the hidden Hamiltonian (including any trace
    /// shift). Learning code must not call this.
    Matrix audit_dense_hamiltonian() const {
        Matrix m = hamiltonian_dense(h_).matrix();
        m.diagonal().array() += trace_shift_;
        return m;
    }
    const SparseHamiltonian& audit_hamiltonian() const { return h_; }
    double audit_norm() const { return norm_; }

   private:
    SparseHamiltonian h_;
    AccessMode mode_;
    std::shared_ptr<CostLedger> ledger_;
    double trace_shift_;
    Matrix evecs_;
    Eigen::VectorXd evals_;
    double norm_ = 0.0;
};

}  // namespace hamlearn
