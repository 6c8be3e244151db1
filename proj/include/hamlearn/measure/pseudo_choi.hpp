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

#include <utility>

#include "hamlearn/core.hpp"

namespace hamlearn {

/// Pseudo-Choi state of an operator A = H/delta_effective.
///
/// Referenceless: (A (x) I)|Omega> / norm, on 2n qubits.
/// Referenced:    ((A (x) I)|Omega>|0> + |Omega>|1>) / norm, on 2n+1 qubits,
/// with the flag as the least significant qubit.
struct PseudoChoiState {
    StateVector state;
    bool with_reference = false;
    double delta_effective = 1.0;
    int n = 0;

    const Vector& vector() const { return state.amplitudes(); }
    int qubits() const { return state.qubits(); }
};

/// Index of |sys>|ref>|flag> in the referenced layout.
inline Eigen::Index pchoi_index(int n, uint64_t sys, uint64_t ref, int flag) {
    return static_cast<Eigen::Index>((((sys << n) | ref) << 1) | static_cast<uint64_t>(flag));
}

/// (A (x) I)|Omega> as a raw 4^n vector.
inline Vector apply_to_omega(const Matrix& a) {
    const Eigen::Index d = a.rows();
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    Vector out(d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index b = 0; b < d; ++b) out(i * d + b) = a(i, b) * s;
    return out;
}

/// 1 + ||A||_F^2 / 2^n: the squared norm of the unnormalized referenced state.
inline double pchoi_normalizer_sq(const Matrix& a) {
    return 1.0 + a.squaredNorm() / static_cast<double>(a.rows());
}

inline PseudoChoiState pchoi_referenced(const Matrix& a, double delta_effective) {
    const int n = qubits_for_dim(a.rows());
    if (n < 1 || a.cols() != a.rows()) throw DimensionMismatch("pchoi_referenced: operator must be 2^n square");
    const Vector branch = apply_to_omega(a);
    const Eigen::Index dd = branch.size();
    Vector v(2 * dd);
    const double inv = 1.0 / std::sqrt(static_cast<double>(a.rows()));
    for (Eigen::Index k = 0; k < dd; ++k) {
        v(2 * k) = branch(k);
        const Eigen::Index i = k / a.rows(), b = k % a.rows();
        v(2 * k + 1) = i == b ? cplx(inv) : cplx(0);
    }
    v /= v.norm();
    return {StateVector(std::move(v)), true, delta_effective, n};
}

/// Throws DegenerateNormalizer when A = 0.
inline PseudoChoiState pchoi_referenceless(const Matrix& a, double delta_effective) {
    const int n = qubits_for_dim(a.rows());
    if (n < 1 || a.cols() != a.rows()) throw DimensionMismatch("pchoi_referenceless: operator must be 2^n square");
    Vector v = apply_to_omega(a);
    const double nv = v.norm();
    if (nv < 1e-300) throw DegenerateNormalizer("referenceless pseudo-Choi state of the zero operator");
    v /= nv;
    return {StateVector(std::move(v)), false, delta_effective, n};
}

/// Rank-1 operator |u><v|; tr(O rho) = <v|rho|u>.
struct DecodingOperator {
    enum class Kind { kTerm, kNormalizer };
    Kind kind = Kind::kTerm;
    PauliString pauli;  // meaningful for kTerm
    Vector u, v;
};

/// |Omega>|1> on 2n+1 qubits.
inline Vector omega_flag_one(int n) {
    const uint64_t d = uint64_t{1} << n;
    Vector out = Vector::Zero(static_cast<Eigen::Index>(2 * d * d));
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (uint64_t b = 0; b < d; ++b) out(pchoi_index(n, b, b, 1)) = s;
    return out;
}

/// O_a = (E_a (x) I)|Omega><Omega| (x) |0><1|.
inline DecodingOperator decoding_term(const PauliString& p) {
    const int n = p.n();
    const uint64_t d = uint64_t{1} << n;
    Vector u = Vector::Zero(static_cast<Eigen::Index>(2 * d * d));
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (uint64_t b = 0; b < d; ++b) u(pchoi_index(n, b ^ p.x_mask(), b, 0)) = s * p.element(b);
    return {DecodingOperator::Kind::kTerm, p, std::move(u), omega_flag_one(n)};
}

/// O_N = |Omega><Omega| (x) |1><1|.
inline DecodingOperator decoding_normalizer(int n) {
    Vector w = omega_flag_one(n);
    return {DecodingOperator::Kind::kNormalizer, PauliString(), w, w};
}

/// Exact <v|psi><psi|u>.
inline cplx exact_expectation(const Vector& psi, const DecodingOperator& o) {
    return o.v.dot(psi) * psi.dot(o.u);
}

}  // namespace hamlearn
