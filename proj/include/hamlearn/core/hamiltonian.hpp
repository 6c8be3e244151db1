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
#include <optional>
#include <random>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hamlearn/core/pauli.hpp"
#include "hamlearn/core/random.hpp"

namespace hamlearn {

inline constexpr int kMaxSystemQubits = 6;

struct Term {
    PauliString pauli;
    double coefficient = 0.0;
};

/// H = sum_a lambda_a E_a with distinct, non-identity E_a and |lambda_a| <= 1.
class SparseHamiltonian {
   public:
    SparseHamiltonian() = default;
    SparseHamiltonian(int n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
        if (n < 1 || n > kMaxSystemQubits) throw OutOfRange("system size must be in [1, 6]");
        std::unordered_set<PauliString> seen;
        for (const auto& t : terms_) {
            if (t.pauli.n() != n) throw InvalidHamiltonian("term " + t.pauli.letters() + " has wrong length");
            if (t.pauli.is_identity()) throw InvalidHamiltonian("identity term is not allowed");
            if (!seen.insert(t.pauli).second) throw InvalidHamiltonian("duplicate term " + t.pauli.letters());
            if (!(std::abs(t.coefficient) <= 1.0)) throw InvalidHamiltonian("coefficient magnitude exceeds 1");
        }
    }

    int n() const { return n_; }
    size_t m() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    double coefficient(const PauliString& p) const {
        for (const auto& t : terms_)
            if (t.pauli == p) return t.coefficient;
        return 0.0;
    }
    double l1_norm() const {
        double s = 0;
        for (const auto& t : terms_) s += std::abs(t.coefficient);
        return s;
    }
    double l2_norm_sq() const {
        double s = 0;
        for (const auto& t : terms_) s += t.coefficient * t.coefficient;
        return s;
    }

   private:
    int n_ = 0;
    std::vector<Term> terms_;
};

/// |Omega> = 2^{-n/2} sum_b |b>|b>; the first n qubits are the system.
inline StateVector omega_state(int n) {
    if (n < 1 || n > kMaxSystemQubits) throw OutOfRange("omega_state: n must be in [1, 6]");
    const Eigen::Index d = Eigen::Index{1} << n;
    Vector v = Vector::Zero(d * d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index b = 0; b < d; ++b) v(b * d + b) = amp;
    return StateVector(std::move(v));
}

inline DenseOperator hamiltonian_dense(const SparseHamiltonian& h) {
    const Eigen::Index d = Eigen::Index{1} << h.n();
    Matrix m = Matrix::Zero(d, d);
    for (const auto& t : h.terms()) {
        const uint32_t x = t.pauli.x_mask();
        for (Eigen::Index j = 0; j < d; ++j)
            m(static_cast<Eigen::Index>(static_cast<uint64_t>(j) ^ x), j) +=
                t.coefficient * t.pauli.element(static_cast<uint64_t>(j));
    }
    return DenseOperator(std::move(m));
}

/// tr(P^dagger A) / 2^n.
inline cplx fourier_coefficient(const Matrix& a, const PauliString& p) {
    const Eigen::Index d = a.rows();
    if (a.cols() != d || d != (Eigen::Index{1} << p.n()))
        throw DimensionMismatch("fourier_coefficient: dimensions disagree");
    cplx s = 0;
    const uint32_t x = p.x_mask();
    for (Eigen::Index j = 0; j < d; ++j)
        s += std::conj(p.element(static_cast<uint64_t>(j))) *
             a(static_cast<Eigen::Index>(static_cast<uint64_t>(j) ^ x), j);
    return s / static_cast<double>(d);
}
inline cplx fourier_coefficient(const DenseOperator& a, const PauliString& p) {
    return fourier_coefficient(a.matrix(), p);
}

inline DenseOperator traceless_part(const DenseOperator& a) {
    const double d = static_cast<double>(a.dim());
    Matrix m = a.matrix();
    const cplx shift = m.trace() / d;
    m.diagonal().array() -= shift;
    return DenseOperator(std::move(m));
}

/// Random instance: m distinct non-identity Paulis, coefficients uniform on
/// [-1, -gap] U [gap, 1].
inline SparseHamiltonian random_hamiltonian(int n, size_t m, double gap, Rng& rng) {
    if (n < 1 || n > kMaxSystemQubits) throw OutOfRange("random_hamiltonian: n must be in [1, 6]");
    const uint64_t total = (uint64_t{1} << (2 * n)) - 1;
    if (m > total) throw OutOfRange("random_hamiltonian: m exceeds number of non-identity Paulis");
    if (!(gap >= 0.0 && gap <= 1.0)) throw OutOfRange("random_hamiltonian: gap must be in [0, 1]");
    std::uniform_int_distribution<uint64_t> pick(1, total);
    std::uniform_real_distribution<double> mag(gap, 1.0);
    std::bernoulli_distribution sign(0.5);
    std::unordered_set<uint64_t> used;
    std::vector<Term> terms;
    while (terms.size() < m) {
        uint64_t idx = pick(rng);
        if (!used.insert(idx).second) continue;
        double c = mag(rng);
        terms.push_back({PauliString::from_index(n, idx), sign(rng) ? -c : c});
    }
    return SparseHamiltonian(n, std::move(terms));
}

}  // namespace hamlearn
