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

#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hamlearn/core/linalg.hpp"

namespace hamlearn {

/// Tensor product of single-qubit Paulis. letters()[0] is the leftmost
/// Kronecker factor, i.e. the most significant bit of a basis index.
class PauliString {
   public:
    static constexpr int kMaxQubits = 16;

    PauliString() = default;
    explicit PauliString(const std::string& letters) : n_(static_cast<int>(letters.size())) {
        if (n_ < 1 || n_ > kMaxQubits) throw OutOfRange("PauliString length out of range: " + letters);
        for (int q = 0; q < n_; ++q) {
            uint32_t bit = uint32_t{1} << (n_ - 1 - q);
            switch (letters[q]) {
                case 'I': break;
                case 'X': x_ |= bit; break;
                case 'Y': x_ |= bit; z_ |= bit; break;
                case 'Z': z_ |= bit; break;
                default: throw OutOfRange("bad Pauli letter in '" + letters + "'");
            }
        }
    }
    PauliString(int n, uint32_t x, uint32_t z) : n_(n), x_(x), z_(z) {
        if (n < 1 || n > kMaxQubits) throw OutOfRange("PauliString length out of range");
        uint32_t mask = (n == 32) ? ~0u : ((uint32_t{1} << n) - 1);
        if ((x & ~mask) || (z & ~mask)) throw OutOfRange("Pauli mask exceeds qubit count");
    }

    /// The index-th Pauli of 4^n in a fixed enumeration (x in low half, z in high half).
    static PauliString from_index(int n, uint64_t index) {
        uint32_t mask = (uint32_t{1} << n) - 1;
        return PauliString(n, static_cast<uint32_t>(index) & mask, static_cast<uint32_t>(index >> n) & mask);
    }
    uint64_t index() const { return uint64_t{x_} | (uint64_t{z_} << n_); }

    int n() const { return n_; }
    uint32_t x_mask() const { return x_; }
    uint32_t z_mask() const { return z_; }
    bool is_identity() const { return x_ == 0 && z_ == 0; }
    int weight() const { return std::popcount(x_ | z_); }

    char letter(int q) const {
        uint32_t bit = uint32_t{1} << (n_ - 1 - q);
        bool x = x_ & bit, z = z_ & bit;
        return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }
    std::string letters() const {
        std::string s(static_cast<size_t>(n_), 'I');
        for (int q = 0; q < n_; ++q) s[static_cast<size_t>(q)] = letter(q);
        return s;
    }

    /// Phase i^{#Y} common to every nonzero matrix element.
    cplx y_phase() const {
        static const cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return powers[std::popcount(x_ & z_) & 3];
    }

    /// <j ^ x| P |j>.
    cplx element(uint64_t j) const {
        cplx p = y_phase();
        return (std::popcount(static_cast<uint32_t>(j) & z_) & 1) ? -p : p;
    }

    Matrix dense() const {
        const Eigen::Index d = Eigen::Index{1} << n_;
        Matrix m = Matrix::Zero(d, d);
        for (Eigen::Index j = 0; j < d; ++j) m(j ^ x_, j) = element(static_cast<uint64_t>(j));
        return m;
    }

    bool commutes_with(const PauliString& o) const {
        return ((std::popcount(x_ & o.z_) + std::popcount(z_ & o.x_)) & 1) == 0;
    }

    friend bool operator==(const PauliString& a, const PauliString& b) {
        return a.n_ == b.n_ && a.x_ == b.x_ && a.z_ == b.z_;
    }
    friend auto operator<=>(const PauliString& a, const PauliString& b) {
        if (a.n_ != b.n_) return a.n_ <=> b.n_;
        return a.letters() <=> b.letters();
    }

   private:
    int n_ = 0;
    uint32_t x_ = 0;
    uint32_t z_ = 0;
};

/// P|v>, acting on the top n qubits of v when v has more qubits.
inline Vector apply_pauli(const PauliString& p, const Vector& v) {
    const int total = qubits_for_dim(v.size());
    if (total < p.n()) throw DimensionMismatch("Pauli larger than state");
    const int shift = total - p.n();
    const uint64_t x = uint64_t{p.x_mask()} << shift;
    const uint32_t z = p.z_mask();
    const cplx ph = p.y_phase();
    Vector out(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        const uint64_t hi = static_cast<uint64_t>(j) >> shift;
        cplx s = (std::popcount(static_cast<uint32_t>(hi) & z) & 1) ? -ph : ph;
        out(static_cast<Eigen::Index>(static_cast<uint64_t>(j) ^ x)) = s * v(j);
    }
    return out;
}

}  // namespace hamlearn

template <>
struct std::hash<hamlearn::PauliString> {
    size_t operator()(const hamlearn::PauliString& p) const noexcept {
        return std::hash<uint64_t>{}(p.index() * 64 + static_cast<uint64_t>(p.n()));
    }
};
