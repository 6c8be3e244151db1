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

#include <cstdint>
#include <vector>

#include "hamlearn/core/linalg.hpp"

namespace hamlearn {

enum class GateKind : uint8_t { H, S, Sdg, X, Y, Z, CNOT, CZ, SWAP };

/// Elementary Clifford gate. Qubit q is bit (d-1-q) of a basis index.
struct Gate {
    GateKind kind;
    int q0;
    int q1 = -1;
};

inline Gate inverse(const Gate& g) {
    if (g.kind == GateKind::S) return {GateKind::Sdg, g.q0, g.q1};
    if (g.kind == GateKind::Sdg) return {GateKind::S, g.q0, g.q1};
    return g;
}

namespace detail {
inline uint64_t qubit_bit(int d, int q) { return uint64_t{1} << (d - 1 - q); }
}  // namespace detail

namespace detail {

/// Inserts a zero at bit position of mask m (a power of two).
inline uint64_t insert_zero(uint64_t k, uint64_t m) { return ((k & ~(m - 1)) << 1) | (k & (m - 1)); }

/// Calls f(j) for every index j with bit a clear.
template <class F>
inline void for_pairs(uint64_t dim, uint64_t a, F&& f) {
    for (uint64_t hi = 0; hi < dim; hi += 2 * a)
        for (uint64_t j = hi; j < hi + a; ++j) f(j);
}

/// Calls f(j) for every index j with bits a and b clear.
template <class F>
inline void for_quads(uint64_t dim, uint64_t a, uint64_t b, F&& f) {
    const uint64_t lo = a < b ? a : b, hi = a < b ? b : a;
    for (uint64_t k = 0; k < dim / 4; ++k) f(insert_zero(insert_zero(k, lo), hi));
}

}  // namespace detail

inline void apply_gate(Vector& v, int d, const Gate& g) {
    const uint64_t dim = uint64_t{1} << d;
    const uint64_t a = detail::qubit_bit(d, g.q0);
    cplx* p = v.data();
    switch (g.kind) {
        case GateKind::H: {
            const double r = 0.70710678118654752440;
            detail::for_pairs(dim, a, [&](uint64_t j) {
                const cplx x = p[j], y = p[j | a];
                p[j] = r * (x + y);
                p[j | a] = r * (x - y);
            });
            break;
        }
        case GateKind::S:
            detail::for_pairs(dim, a, [&](uint64_t j) { p[j | a] = cplx(-p[j | a].imag(), p[j | a].real()); });
            break;
        case GateKind::Sdg:
            detail::for_pairs(dim, a, [&](uint64_t j) { p[j | a] = cplx(p[j | a].imag(), -p[j | a].real()); });
            break;
        case GateKind::X:
            detail::for_pairs(dim, a, [&](uint64_t j) { std::swap(p[j], p[j | a]); });
            break;
        case GateKind::Y:
            detail::for_pairs(dim, a, [&](uint64_t j) {
                const cplx x = p[j], y = p[j | a];
                p[j] = cplx(y.imag(), -y.real());      // -i y
                p[j | a] = cplx(-x.imag(), x.real());  // i x
            });
            break;
        case GateKind::Z:
            detail::for_pairs(dim, a, [&](uint64_t j) { p[j | a] = -p[j | a]; });
            break;
        case GateKind::CNOT: {
            const uint64_t b = detail::qubit_bit(d, g.q1);
            detail::for_quads(dim, a, b, [&](uint64_t j) { std::swap(p[j | a], p[j | a | b]); });
            break;
        }
        case GateKind::CZ: {
            const uint64_t b = detail::qubit_bit(d, g.q1);
            detail::for_quads(dim, a, b, [&](uint64_t j) { p[j | a | b] = -p[j | a | b]; });
            break;
        }
        case GateKind::SWAP: {
            const uint64_t b = detail::qubit_bit(d, g.q1);
            detail::for_quads(dim, a, b, [&](uint64_t j) { std::swap(p[j | a], p[j | b]); });
            break;
        }
    }
}

inline void apply_gates(Vector& v, int d, const std::vector<Gate>& gates) {
    for (const auto& g : gates) apply_gate(v, d, g);
}

/// Dense unitary of a gate sequence (first gate applied first).
inline Matrix gates_unitary(int d, const std::vector<Gate>& gates) {
    const Eigen::Index dim = Eigen::Index{1} << d;
    Matrix u(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        Vector e = Vector::Zero(dim);
        e(c) = 1;
        apply_gates(e, d, gates);
        u.col(c) = e;
    }
    return u;
}

}  // namespace hamlearn
