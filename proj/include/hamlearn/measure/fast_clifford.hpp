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
#include <vector>

#include "hamlearn/core.hpp"
#include "hamlearn/measure/clifford.hpp"

namespace hamlearn {

/// Uniformly random Clifford stored in Bruhat form for fast application:
///
///     C = M2 . H_h . M1,
///
/// where M1 and M2 are monomial (permutation times phase) and H_h applies
/// Hadamards to the qubits flagged in h. Obtained by conjugating a
/// Bravyi-Maslov sample by H on every qubit, which turns both Hadamard-free
/// factors into monomial maps. Qubit q is bit q of a basis index here.
class FastClifford {
   public:
    static FastClifford sample(int d, Rng& rng) {
        if (d < 1 || d > Clifford::kMaxQubits) throw OutOfRange("FastClifford: d must be in [1, 13]");
        auto f = detail::sample_bruhat(d, rng);
        const uint32_t mask = (1u << d) - 1;
        const auto a = static_cast<uint32_t>(rng()) & mask;
        const auto b = static_cast<uint32_t>(rng()) & mask;
        return FastClifford(f, a, b);
    }

    /// Pauli layer X^a Z^b acts first.
    FastClifford(const detail::BruhatFactors& f, uint32_t a, uint32_t b) : d_(f.n) {
        const int d = d_;
        const uint32_t dim = 1u << d;
        for (int q = 0; q < d; ++q)
            if (f.hada[static_cast<size_t>(q)]) hada_ |= 1u << q;
        src1_.resize(dim);
        src2_.resize(dim);
        ph1_.resize(dim);
        ph2_.resize(dim);
        // Every table below is filled by a recursion on the lowest set bit.
        const auto lm = linear_table(f.lower_m), l = linear_table(f.lower);
        const auto qm = quad_table(f.symmetric_m), qg = quad_table(f.symmetric);
        std::vector<uint32_t> inv_perm(static_cast<size_t>(d));
        for (int q = 0; q < d; ++q) inv_perm[static_cast<size_t>(f.perm[static_cast<size_t>(q)])] = static_cast<uint32_t>(q);
        std::vector<uint32_t> unperm(dim, 0);
        std::vector<uint8_t> zpar(dim, 0);
        for (uint32_t x = 1; x < dim; ++x) {
            const uint32_t rest = x & (x - 1);
            const int i = std::countr_zero(x);
            unperm[x] = unperm[rest] | (1u << inv_perm[static_cast<size_t>(i)]);
            zpar[x] = static_cast<uint8_t>(zpar[rest] ^ ((b >> i) & 1u));
        }
        for (uint32_t y = 0; y < dim; ++y) {
            const uint32_t xp = lm[y];
            const uint32_t x = xp ^ a;
            src1_[y] = x;
            ph1_[y] = static_cast<uint8_t>((2 * zpar[x] + qm[xp]) & 3);
            const uint32_t x1 = l[y];
            src2_[y] = unperm[x1];
            ph2_[y] = qg[x1];
        }
    }

    int d() const { return d_; }

    void apply(Vector& v) const {
        scratch_.resize(v.size());
        gather(v, scratch_, src1_, ph1_);
        hadamards(scratch_);
        gather(scratch_, v, src2_, ph2_);
    }

    void apply_inverse(Vector& v) const {
        scratch_.resize(v.size());
        scatter_conj(v, scratch_, src2_, ph2_);
        hadamards(scratch_);
        scatter_conj(scratch_, v, src1_, ph1_);
    }

    Matrix dense() const {
        const Eigen::Index dim = Eigen::Index{1} << d_;
        Matrix u(dim, dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            Vector e = Vector::Zero(dim);
            e(k) = 1.0;
            apply(e);
            u.col(k) = e;
        }
        return u;
    }

   private:
    /// M y for every y.
    static std::vector<uint32_t> linear_table(const BitMat& m) {
        const int n = m.n();
        std::vector<uint32_t> col(static_cast<size_t>(n), 0);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (m.get(r, c)) col[static_cast<size_t>(c)] |= 1u << r;
        std::vector<uint32_t> t(size_t{1} << n, 0);
        for (uint32_t y = 1; y < t.size(); ++y) t[y] = t[y & (y - 1)] ^ col[static_cast<size_t>(std::countr_zero(y))];
        return t;
    }
    /// Exponent of i for prod_q S_q^{G_qq} prod_{i<j} CZ_ij^{G_ij} on |x>, every x.
    static std::vector<uint8_t> quad_table(const BitMat& g) {
        const int n = g.n();
        std::vector<uint8_t> t(size_t{1} << n, 0);
        for (uint32_t x = 1; x < t.size(); ++x) {
            const uint32_t rest = x & (x - 1);
            const int i = std::countr_zero(x);
            const int add = static_cast<int>(g.get(i, i)) + 2 * (std::popcount(g.row(i) & rest) & 1);
            t[x] = static_cast<uint8_t>((t[rest] + add) & 3);
        }
        return t;
    }
    static cplx ipow(uint8_t k, cplx z) {
        switch (k & 3) {
            case 0: return z;
            case 1: return {-z.imag(), z.real()};
            case 2: return -z;
            default: return {z.imag(), -z.real()};
        }
    }
    static void gather(const Vector& in, Vector& out, const std::vector<uint32_t>& src,
                       const std::vector<uint8_t>& ph) {
        for (size_t y = 0; y < src.size(); ++y) out(static_cast<Eigen::Index>(y)) = ipow(ph[y], in(src[y]));
    }
    static void scatter_conj(const Vector& in, Vector& out, const std::vector<uint32_t>& src,
                             const std::vector<uint8_t>& ph) {
        for (size_t y = 0; y < src.size(); ++y)
            out(src[y]) = ipow(static_cast<uint8_t>(4 - ph[y]), in(static_cast<Eigen::Index>(y)));
    }
    void hadamards(Vector& v) const {
        const uint64_t dim = uint64_t{1} << d_;
        const double r = 0.70710678118654752440;
        cplx* p = v.data();
        for (uint32_t m = hada_; m; m &= m - 1) {
            const uint64_t a = uint64_t{1} << std::countr_zero(m);
            detail::for_pairs(dim, a, [&](uint64_t j) {
                const cplx x = p[j], y = p[j | a];
                p[j] = r * (x + y);
                p[j | a] = r * (x - y);
            });
        }
    }

    int d_;
    uint32_t hada_ = 0;
    std::vector<uint32_t> src1_, src2_;
    std::vector<uint8_t> ph1_, ph2_;
    mutable Vector scratch_;
};

}  // namespace hamlearn
