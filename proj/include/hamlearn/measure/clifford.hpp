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
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hamlearn/core.hpp"

namespace hamlearn {

/// Square matrix over GF(2); row r is a bitmask of columns.
class BitMat {
   public:
    explicit BitMat(int n) : n_(n), rows_(static_cast<size_t>(n), 0u) {}

    static BitMat identity(int n) {
        BitMat m(n);
        for (int i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }
    /// [[ul, ur], [ll, lr]].
    static BitMat from_quadrants(const BitMat& ul, const BitMat& ur, const BitMat& ll, const BitMat& lr) {
        const int n = ul.n_;
        BitMat m(2 * n);
        for (int r = 0; r < n; ++r) {
            m.rows_[static_cast<size_t>(r)] = ul.row(r) | (ur.row(r) << n);
            m.rows_[static_cast<size_t>(r + n)] = ll.row(r) | (lr.row(r) << n);
        }
        return m;
    }

    int n() const { return n_; }
    bool get(int r, int c) const { return (rows_[static_cast<size_t>(r)] >> c) & 1u; }
    void set(int r, int c, bool v) {
        uint32_t& row = rows_[static_cast<size_t>(r)];
        row = v ? (row | (1u << c)) : (row & ~(1u << c));
    }
    uint32_t row(int r) const { return rows_[static_cast<size_t>(r)]; }
    void set_row(int r, uint32_t v) { rows_[static_cast<size_t>(r)] = v; }

    friend BitMat operator*(const BitMat& a, const BitMat& b) {
        BitMat out(a.n_);
        for (int i = 0; i < a.n_; ++i) {
            uint32_t acc = 0;
            for (int k = 0; k < a.n_; ++k)
                if (a.get(i, k)) acc ^= b.row(k);
            out.rows_[static_cast<size_t>(i)] = acc;
        }
        return out;
    }

    BitMat transposed() const {
        BitMat t(n_);
        for (int r = 0; r < n_; ++r)
            for (int c = 0; c < n_; ++c) t.set(c, r, get(r, c));
        return t;
    }

    /// Inverse of a unit lower-triangular matrix by forward substitution.
    BitMat inv_lower_triangular() const {
        BitMat inv = identity(n_);
        for (int r = 0; r < n_; ++r)
            for (int c = 0; c < r; ++c)
                if (get(r, c)) inv.rows_[static_cast<size_t>(r)] ^= inv.row(c);
        return inv;
    }

   private:
    int n_;
    std::vector<uint32_t> rows_;
};

/// i^phase * prod_q P(x_q, z_q), with P(1, 1) = Y. Bit q is qubit q.
struct PauliRow {
    uint32_t x = 0;
    uint32_t z = 0;
    uint8_t phase = 0;  // mod 4

    bool sign() const { return phase == 2; }
    friend bool operator==(const PauliRow&, const PauliRow&) = default;
};

/// a * b with exact phase bookkeeping.
inline PauliRow pauli_mul(const PauliRow& a, const PauliRow& b) {
    int g = 0;
    for (uint32_t m = (a.x | a.z) & (b.x | b.z); m; m &= m - 1) {
        const uint32_t bit = m & (~m + 1);
        const int x1 = (a.x & bit) != 0, z1 = (a.z & bit) != 0;
        const int x2 = (b.x & bit) != 0, z2 = (b.z & bit) != 0;
        if (x1 && z1) g += z2 - x2;
        else if (x1) g += z2 * (2 * x2 - 1);
        else g += x2 * (1 - 2 * z2);
    }
    PauliRow r;
    r.x = a.x ^ b.x;
    r.z = a.z ^ b.z;
    r.phase = static_cast<uint8_t>(((a.phase + b.phase + g) % 4 + 4) % 4);
    return r;
}

inline bool anticommute(const PauliRow& a, const PauliRow& b) {
    return (std::popcount((a.x & b.z) ^ (a.z & b.x)) & 1) != 0;
}

/// Dense matrix of a PauliRow on d qubits (qubit q is bit d-1-q of an index).
inline Matrix pauli_row_dense(const PauliRow& p, int d) {
    uint32_t xm = 0, zm = 0;
    for (int q = 0; q < d; ++q) {
        if ((p.x >> q) & 1u) xm |= 1u << (d - 1 - q);
        if ((p.z >> q) & 1u) zm |= 1u << (d - 1 - q);
    }
    static const cplx ip[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return ip[p.phase & 3] * PauliString(d, xm, zm).dense();
}

/// Clifford unitary C described by C X_q C^dagger and C Z_q C^dagger.
class Clifford {
   public:
    static constexpr int kMaxQubits = 13;

    explicit Clifford(int d) : d_(d), xs_(static_cast<size_t>(d)), zs_(static_cast<size_t>(d)) {
        if (d < 1 || d > kMaxQubits) throw OutOfRange("Clifford supports 1..13 qubits");
        for (int q = 0; q < d; ++q) {
            xs_[static_cast<size_t>(q)].x = 1u << q;
            zs_[static_cast<size_t>(q)].z = 1u << q;
        }
    }

    int d() const { return d_; }
    const PauliRow& x_image(int q) const { return xs_[static_cast<size_t>(q)]; }
    const PauliRow& z_image(int q) const { return zs_[static_cast<size_t>(q)]; }
    void set_images(int q, PauliRow x, PauliRow z) {
        xs_[static_cast<size_t>(q)] = x;
        zs_[static_cast<size_t>(q)] = z;
        gates_.clear();
    }

    /// C P C^dagger.
    PauliRow conjugate(const PauliRow& p) const {
        PauliRow out;
        out.phase = p.phase;
        // P = i^{#Y} prod_q X_q^{x_q} Z_q^{z_q} in qubit order.
        out.phase = static_cast<uint8_t>((out.phase + std::popcount(p.x & p.z)) % 4);
        for (int q = 0; q < d_; ++q) {
            if ((p.x >> q) & 1u) out = pauli_mul(out, xs_[static_cast<size_t>(q)]);
            if ((p.z >> q) & 1u) out = pauli_mul(out, zs_[static_cast<size_t>(q)]);
        }
        return out;
    }

    /// (other after this): images of other(this(P)).
    Clifford then(const Clifford& other) const {
        Clifford out(d_);
        for (int q = 0; q < d_; ++q)
            out.set_images(q, other.conjugate(xs_[static_cast<size_t>(q)]), other.conjugate(zs_[static_cast<size_t>(q)]));
        return out;
    }

    /// Symplectic validity: images pairwise commute except X_q/Z_q, and are Hermitian.
    bool is_valid() const {
        for (int a = 0; a < d_; ++a) {
            const auto& xa = xs_[static_cast<size_t>(a)];
            const auto& za = zs_[static_cast<size_t>(a)];
            if ((xa.phase & 1) || (za.phase & 1)) return false;
            if (!anticommute(xa, za)) return false;
            for (int b = a + 1; b < d_; ++b) {
                const auto& xb = xs_[static_cast<size_t>(b)];
                const auto& zb = zs_[static_cast<size_t>(b)];
                if (anticommute(xa, xb) || anticommute(xa, zb) || anticommute(za, xb) || anticommute(za, zb))
                    return false;
            }
        }
        return true;
    }

    /// Gate list g_1..g_k with C = g_k ... g_1 up to global phase
    /// (g_1 applied first to a state).
    const std::vector<Gate>& gates() const {
        if (gates_.empty()) gates_ = synthesize();
        return gates_;
    }

    void apply(Vector& v) const { apply_gates(v, d_, gates()); }
    void apply_inverse(Vector& v) const {
        const auto& g = gates();
        for (size_t i = g.size(); i-- > 0;) apply_gate(v, d_, inverse(g[i]));
    }

    friend bool operator==(const Clifford& a, const Clifford& b) { return a.xs_ == b.xs_ && a.zs_ == b.zs_; }

   private:
    std::vector<Gate> synthesize() const;

    int d_;
    std::vector<PauliRow> xs_, zs_;
    mutable std::vector<Gate> gates_;
};

namespace detail {

/// Conjugates every row by gate g (Aaronson-Gottesman update rules).
inline void conjugate_rows(std::vector<PauliRow>& rows, const Gate& g) {
    const int sa = g.q0;
    const int sb = g.q1 >= 0 ? g.q1 : 0;
    const uint32_t a = 1u << sa;
    const uint32_t b = 1u << sb;
    auto flip = [](PauliRow& r, uint32_t f) { r.phase = static_cast<uint8_t>((r.phase + 2 * f) & 3); };
    switch (g.kind) {
        case GateKind::H:
            for (auto& r : rows) {
                const uint32_t xa = (r.x >> sa) & 1u, za = (r.z >> sa) & 1u;
                flip(r, xa & za);
                r.x = (r.x & ~a) | (za << sa);
                r.z = (r.z & ~a) | (xa << sa);
            }
            break;
        case GateKind::S:
            for (auto& r : rows) {
                flip(r, (r.x >> sa) & (r.z >> sa) & 1u);
                r.z ^= r.x & a;
            }
            break;
        case GateKind::Sdg:
            for (auto& r : rows) {
                flip(r, (r.x >> sa) & ~(r.z >> sa) & 1u);
                r.z ^= r.x & a;
            }
            break;
        case GateKind::X:
            for (auto& r : rows) flip(r, (r.z >> sa) & 1u);
            break;
        case GateKind::Z:
            for (auto& r : rows) flip(r, (r.x >> sa) & 1u);
            break;
        case GateKind::Y:
            for (auto& r : rows) flip(r, ((r.x ^ r.z) >> sa) & 1u);
            break;
        case GateKind::CNOT:
            for (auto& r : rows) {
                const uint32_t xa = (r.x >> sa) & 1u, za = (r.z >> sa) & 1u;
                const uint32_t xb = (r.x >> sb) & 1u, zb = (r.z >> sb) & 1u;
                flip(r, xa & zb & ~(xb ^ za) & 1u);
                r.x ^= xa << sb;
                r.z ^= zb << sa;
            }
            break;
        case GateKind::CZ:
            for (auto& r : rows) {
                const uint32_t xa = (r.x >> sa) & 1u, za = (r.z >> sa) & 1u;
                const uint32_t xb = (r.x >> sb) & 1u, zb = (r.z >> sb) & 1u;
                flip(r, xa & xb & (za ^ zb));
                r.z ^= (xb << sa) | (xa << sb);
            }
            break;
        case GateKind::SWAP:
            for (auto& r : rows) {
                const uint32_t dx = ((r.x >> sa) ^ (r.x >> sb)) & 1u;
                const uint32_t dz = ((r.z >> sa) ^ (r.z >> sb)) & 1u;
                r.x ^= dx * (a | b);
                r.z ^= dz * (a | b);
            }
            break;
    }
}

}  // namespace detail

inline std::vector<Gate> Clifford::synthesize() const {
    // Rows 0..d-1 hold X images, d..2d-1 Z images. Gates are appended until
    // the tableau is the identity; then C is the inverse of their product.
    std::vector<PauliRow> rows(xs_);
    rows.insert(rows.end(), zs_.begin(), zs_.end());
    std::vector<Gate> reduce;
    auto push = [&](Gate g) {
        detail::conjugate_rows(rows, g);
        reduce.push_back(g);
    };
    const int d = d_;
    for (int i = 0; i < d; ++i) {
        const uint32_t hi = ~((1u << i) - 1);
        auto& xr = rows[static_cast<size_t>(i)];
        for (int q = i; q < d; ++q) {
            const uint32_t m = 1u << q;
            if (xr.z & m) push({(xr.x & m) ? GateKind::S : GateKind::H, q});
        }
        if (!(xr.x & (1u << i))) {
            const uint32_t rest = xr.x & hi;
            push({GateKind::SWAP, i, std::countr_zero(rest)});
        }
        for (int q = i + 1; q < d; ++q)
            if (xr.x & (1u << q)) push({GateKind::CNOT, i, q});

        auto& zr = rows[static_cast<size_t>(d + i)];
        for (int q = i + 1; q < d; ++q) {
            const uint32_t m = 1u << q;
            const bool x = zr.x & m, z = zr.z & m;
            if (x && z) push({GateKind::S, q});
            if (x) push({GateKind::H, q});
        }
        for (int q = i + 1; q < d; ++q)
            if (zr.z & (1u << q)) push({GateKind::CNOT, q, i});
        if (zr.x & (1u << i)) {
            push({GateKind::H, i});
            push({GateKind::S, i});
            push({GateKind::H, i});
        }
    }
    for (int i = 0; i < d; ++i) {
        if (rows[static_cast<size_t>(i)].sign()) push({GateKind::Z, i});
        if (rows[static_cast<size_t>(d + i)].sign()) push({GateKind::X, i});
    }
    // reduce_k ... reduce_1 C = I, so C = reduce_1^dag ... reduce_k^dag.
    std::vector<Gate> out;
    out.reserve(reduce.size());
    for (size_t k = reduce.size(); k-- > 0;) out.push_back(inverse(reduce[k]));
    return out;
}

namespace detail {

/// Bravyi-Maslov quantum Mallows sample (arXiv:2003.09412), as in Stim.
inline std::pair<std::vector<bool>, std::vector<int>> sample_qmallows(int n, Rng& gen) {
    std::uniform_real_distribution<double> uni(0, 1);
    std::vector<bool> hada;
    std::vector<int> perm;
    std::vector<int> remaining(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) remaining[static_cast<size_t>(k)] = k;
    for (int i = 0; i < n; ++i) {
        const int m = static_cast<int>(remaining.size());
        double u = uni(gen);
        while (u == 0.0) u = uni(gen);
        const double eps = std::pow(4.0, -m);
        int k = static_cast<int>(-std::ceil(std::log2(u + (1 - u) * eps)));
        hada.push_back(k < m);
        if (k >= m) k = 2 * m - k - 1;
        perm.push_back(remaining[static_cast<size_t>(k)]);
        remaining.erase(remaining.begin() + k);
    }
    return {hada, perm};
}

/// Fair coin flips drawn 64 at a time.
class BitPool {
   public:
    explicit BitPool(Rng& rng) : rng_(rng) {}
    bool operator()(Rng&) {
        if (left_ == 0) {
            word_ = rng_();
            left_ = 64;
        }
        const bool b = word_ & 1u;
        word_ >>= 1;
        --left_;
        return b;
    }

   private:
    Rng& rng_;
    uint64_t word_ = 0;
    int left_ = 0;
};

/// Factors of a Bravyi-Maslov sample: C = F(lower, symmetric) . Pi(hada, perm)
/// . F(lower_m, symmetric_m), the rightmost factor acting first.
struct BruhatFactors {
    int n = 0;
    std::vector<bool> hada;
    std::vector<int> perm;
    BitMat symmetric{0}, symmetric_m{0}, lower{0}, lower_m{0};
};

inline BruhatFactors sample_bruhat(int n, Rng& gen) {
    BitPool bit(gen);
    auto [hada, perm] = sample_qmallows(n, gen);
    auto h = [&](int i) { return static_cast<bool>(hada[static_cast<size_t>(i)]); };
    auto p = [&](int i) { return perm[static_cast<size_t>(i)]; };

    BitMat symmetric(n);
    for (int col = 0; col < n; ++col) {
        symmetric.set(col, col, bit(gen));
        for (int row = col + 1; row < n; ++row) {
            const bool b = bit(gen);
            symmetric.set(row, col, b);
            symmetric.set(col, row, b);
        }
    }
    BitMat symmetric_m(n);
    for (int col = 0; col < n; ++col) {
        symmetric_m.set(col, col, bit(gen) && h(col));
        for (int row = col + 1; row < n; ++row) {
            bool b = h(row) && h(col);
            b |= h(row) > h(col) && p(row) < p(col);
            b |= h(row) < h(col) && p(row) > p(col);
            b &= bit(gen);
            symmetric_m.set(row, col, b);
            symmetric_m.set(col, row, b);
        }
    }
    BitMat lower = BitMat::identity(n);
    for (int col = 0; col < n; ++col)
        for (int row = col + 1; row < n; ++row) lower.set(row, col, bit(gen));
    BitMat lower_m = BitMat::identity(n);
    for (int col = 0; col < n; ++col)
        for (int row = col + 1; row < n; ++row) {
            bool b = h(row) < h(col);
            b |= h(row) && h(col) && p(row) > p(col);
            b |= !h(row) && !h(col) && p(row) < p(col);
            b &= bit(gen);
            lower_m.set(row, col, b);
        }

    BruhatFactors f;
    f.n = n;
    f.hada = std::move(hada);
    f.perm = std::move(perm);
    f.symmetric = std::move(symmetric);
    f.symmetric_m = std::move(symmetric_m);
    f.lower = std::move(lower);
    f.lower_m = std::move(lower_m);
    return f;
}

/// Symplectic matrix of the sample; row q is the image of X_q, row n + q of Z_q.
inline BitMat assemble_symplectic(const BruhatFactors& f) {
    const int n = f.n;
    auto h = [&](int i) { return static_cast<bool>(f.hada[static_cast<size_t>(i)]); };
    auto p = [&](int i) { return f.perm[static_cast<size_t>(i)]; };
    const BitMat& lower = f.lower;
    const BitMat& lower_m = f.lower_m;
    const BitMat& symmetric = f.symmetric;
    const BitMat& symmetric_m = f.symmetric_m;
    const BitMat fused = BitMat::from_quadrants(lower, BitMat(n), symmetric * lower,
                                                lower.inv_lower_triangular().transposed());
    const BitMat fused_m = BitMat::from_quadrants(lower_m, BitMat(n), symmetric_m * lower_m,
                                                  lower_m.inv_lower_triangular().transposed());
    BitMat u(2 * n);
    for (int row = 0; row < n; ++row) {
        const bool swap = h(row);
        u.set_row(swap ? row + n : row, fused.row(p(row)));
        u.set_row(swap ? row : row + n, fused.row(p(row) + n));
    }
    return fused_m * u;
}

inline BitMat random_symplectic(int n, Rng& gen) { return assemble_symplectic(sample_bruhat(n, gen)); }

}  // namespace detail

/// Uniformly random Clifford on d qubits (random symplectic part plus
/// uniformly random signs).
inline Clifford random_clifford(int d, Rng& rng) {
    if (d < 1 || d > Clifford::kMaxQubits) throw OutOfRange("random_clifford: d must be in [1, 13]");
    const BitMat raw = detail::random_symplectic(d, rng);
    std::bernoulli_distribution bit(0.5);
    const uint32_t mask = (1u << d) - 1;
    Clifford c(d);
    for (int q = 0; q < d; ++q) {
        PauliRow x{raw.row(q) & mask, raw.row(q) >> d, 0};
        PauliRow z{raw.row(q + d) & mask, raw.row(q + d) >> d, 0};
        // Raw rows are Hermitian Paulis in the P(1,1) = Y convention.
        x.phase = bit(rng) ? 2 : 0;
        z.phase = bit(rng) ? 2 : 0;
        c.set_images(q, x, z);
    }
    return c;
}

}  // namespace hamlearn
