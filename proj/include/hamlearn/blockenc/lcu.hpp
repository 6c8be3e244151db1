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

namespace hamlearn {

/// Unitary whose first column is the unit vector w.
inline Matrix unitary_with_first_column(const Vector& w) {
    Eigen::HouseholderQR<Matrix> qr{Matrix(w)};
    Matrix q = qr.householderQ();
    const cplx r00 = qr.matrixQR()(0, 0);
    q.col(0) *= r00 / std::abs(r00);
    return q;
}

/// PREP_L, PREP_R on b qubits with beta * conj(c_j) d_j = y_j, where
/// c = PREP_L|0>, d = PREP_R|0>.
struct StatePrepPair {
    Matrix prep_left;
    Matrix prep_right;
    double beta = 0.0;
    int b = 0;

    /// sum_j |beta conj(c_j) d_j - y_j|; entries past len(y) must vanish.
    double error(const std::vector<cplx>& y) const {
        double e = 0;
        for (Eigen::Index j = 0; j < prep_left.rows(); ++j) {
            cplx v = beta * std::conj(prep_left(j, 0)) * prep_right(j, 0);
            cplx target = j < static_cast<Eigen::Index>(y.size()) ? y[static_cast<size_t>(j)] : cplx{};
            e += std::abs(v - target);
        }
        return e;
    }
};

inline int lcu_ancillas(size_t K) {
    int b = 0;
    while ((size_t{1} << b) < std::max<size_t>(K, 2)) ++b;
    return b;
}

inline StatePrepPair make_state_prep_pair(const std::vector<cplx>& y) {
    if (y.empty()) throw OutOfRange("state-preparation pair needs at least one coefficient");
    double beta = 0;
    for (const auto& v : y) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw OutOfRange("non-finite LCU coefficient");
        beta += std::abs(v);
    }
    if (!(beta > 0)) throw OutOfRange("LCU coefficients are all zero");
    StatePrepPair p;
    p.beta = beta;
    p.b = lcu_ancillas(y.size());
    const Eigen::Index dim = Eigen::Index{1} << p.b;
    Vector c = Vector::Zero(dim), d = Vector::Zero(dim);
    for (size_t j = 0; j < y.size(); ++j) {
        const double amp = std::sqrt(std::abs(y[j]) / beta);
        const Eigen::Index i = static_cast<Eigen::Index>(j);
        c(i) = amp;
        d(i) = amp == 0 ? cplx{} : amp * (y[j] / std::abs(y[j]));
    }
    c.normalize();
    d.normalize();
    p.prep_left = unitary_with_first_column(c);
    p.prep_right = unitary_with_first_column(d);
    return p;
}

/// (alpha beta, a + b, alpha eps_1 + sum_j |y_j| eps_j)-encoding of
/// sum_j y_j A_j, built as PREP_L^dagger SEL PREP_R.
inline BlockEncoding lcu_encoding(const std::vector<BlockEncoding>& encs, const std::vector<cplx>& y,
                                  std::string label = "lcu") {
    if (encs.empty() || encs.size() != y.size()) throw OutOfRange("lcu_encoding: need one coefficient per encoding");
    const double alpha = encs.front().alpha;
    const int a = encs.front().a;
    const int n = encs.front().n;
    for (const auto& e : encs)
        if (e.a != a || e.n != n || std::abs(e.alpha - alpha) > 1e-12 * std::max(1.0, alpha))
            throw MixedParameters("lcu_encoding: inputs disagree on (alpha, a)");
    const StatePrepPair prep = make_state_prep_pair(y);
    const Eigen::Index dim_b = Eigen::Index{1} << prep.b;
    const Eigen::Index dj = encs.front().unitary.dim();
    const Matrix id = Matrix::Identity(dj, dj);

    // U[i, k] = sum_j conj(PL[j, i]) U_j PR[j, k], blockwise.
    Matrix u = Matrix::Zero(dim_b * dj, dim_b * dj);
    for (Eigen::Index j = 0; j < dim_b; ++j) {
        const Matrix& uj = j < static_cast<Eigen::Index>(encs.size()) ? encs[static_cast<size_t>(j)].unitary.matrix() : id;
        for (Eigen::Index i = 0; i < dim_b; ++i) {
            const cplx l = std::conj(prep.prep_left(j, i));
            if (l == cplx{}) continue;
            for (Eigen::Index k = 0; k < dim_b; ++k) {
                const cplx w = l * prep.prep_right(j, k);
                if (w == cplx{}) continue;
                u.block(i * dj, k * dj, dj, dj) += w * uj;
            }
        }
    }

    BlockEncoding out;
    out.unitary = DenseOperator(std::move(u));
    out.alpha = alpha * prep.beta;
    out.a = a + prep.b;
    out.n = n;
    out.target_label = std::move(label);
    double eps = alpha * prep.error(y);
    bool have_refs = detail::auditing();
    Matrix ref;
    for (size_t j = 0; j < encs.size(); ++j) {
        eps += std::abs(y[j]) * encs[j].eps_claimed;
        out.cost += encs[j].cost;
        out.controlized = out.controlized || encs[j].controlized;
        if (!encs[j].reference) have_refs = false;
        else if (have_refs) ref = (j == 0) ? Matrix(y[j] * *encs[j].reference) : Matrix(ref + y[j] * *encs[j].reference);
    }
    out.eps_claimed = eps;
    if (have_refs) out.reference = std::move(ref);
    return detail::finish(std::move(out));
}

/// Exact LCU encoding of a sparse Pauli sum, alpha = ||lambda||_1.
inline BlockEncoding pauli_lcu_encoding(const SparseHamiltonian& h, std::string label = "pauli-lcu") {
    std::vector<BlockEncoding> encs;
    std::vector<cplx> y;
    for (const auto& t : h.terms()) {
        if (t.coefficient == 0.0) continue;
        encs.push_back(unitary_encoding(t.pauli.dense(), t.pauli.letters()));
        y.emplace_back(t.coefficient);
    }
    if (encs.empty()) throw OutOfRange("pauli_lcu_encoding: empty Hamiltonian");
    return lcu_encoding(encs, y, std::move(label));
}

/// Rescales an alpha = ||lambda||_1 encoding of H_hat to alpha = Delta pi / 2
/// with one extra ancilla rotated by Ry(theta), theta = 2 arccos(s).
inline BlockEncoding rescale_encoding(const BlockEncoding& b, double delta) {
    const double s = 2.0 * b.alpha / (kPi * delta);
    if (!(s >= 0.0 && s <= 1.0 + 1e-12)) throw OutOfRange("rescale_encoding: 2||lambda||_1/(pi Delta) outside [0, 1]");
    const double theta = 2.0 * std::acos(std::min(s, 1.0));
    Matrix ry(2, 2);
    ry << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);
    BlockEncoding out = b;
    out.unitary = DenseOperator(kron(ry, b.unitary.matrix()));
    out.a = b.a + 1;
    out.alpha = delta * kPi / 2.0;
    out.target_label = b.target_label + " rescaled";
    return detail::finish(std::move(out));
}

/// (pi, a, eps_H)-encoding of (H~ - H_hat)/Delta from a (pi/2)-encoding of
/// H~/Delta and the classical estimate H_hat.
inline BlockEncoding residual_encoding(const BlockEncoding& b_h, const SparseHamiltonian& h_hat, double delta) {
    if (std::abs(b_h.alpha - kPi / 2) > 1e-12) throw MixedParameters("residual_encoding: B_H must have alpha = pi/2");
    const int n = b_h.n;
    if (h_hat.n() != n) throw DimensionMismatch("residual_encoding: estimate has wrong qubit count");
    const int m = static_cast<int>(std::max<size_t>(h_hat.m(), 1));
    const int a_hat = lcu_ancillas(static_cast<size_t>(m)) + 1;

    bool nonzero = false;
    for (const auto& t : h_hat.terms()) nonzero = nonzero || t.coefficient != 0.0;
    BlockEncoding b_hat;
    if (nonzero) {
        b_hat = reinterpret(rescale_encoding(pauli_lcu_encoding(h_hat, "H_hat"), delta), delta, "H_hat/Delta");
    } else {
        b_hat = dilation_encoding(Matrix::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n), kPi / 2, "H_hat/Delta");
    }
    b_hat = pad_ancillas(b_hat, a_hat);
    const int a = std::max(a_hat, b_h.a);
    auto out = lcu_encoding({pad_ancillas(b_h, a), pad_ancillas(b_hat, a)}, {cplx{1}, cplx{-1}}, "R/Delta");
    return out;
}

struct AmplifyOptions {
    double delta = 1.0;      // time unit 1/Delta of each charged query
    double eps_base = 0.1;   // encoding accuracy entering log(1/eps)
    double c_amp = 2.0;
    int64_t segments = 1;    // controlization segments per query
};

/// Uniform spectral amplification of B_R (alpha = pi, encoding R~/Delta):
/// a (2, q + 2, eps_R/eta + eps_amp)-encoding of R/(eta Delta).
inline BlockEncoding amplify(const BlockEncoding& b_r, double eta, double eps_amp, const AmplifyOptions& opt = {}) {
    if (!(eta > 0 && eta <= 1)) throw OutOfRange("amplify: eta must be in (0, 1]");
    if (!(eps_amp > 0 && eps_amp <= 2.0 / b_r.alpha)) throw OutOfRange("amplify: eps_amp outside (0, beta/alpha]");
    Matrix t = (b_r.alpha / (2.0 * eta)) * b_r.block();
    const double norm_t = operator_norm(t);
    if (norm_t > 0.5 + 1e-9 && b_r.controlized) {
        // A single qDRIFT trajectory can overshoot even when the averaged
        // channel does not; the amplifying polynomial saturates there.
        Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::VectorXd s = svd.singularValues().cwiseMin(0.5);
        t = svd.matrixU() * s.cast<cplx>().asDiagonal() * svd.matrixV().adjoint();
    } else if (norm_t > 0.5 + 1e-9) throw TargetNormTooLarge("amplify: ||R~/(2 eta Delta)|| = " + std::to_string(norm_t) + " > 1/2");
    BlockEncoding d = dilation_encoding(2.0 * t, 2.0, "R/(eta Delta)");
    BlockEncoding out = pad_ancillas(d, b_r.a + 2);
    out.eps_claimed = b_r.eps_claimed / eta + eps_amp;
    out.controlized = b_r.controlized;
    out.reference.reset();
    if (b_r.reference) out.reference = *b_r.reference / eta;
    const double lg1 = std::max(1.0, std::log(1.0 / opt.eps_base));
    const double lg2 = std::max(1.0, std::log(1.0 / eps_amp));
    const auto q = static_cast<uint64_t>(std::ceil(opt.c_amp * lg1 * lg2 / eta));
    const auto segs = static_cast<uint64_t>(opt.segments);
    out.cost = QueryCost::uniform(q * segs, 1.0 / (opt.delta * static_cast<double>(segs)), (q / 2) * segs);
    return detail::finish(std::move(out));
}

}  // namespace hamlearn
