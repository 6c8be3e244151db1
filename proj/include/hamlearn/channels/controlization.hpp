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
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hamlearn/core.hpp"

namespace hamlearn {

/// Control pattern b on k <= 3 qubits. bits[0] is the most significant
/// control qubit.
class ControlSpec {
   public:
    static constexpr int kMaxControls = 3;

    explicit ControlSpec(std::string bits = "1") : bits_(std::move(bits)) {
        if (bits_.empty() || static_cast<int>(bits_.size()) > kMaxControls)
            throw OutOfRange("ControlSpec needs 1 to 3 control bits");
        for (char c : bits_)
            if (c != '0' && c != '1') throw OutOfRange("ControlSpec bits must be 0/1");
    }
    /// Pattern given as an integer on k bits.
    ControlSpec(int k, uint32_t pattern) {
        if (k < 1 || k > kMaxControls || pattern >= (1u << k)) throw OutOfRange("bad ControlSpec");
        for (int i = k - 1; i >= 0; --i) bits_.push_back(((pattern >> i) & 1) ? '1' : '0');
    }

    int k() const { return static_cast<int>(bits_.size()); }
    uint32_t pattern() const {
        uint32_t p = 0;
        for (char c : bits_) p = (p << 1) | (c == '1');
        return p;
    }
    const std::string& bits() const { return bits_; }

   private:
    std::string bits_;
};

/// |b><b| (x) on_block + (I - |b><b|) (x) off_block.
inline Matrix controlled_blocks(const ControlSpec& spec, const Matrix& on_block, const Matrix& off_block) {
    const Eigen::Index d = on_block.rows();
    const Eigen::Index patterns = Eigen::Index{1} << spec.k();
    Matrix out = Matrix::Zero(patterns * d, patterns * d);
    for (Eigen::Index c = 0; c < patterns; ++c)
        out.block(c * d, c * d, d, d) = (static_cast<uint32_t>(c) == spec.pattern()) ? on_block : off_block;
    return out;
}

/// (1/4^n) sum_P G_P (I_k (x) H) G_P with G_P = (I - |b><b|) (x) P + |b><b| (x) I.
inline DenseOperator twirled_hamiltonian(const DenseOperator& h, const ControlSpec& spec) {
    const int n = h.qubits();
    if (n > 3) throw OutOfRange("twirled_hamiltonian supports n <= 3");
    const Matrix& hm = h.matrix();
    Matrix avg = Matrix::Zero(hm.rows(), hm.cols());
    const uint64_t count = uint64_t{1} << (2 * n);
    for (uint64_t i = 0; i < count; ++i) {
        Matrix p = PauliString::from_index(n, i).dense();
        avg += p * hm * p;
    }
    avg /= static_cast<double>(count);
    return DenseOperator(controlled_blocks(spec, hm, avg));
}

/// One qDRIFT controlization draw: N Paulis, uniform over all 4^n strings.
struct QDriftSequence {
    double t = 0.0;
    int64_t N = 1;
    std::vector<PauliString> draws;
    ControlSpec b;
};

inline QDriftSequence sample_qdrift_sequence(int n, double t, int64_t N, const ControlSpec& spec, Rng& rng) {
    if (N < 1) throw OutOfRange("qDRIFT needs N >= 1");
    std::uniform_int_distribution<uint64_t> pick(0, (uint64_t{1} << (2 * n)) - 1);
    QDriftSequence s{t, N, {}, spec};
    s.draws.reserve(static_cast<size_t>(N));
    for (int64_t i = 0; i < N; ++i) s.draws.push_back(PauliString::from_index(n, pick(rng)));
    return s;
}

/// Off-control block P_N U P_N ... P_1 U P_1 of a trajectory, given the
/// segment propagator U = e^{-iHt/N}.
inline Matrix qdrift_off_block(const QDriftSequence& s, const Matrix& segment) {
    Matrix a = Matrix::Identity(segment.rows(), segment.cols());
    for (const auto& p : s.draws) {
        Matrix pu = p.dense();
        a = pu * segment * pu * a;
    }
    return a;
}

/// Full trajectory unitary V_N ... V_1 on k + n qubits. On the control
/// pattern every conjugating Pauli cancels, leaving U^N exactly.
inline Matrix qdrift_trajectory_unitary(const QDriftSequence& s, const Matrix& segment) {
    Matrix on = Matrix::Identity(segment.rows(), segment.cols());
    for (int64_t i = 0; i < s.N; ++i) on = segment * on;
    return controlled_blocks(s.b, on, qdrift_off_block(s, segment));
}

/// Cost of N segments of duration t/N.
inline QueryCost qdrift_cost(double t, int64_t N) {
    const double dt = std::abs(t) / static_cast<double>(N);
    return QueryCost::uniform(static_cast<uint64_t>(N), dt, t < 0 ? static_cast<uint64_t>(N) : 0);
}

/// Samples one trajectory of the controlized evolution and charges N queries
/// of duration t/N.
inline DenseOperator qdrift_sample(const QueryOracle& oracle, double t, int64_t N, const ControlSpec& spec,
                                   Rng& rng) {
    auto seq = sample_qdrift_sequence(oracle.n(), t, N, spec, rng);
    Matrix seg = oracle.propagator(t / static_cast<double>(N)).matrix();
    oracle.charge(qdrift_cost(t, N));
    return DenseOperator(qdrift_trajectory_unitary(seq, seg));
}

namespace detail {

/// Column-stacking superoperator of X -> V X V^dagger.
inline Matrix conjugation_superop(const Matrix& v) { return kron(v.conjugate(), v); }

inline Matrix choi_from_superop(const Matrix& s, Eigen::Index d) {
    Matrix j = Matrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index k = 0; k < d; ++k) {
            const Eigen::Index col = k * d + i;  // vec(|i><k|)
            for (Eigen::Index a = 0; a < d; ++a)
                for (Eigen::Index b = 0; b < d; ++b) j(a * d + i, b * d + k) = s(b * d + a, col);
        }
    return j / static_cast<double>(d);
}

}  // namespace detail

/// Choi state of the Pauli-averaged qDRIFT channel, composed N times.
inline Matrix qdrift_channel_choi(const DenseOperator& h, double t, int64_t N, const ControlSpec& spec) {
    const int n = h.qubits();
    if (n > 2 || spec.k() != 1) throw OutOfRange("qdrift_channel_choi supports n <= 2 and k = 1");
    if (N < 1) throw OutOfRange("qDRIFT needs N >= 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    Eigen::VectorXcd ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i)
        ph(i) = std::exp(-kI * es.eigenvalues()(i) * (t / static_cast<double>(N)));
    const Matrix seg = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    const Eigen::Index dn = seg.rows();
    const Matrix id = Matrix::Identity(dn, dn);
    const uint64_t count = uint64_t{1} << (2 * n);
    Matrix step;
    for (uint64_t i = 0; i < count; ++i) {
        const Matrix p = PauliString::from_index(n, i).dense();
        const Matrix g = controlled_blocks(spec, id, p);
        const Matrix v = g * controlled_blocks(spec, seg, seg) * g;
        Matrix s = detail::conjugation_superop(v);
        if (i == 0) step = s;
        else step += s;
    }
    step /= static_cast<double>(count);
    Matrix total = Matrix::Identity(step.rows(), step.cols());
    Matrix base = step;
    for (uint64_t e = static_cast<uint64_t>(N); e; e >>= 1) {
        if (e & 1) total = base * total;
        if (e > 1) base = base * base;
    }
    return detail::choi_from_superop(total, dn << spec.k());
}

/// Choi state |w><w| of the unitary channel w, normalized to unit trace.
inline Matrix unitary_choi(const Matrix& w) {
    const Eigen::Index d = w.rows();
    Matrix j = Matrix::Zero(d * d, d * d);
    Vector v = Vector::Zero(d * d);
    for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index a = 0; a < d; ++a) v(a * d + c) = w(a, c);
    v /= std::sqrt(static_cast<double>(d));
    return v * v.adjoint();
}

/// Target of controlization: ctrl_b{e^{-i H_0 t}}.
inline Matrix controlled_target(const DenseOperator& h, double t, const ControlSpec& spec) {
    const Matrix h0 = traceless_part(h).matrix();
    const Matrix u = hermitian_function(h0, [t](double x) { return std::exp(-kI * x * t); });
    return controlled_blocks(spec, u, Matrix::Identity(u.rows(), u.cols()));
}

inline double choi_trace_distance(const Matrix& a, const Matrix& b) {
    return 0.5 * trace_norm_hermitian(a - b);
}

enum class Stage { kParamTR, kParamTF, kStructTR, kStructTF };

inline std::string to_string(Stage s) {
    switch (s) {
        case Stage::kParamTR: return "param-TR";
        case Stage::kParamTF: return "param-TF";
        case Stage::kStructTR: return "struct-TR";
        case Stage::kStructTF: return "struct-TF";
    }
    return "?";
}

/// Segment count per stage: c_N * f(Delta, eps) * log(Delta/eps).
inline int64_t required_segments(Stage stage, double delta, double eps, double c_N = 1.0) {
    if (!(eps > 0 && eps < 1) || !(delta > 0)) throw OutOfRange("required_segments: need eps in (0,1), Delta > 0");
    double f = 0;
    switch (stage) {
        case Stage::kParamTR: f = delta; break;
        case Stage::kParamTF: f = delta / eps; break;
        case Stage::kStructTR: f = delta * delta / eps; break;
        case Stage::kStructTF: f = std::pow(delta / eps, 4); break;
    }
    const double lg = std::max(1.0, std::log(delta / eps));
    return std::max<int64_t>(1, static_cast<int64_t>(std::ceil(c_N * f * lg)));
}

}  // namespace hamlearn
