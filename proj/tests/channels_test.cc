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

#include <gtest/gtest.h>

#include <random>

#include "hamlearn/channels.hpp"

using namespace hamlearn;

namespace {

Matrix expm_hermitian(const Matrix& h, double t) {
    return hermitian_function(0.5 * (h + h.adjoint()), [t](double x) { return std::exp(-kI * x * t); });
}

Matrix random_hermitian(int n, Rng& rng) {
    std::normal_distribution<double> g;
    const Eigen::Index d = Eigen::Index{1} << n;
    Matrix a(d, d);
    for (auto& v : a.reshaped()) v = cplx(g(rng), g(rng));
    return 0.5 * (a + a.adjoint());
}

/// E(X) = d Tr_2[J (I (x) X^T)] for a Choi state J of a d-dimensional channel.
Matrix apply_from_choi(const Matrix& j, const Matrix& x) {
    const Eigen::Index d = x.rows();
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b)
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index k = 0; k < d; ++k) out(a, b) += j(a * d + i, b * d + k) * x(i, k);
    return static_cast<double>(d) * out;
}

}  // namespace

TEST(twirled_hamiltonian, examples) {
    auto tx = twirled_hamiltonian(DenseOperator(PauliString("X").dense()), ControlSpec("1"));
    EXPECT_LT(tx.matrix().topLeftCorner(2, 2).norm(), 1e-15);
    EXPECT_LT((tx.matrix().bottomRightCorner(2, 2) - PauliString("X").dense()).norm(), 1e-15);

    auto ti = twirled_hamiltonian(DenseOperator::identity(1), ControlSpec("1"));
    EXPECT_LT((ti.matrix() - Matrix::Identity(4, 4)).norm(), 1e-15);
}

TEST(twirled_hamiltonian, exponential_is_phased_controlled_evolution) {
    Rng rng(8);
    for (const char* bits : {"1", "0", "10", "011"}) {
        ControlSpec spec(bits);
        for (int rep = 0; rep < 5; ++rep) {
            const Matrix h = random_hermitian(2, rng);
            const double t = 0.7;
            const auto tw = twirled_hamiltonian(DenseOperator(h), spec);
            const Matrix lhs = expm_hermitian(tw.matrix(), t);
            const double alpha = -t * h.trace().real() / 4.0;
            const Matrix rhs = std::exp(kI * alpha) * controlled_target(DenseOperator(h), t, spec);
            EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10) << bits;
        }
    }
}

TEST(qdrift_sample, identity_draw_and_zero_time) {
    auto h = SparseHamiltonian(1, {{PauliString("X"), 0.6}, {PauliString("Z"), -0.3}});
    QueryOracle o(h, AccessMode::kTimeReversal);
    QDriftSequence s{0.4, 1, {PauliString("I")}, ControlSpec("1")};
    const Matrix seg = o.propagator(0.4).matrix();
    const Matrix v = qdrift_trajectory_unitary(s, seg);
    EXPECT_LT((v - kron(Matrix::Identity(2, 2), seg)).norm(), 1e-14);

    Rng rng(1);
    auto z = qdrift_sample(o, 0.0, 10, ControlSpec("1"), rng);
    EXPECT_LT((z.matrix() - Matrix::Identity(4, 4)).norm(), 1e-14);
}

TEST(qdrift_sample, evolution_time_neutral) {
    Rng rng(2);
    for (int rep = 0; rep < 10; ++rep) {
        auto h = random_hamiltonian(2, 3, 0.2, rng);
        QueryOracle o(h, AccessMode::kTimeForward);
        const double t = 0.1 + 0.3 * rep;
        const int64_t N = 5 + rep;
        auto v = qdrift_sample(o, t, N, ControlSpec("1"), rng);
        auto s = o.ledger().snapshot();
        EXPECT_NEAR(s.t_total, t, 1e-12);
        EXPECT_EQ(s.query_count, static_cast<uint64_t>(N));
        EXPECT_NEAR(s.t_min_observed, t / N, 1e-15);
        EXPECT_TRUE(is_unitary(v.matrix()));
        // The control branch carries e^{-iHt} exactly.
        EXPECT_LT((v.matrix().bottomRightCorner(4, 4) - o.propagator(t).matrix()).norm(), 1e-10);
    }
}

TEST(qdrift_channel_choi, identity_at_zero_time_and_trace_one) {
    auto h = SparseHamiltonian(2, {{PauliString("XY"), 0.6}, {PauliString("ZZ"), -0.3}});
    const auto hd = hamiltonian_dense(h);
    const Matrix j0 = qdrift_channel_choi(hd, 0.0, 5, ControlSpec("1"));
    EXPECT_LT((j0 - unitary_choi(Matrix::Identity(8, 8))).norm(), 1e-12);
    const Matrix j = qdrift_channel_choi(hd, 0.8, 20, ControlSpec("1"));
    EXPECT_NEAR(j.trace().real(), 1.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(j);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
}

TEST(qdrift_channel_choi, converges_monotonically_in_N) {
    Rng rng(4);
    const Matrix h = random_hermitian(1, rng);
    const double t = 1.0 / operator_norm(h);
    const auto target = unitary_choi(controlled_target(DenseOperator(h), t, ControlSpec("1")));
    double prev = 1e9;
    for (int64_t N : {1, 2, 4, 8, 16, 32, 64, 128}) {
        const double d = choi_trace_distance(qdrift_channel_choi(DenseOperator(h), t, N, ControlSpec("1")), target);
        EXPECT_LE(d, prev + 1e-12) << N;
        prev = d;
    }
}

TEST(qdrift_channel_choi, documented_bound_example) {
    Rng rng(6);
    for (int rep = 0; rep < 5; ++rep) {
        const Matrix h = random_hermitian(2, rng);
        const double norm = operator_norm(h);
        const double t = 0.5 / norm;
        const double d = choi_trace_distance(qdrift_channel_choi(DenseOperator(h), t, 100, ControlSpec("1")),
                                             unitary_choi(controlled_target(DenseOperator(h), t, ControlSpec("1"))));
        EXPECT_LE(d, 0.0025);
    }
}

TEST(qdrift_channel_choi, trace_extraction_on_off_control_subspace) {
    Rng rng(9);
    for (int rep = 0; rep < 5; ++rep) {
        Matrix h = random_hermitian(2, rng);
        h.diagonal().array() += 0.7;
        const double t = 0.3;
        const int64_t N = 400;
        const double bound = t * t * operator_norm(h) * operator_norm(h) / N;
        const Matrix j = qdrift_channel_choi(DenseOperator(h), t, N, ControlSpec("1"));
        const Matrix sigma = random_hermitian(2, rng);
        const Matrix u = expm_hermitian(h, t);
        const cplx phase = std::exp(kI * t * h.trace() / 4.0);
        Matrix p00 = Matrix::Zero(2, 2), p10 = Matrix::Zero(2, 2);
        p00(0, 0) = 1;
        p10(1, 0) = 1;
        // Off-control branch: identity channel.
        const Matrix out00 = apply_from_choi(j, kron(p00, sigma));
        EXPECT_LE(operator_norm(out00 - kron(p00, sigma)), 16 * bound * operator_norm(sigma));
        // Coherence picks up e^{-iHt} on the control side and only the
        // trace phase from the off-control side.
        const Matrix out10 = apply_from_choi(j, kron(p10, sigma));
        const Matrix expect = kron(p10, Matrix(u * sigma * phase));
        EXPECT_LE(operator_norm(out10 - expect), 16 * bound * operator_norm(sigma));
    }
}

TEST(qdrift_sample, monte_carlo_mean_channel_approaches_target) {
    Rng rng(10);
    auto h = SparseHamiltonian(1, {{PauliString("X"), 0.8}, {PauliString("Z"), 0.5}});
    QueryOracle o(h, AccessMode::kTimeReversal);
    const double t = 1.0;
    const int64_t N = 50;
    const Matrix seg = o.propagator(t / N).matrix();
    const Matrix exact = qdrift_channel_choi(hamiltonian_dense(h), t, N, ControlSpec("1"));
    Matrix mean = Matrix::Zero(16, 16);
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        auto s = sample_qdrift_sequence(1, t, N, ControlSpec("1"), rng);
        mean += unitary_choi(qdrift_trajectory_unitary(s, seg));
    }
    mean /= trials;
    EXPECT_LE(choi_trace_distance(mean, exact), 0.05);
}

TEST(required_segments, examples) {
    EXPECT_EQ(required_segments(Stage::kParamTR, 8.0, 0.1), 36);
    const double r = static_cast<double>(required_segments(Stage::kStructTF, 16.0, 0.1)) /
                     static_cast<double>(required_segments(Stage::kStructTF, 8.0, 0.1));
    EXPECT_GT(r, 16.0);
    EXPECT_LT(r, 20.0);
    EXPECT_EQ(required_segments(Stage::kParamTF, 8.0, 0.99), required_segments(Stage::kParamTR, 8.0, 0.99) + 0);
}
