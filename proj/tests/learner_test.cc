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

#include <cmath>
#include <random>

#include "hamlearn/learner.hpp"

using namespace hamlearn;

namespace {

class AuditEnvironment : public ::testing::Environment {
   public:
    void SetUp() override {
        EncodingAudit::instance().reset();
        EncodingAudit::instance().set_enabled(true);
    }
    void TearDown() override {
        for (const auto& r : EncodingAudit::instance().failures())
            ADD_FAILURE() << "encoding " << r.label << " error " << r.error << " > " << r.claimed;
        EXPECT_GT(EncodingAudit::instance().checked(), 0u);
    }
};
const auto* const kAudit = ::testing::AddGlobalTestEnvironment(new AuditEnvironment);

SparseHamiltonian ham(int n, std::vector<std::pair<const char*, double>> t) {
    std::vector<Term> terms;
    for (auto& [p, v] : t) terms.push_back({PauliString(p), v});
    return SparseHamiltonian(n, std::move(terms));
}

bool within_3sigma(double hits, double trials, double p) {
    const double sd = std::sqrt(trials * p * (1 - p));
    return std::abs(hits - trials * p) <= 3 * sd + 1;
}

LearnerConfig tr_config(int m, double eps, uint64_t seed) {
    LearnerConfig c;
    c.epsilon = eps;
    c.delta = 0.1;
    c.m_bound = m;
    c.seed = seed;
    return c;
}

}  // namespace

TEST(Preparation, ReferencedSuccessProbability) {
    QueryOracle oracle(ham(1, {{"Z", 0.5}}), AccessMode::kTimeReversal);
    const auto b = dilation_encoding(PauliString("Z").dense() * 0.5, 1.0);
    EXPECT_NEAR(pchoi_ref_success(b), 0.625, 1e-14);
    Rng rng(1);
    const int copies = 10000;
    StageReport rep;
    for (int i = 0; i < copies; ++i) prepare_pchoi_ref(b, oracle, 1.0, rng, &rep);
    EXPECT_TRUE(within_3sigma(copies, static_cast<double>(rep.experiments), 0.625));
    EXPECT_LE(static_cast<double>(rep.experiments) / copies, 2.0);
    EXPECT_EQ(oracle.ledger().snapshot().n_exp, rep.experiments);
}

TEST(Preparation, ReferencedZeroOperator) {
    QueryOracle oracle(ham(1, {{"Z", 0.5}}), AccessMode::kTimeReversal);
    const auto b = dilation_encoding(Matrix::Zero(2, 2), 1.0);
    EXPECT_DOUBLE_EQ(pchoi_ref_success(b), 0.5);
    Rng rng(2);
    const auto s = prepare_pchoi_ref(b, oracle, 1.0, rng);
    EXPECT_LT((s.vector() - omega_flag_one(1)).norm(), 1e-14);
    EXPECT_FALSE(prepare_pchoi_refless(b, oracle, 1.0, rng).has_value());
}

TEST(Preparation, ReferencelessArcsinAndMatrixLogRates) {
    const auto h = ham(2, {{"XI", 0.6}, {"ZZ", 0.8}});
    QueryOracle tr(h, AccessMode::kTimeReversal);
    QueryOracle tf(h, AccessMode::kTimeForward);
    const auto b_arc = arcsin_encoding(tr, 2.0, 1e-3, {4.0, true, true, {}});
    const double p_arc = 4.0 / (kPi * kPi) * 0.25;
    EXPECT_NEAR(pchoi_refless_success(b_arc), p_arc, 1e-12);
    const auto b_ml = matrix_log_encoding(tf, 2.0, 3);
    Rng rng(3);
    const int trials = 100000;
    int hits_arc = 0, hits_ml = 0;
    for (int i = 0; i < trials; ++i) {
        hits_arc += prepare_pchoi_refless(b_arc, tr, 1.0, rng).has_value();
        hits_ml += prepare_pchoi_refless(b_ml, tf, 1.0, rng).has_value();
    }
    EXPECT_TRUE(within_3sigma(hits_arc, trials, p_arc)) << hits_arc;
    EXPECT_TRUE(within_3sigma(hits_ml, trials, pchoi_refless_success(b_ml))) << hits_ml;
    // Subnormalization by Lambda instead of pi/2.
    const double ratio = static_cast<double>(hits_ml) / hits_arc;
    const double expect = std::pow(kPi / 2 / b_ml.alpha, 2);
    EXPECT_NEAR(ratio / expect, 1.0, 0.15);
    EXPECT_EQ(tf.ledger().snapshot().negative_queries, 0u);
}

TEST(CopiesToQueries, Formula) {
    EXPECT_EQ(copies_to_queries(5, 1.0, 0.0), 10u);
    EXPECT_EQ(copies_to_queries(100, 0.5, 1.0), 800u);
    EXPECT_EQ(copies_to_queries(100, 0.25, 1.0), 2 * copies_to_queries(100, 0.5, 1.0));
    EXPECT_THROW(copies_to_queries(1, 0.0), OutOfRange);
}

TEST(CopiesToQueries, BernoulliMonteCarlo) {
    Rng rng(4);
    for (double p : {0.5, 0.2}) {
        const uint64_t N = 10;
        const uint64_t Q = copies_to_queries(N, p, 1.0);
        std::binomial_distribution<uint64_t> bin(Q, p);
        int fail = 0;
        for (int r = 0; r < 10000; ++r) fail += bin(rng) < N;
        EXPECT_LE(fail / 1e4, std::exp(-10.0)) << p;
    }
}

TEST(Structure, SingleTerm) {
    QueryOracle oracle(ham(2, {{"ZZ", 0.9}}), AccessMode::kTimeReversal);
    const auto b = arcsin_encoding(oracle, 2.0, 1e-3, {4.0, true, true, {}});
    StructureOptions o;
    o.gamma = 0.5;
    o.delta = 0.1;
    o.unit = 1.0 / kPi;
    int found = 0;
    for (uint64_t s = 0; s < 100; ++s) {
        Rng rng(100 + s);
        const auto st = identify_structure(b, oracle, o, rng);
        found += st.terms == std::set<PauliString>{PauliString("ZZ")};
    }
    EXPECT_GE(found, 90);
}

TEST(Structure, LargeTermsAlwaysFound) {
    const auto h = ham(2, {{"XI", 0.8}, {"IZ", 0.7}, {"YY", 0.05}});
    QueryOracle oracle(h, AccessMode::kTimeReversal);
    const double delta = 6.0;
    const auto b = arcsin_encoding(oracle, delta, 1e-3, {4.0, true, true, {}});
    StructureOptions o;
    o.gamma = 0.3;
    o.delta = 0.1;
    o.unit = 2.0 / (kPi * delta);
    o.norm_sq = 3;
    o.m_bound = 3;
    int ok = 0, third = 0;
    for (uint64_t s = 0; s < 100; ++s) {
        Rng rng(200 + s);
        const auto st = identify_structure(b, oracle, o, rng);
        ok += st.terms.count(PauliString("XI")) && st.terms.count(PauliString("IZ"));
        third += st.terms.count(PauliString("YY"));
        for (const auto& p : st.terms) EXPECT_NE(h.coefficient(p), 0.0);
    }
    EXPECT_GE(ok, 90);
    EXPECT_LT(third, 100);
}

TEST(Structure, CouponCollectorMean) {
    const double a = 1.0 / std::sqrt(2.0);
    QueryOracle oracle(ham(1, {{"X", a}, {"Z", a}}), AccessMode::kTimeReversal);
    const auto b = arcsin_encoding(oracle, 4.0, 1e-3, {4.0, true, true, {}});
    BellSampler sampler(pchoi_referenceless(b.block(), 1.0));
    Rng rng(5);
    const int runs = 20000;
    double total = 0;
    for (int r = 0; r < runs; ++r) {
        std::set<PauliString> seen;
        int k = 0;
        while (seen.size() < 2) {
            seen.insert(sampler(rng));
            ++k;
        }
        total += k;
    }
    // Two equiprobable coupons: 2 (1 + 1/2) = 3.
    EXPECT_NEAR(total / runs, 3.0, 0.05);
    EXPECT_GE(structure_copies(1.0, 0.5, 2, 0.1, 1.0), 3u);
}

TEST(Structure, ExhaustedBudgetIsFlagged) {
    QueryOracle oracle(ham(1, {{"Z", 0.01}}), AccessMode::kTimeReversal);
    const auto b = arcsin_encoding(oracle, 2.0, 1e-3, {4.0, true, true, {}});
    StructureOptions o;
    o.gamma = 0.5;
    o.unit = 1.0 / kPi;
    Rng rng(6);
    const auto st = identify_structure(b, oracle, o, rng);
    EXPECT_TRUE(st.budget_exhausted);
    EXPECT_EQ(st.trials, copies_to_queries(structure_copies(1, 0.5, 1, 0.1, 1), std::pow(0.5 / kPi, 2),
                                           std::log(10.0)));
}

TEST(Parameters, SingleZ) {
    QueryOracle oracle(ham(1, {{"Z", 0.5}}), AccessMode::kTimeReversal);
    const auto b = arcsin_encoding(oracle, 2.0, 1e-3, {4.0, true, true, {}});
    ParameterOptions o;
    o.epsilon = 0.1;
    o.delta = 0.1;
    o.scale = kPi;
    int ok_z = 0, ok_x = 0;
    for (uint64_t s = 0; s < 100; ++s) {
        Rng rng(300 + s);
        const auto e = estimate_parameters({PauliString("Z"), PauliString("X")}, b, oracle, o, rng);
        ok_z += std::abs(e.entries.at(PauliString("Z")) - 0.5) <= 0.1;
        ok_x += std::abs(e.entries.at(PauliString("X"))) <= 0.1;
    }
    EXPECT_GE(ok_z, 90);
    EXPECT_GE(ok_x, 90);
}

TEST(Parameters, CopyScaling) {
    const uint64_t a = parameter_copies(3, 0.2, 0.1, 5.0, 1.0);
    const uint64_t b = parameter_copies(3, 0.1, 0.1, 5.0, 1.0);
    EXPECT_NEAR(static_cast<double>(b) / static_cast<double>(a), 4.0, 1e-3);
}

TEST(Parameters, WorkerCountDoesNotChangeResult) {
    QueryOracle oracle(ham(2, {{"XY", 0.4}, {"ZI", -0.3}}), AccessMode::kTimeReversal);
    const auto b = arcsin_encoding(oracle, 4.0, 1e-3, {4.0, true, true, {}});
    ParameterOptions o;
    o.epsilon = 0.5;
    o.scale = 2 * kPi;
    std::vector<ParameterEstimate> out;
    for (int w : {1, 3}) {
        o.workers = w;
        Rng rng(7);
        out.push_back(estimate_parameters({PauliString("XY"), PauliString("ZI")}, b, oracle, o, rng));
    }
    EXPECT_EQ(out[0].entries, out[1].entries);
}

TEST(Residual, DiscoversNewTerm) {
    const auto h = ham(2, {{"ZZ", 0.8}, {"XI", 0.3}});
    const auto h_hat = ham(2, {{"ZZ", 0.75}});
    int found = 0;
    for (uint64_t s = 0; s < 20; ++s) {
        QueryOracle oracle(h, AccessMode::kTimeReversal);
        const auto r = learn_residual(oracle, h_hat, 0.5, 0.1, tr_config(2, 0.1, s));
        found += r.structure.terms.count(PauliString("XI"));
        EXPECT_NEAR(r.residual.entries.at(PauliString("ZZ")), 0.1, 0.5);
    }
    EXPECT_GE(found, 18);
}

TEST(Residual, ExactEstimateLeavesZeroResidual) {
    const auto h = ham(2, {{"ZZ", 0.8}, {"XI", 0.3}});
    QueryOracle oracle(h, AccessMode::kTimeReversal);
    const auto r = learn_residual(oracle, h, 0.25, 0.1, tr_config(2, 0.1, 9));
    for (const auto& [p, v] : r.residual.entries) EXPECT_LE(std::abs(v), 0.5) << p.letters();
    for (const auto& p : r.structure.terms) EXPECT_NE(h.coefficient(p), 0.0);
}

TEST(Residual, RequiresTimeReversal) {
    QueryOracle oracle(ham(1, {{"Z", 0.5}}), AccessMode::kTimeForward);
    EXPECT_THROW(learn_residual(oracle, ham(1, {}), 0.5, 0.1, tr_config(1, 0.1, 0)), AccessModeViolation);
}

TEST(Bootstrap, Schedule) {
    EXPECT_EQ(bootstrap_rounds(0.1), 3);
    EXPECT_LE(std::ldexp(1.0, -(bootstrap_rounds(0.1) + 1)), 0.1);
    EXPECT_EQ(bootstrap_rounds(0.25), 2);
    for (int T = 0; T <= 20; ++T) {
        double s = 0;
        for (int j = 0; j <= T; ++j) s += bootstrap_zeta(0.1, T, j);
        EXPECT_LE(s, 0.1 + 1e-15);
    }
}

TEST(Bootstrap, RoundContractWithExactEstimates) {
    Rng gen(10);
    for (bool exact_enc : {true, false}) {
        for (int rep = 0; rep < 3; ++rep) {
            const auto h = random_hamiltonian(2, 3, 0.2, gen);
            QueryOracle oracle(h, AccessMode::kTimeReversal);
            auto cfg = tr_config(3, 0.05, static_cast<uint64_t>(rep));
            cfg.estimator = EstimatorMode::kExact;
            cfg.exact_encodings = exact_enc;
            LearnTrace trace;
            const auto est = bootstrap_learn(oracle, cfg, &trace);
            ASSERT_EQ(trace.rounds.size(), 5u);
            for (const auto& r : trace.rounds) {
                ParameterEstimate snap;
                snap.entries = r.estimate;
                EXPECT_LE(snap.max_error(h), std::ldexp(1.0, -(r.round + 1)) + 1e-12) << r.round;
            }
            EXPECT_LE(est.max_error(h), 0.05);
        }
    }
}

TEST(Bootstrap, SupersetNotGarbage) {
    Rng gen(11);
    for (int rep = 0; rep < 4; ++rep) {
        const auto h = random_hamiltonian(2, 3, 0.1, gen);
        QueryOracle oracle(h, AccessMode::kTimeReversal);
        auto cfg = tr_config(3, 0.2, static_cast<uint64_t>(40 + rep));
        cfg.exact_encodings = true;
        LearnTrace trace;
        const auto est = bootstrap_learn(oracle, cfg, &trace);
        for (const auto& [p, v] : est.entries) EXPECT_NE(h.coefficient(p), 0.0) << p.letters();
        EXPECT_LE(est.max_error(h), 0.2);
    }
}

TEST(Bootstrap, EndToEndSmall) {
    Rng gen(12);
    int ok = 0;
    for (uint64_t s = 0; s < 5; ++s) {
        const auto h = random_hamiltonian(2, 2, 0.3, gen);
        QueryOracle oracle(h, AccessMode::kTimeReversal);
        LearnTrace trace;
        const auto est = bootstrap_learn(oracle, tr_config(2, 0.2, s), &trace);
        ok += est.max_error(h) <= 0.2;
        const auto snap = oracle.ledger().snapshot();
        EXPECT_GT(snap.negative_queries, 0u);
        EXPECT_GE(snap.t_total, snap.t_min_observed);
        double t = 0;
        for (const auto& st : trace.stages) t += st.cost.time;
        EXPECT_NEAR(t, snap.t_total, 1e-9 * snap.t_total);
    }
    EXPECT_GE(ok, 4);
}

TEST(Bootstrap, ControlizedSmoke) {
    const auto h = ham(1, {{"X", 0.6}, {"Z", -0.5}});
    QueryOracle oracle(h, AccessMode::kTimeReversal);
    auto cfg = tr_config(2, 0.25, 13);
    cfg.control = ControlMode::kQDrift;
    cfg.control_gamma = 1e-4;
    LearnTrace trace;
    const auto est = bootstrap_learn(oracle, cfg, &trace);
    EXPECT_LE(est.max_error(h), 0.25);
    for (const auto& st : trace.stages) EXPECT_GT(st.segments, 1);
    const auto snap = oracle.ledger().snapshot();
    EXPECT_LT(snap.t_min_observed, 1.0 / (2.0 * cfg.m_bound * 100));
}

TEST(TimeForward, ParametersAtSmallDelta) {
    QueryOracle oracle(ham(1, {{"Z", 0.5}}), AccessMode::kTimeForward);
    LearnerConfig cfg = tr_config(1, 0.25, 1);
    cfg.mode = LearnMode::kTimeForward;
    cfg.norm_bound = 1.0;
    cfg.estimator = EstimatorMode::kExact;
    LearnTrace trace;
    const auto est = timeforward_learn(oracle, cfg, &trace);
    EXPECT_EQ(trace.K, 3);
    EXPECT_NEAR(trace.lambda, 20.0 / 3.0, 1e-12);
    EXPECT_NEAR(trace.lambda * trace.delta_used, 40.0 / 3.0, 1e-12);
    EXPECT_LE(est.max_error(oracle.audit_hamiltonian()), 0.25);
}

TEST(TimeForward, NoNegativeTimeQueries) {
    Rng gen(14);
    for (uint64_t s = 0; s < 3; ++s) {
        const auto h = random_hamiltonian(2, 2, 0.3, gen);
        QueryOracle oracle(h, AccessMode::kTimeForward);
        LearnerConfig cfg = tr_config(2, 0.4, s);
        cfg.mode = LearnMode::kTimeForward;
        const auto est = timeforward_learn(oracle, cfg);
        const auto snap = oracle.ledger().snapshot();
        EXPECT_EQ(snap.negative_queries, 0u);
        EXPECT_GT(snap.t_total, 0.0);
        EXPECT_LE(est.max_error(h), 0.4);
    }
    QueryOracle tr(ham(1, {{"Z", 0.5}}), AccessMode::kTimeReversal);
    LearnerConfig cfg = tr_config(1, 0.2, 0);
    EXPECT_THROW(timeforward_learn(tr, cfg), ConfigError);
}

TEST(Galactic, MatchesTimeForwardAtPOne) {
    for (double hn : {0.5, 1.0, 2.0, 3.7})
        for (double eps : {0.3, 0.1, 0.05, 0.01}) {
            const auto g = galactic_params(1.0, hn, eps);
            EXPECT_DOUBLE_EQ(g.delta, 2 * hn);
            EXPECT_NEAR(g.K, matrix_log_order(2 * hn, eps), 1);
            EXPECT_EQ(g.K, matrix_log_order(2 * hn, eps));
        }
}

TEST(Galactic, KAtLeastOneAndLambdaDecreasing) {
    double prev = 1e300;
    for (int p = 1; p <= 64; ++p) {
        const auto g = galactic_params(p, 1.0, 0.1);
        EXPECT_GE(g.K, 1) << p;
        EXPECT_LT(g.lambda_bound, prev);
        prev = g.lambda_bound;
    }
    EXPECT_EQ(galactic_params(64, 1.0, 0.1).K, 1);
    const auto g2 = galactic_params(2, 1.0, 0.1);
    EXPECT_DOUBLE_EQ(g2.delta, 4.0);
    EXPECT_NEAR(g2.lambda_bound, std::sqrt(40.0), 1e-12);
    EXPECT_THROW(galactic_params(0.5, 1.0, 0.1), ConfigError);
    LearnerConfig bad;
    bad.mode = LearnMode::kGalactic;
    bad.galactic_p = 0.5;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Galactic, LearnsWithForwardQueriesOnly) {
    QueryOracle oracle(ham(1, {{"X", 0.4}}), AccessMode::kTimeForward);
    LearnerConfig cfg = tr_config(1, 0.2, 3);
    cfg.mode = LearnMode::kGalactic;
    cfg.galactic_p = 2;
    cfg.norm_bound = 0.5;
    cfg.estimator = EstimatorMode::kExact;
    LearnTrace trace;
    const auto est = timeforward_learn(oracle, cfg, &trace);
    EXPECT_DOUBLE_EQ(trace.delta_used, 2.0);
    EXPECT_LE(est.max_error(oracle.audit_hamiltonian()), 0.2);
    EXPECT_EQ(oracle.ledger().snapshot().negative_queries, 0u);
}

// Trajectory-averaged statistics of controlized arcsin encodings against the
// exact encoding.
TEST(Controlization, ParameterAndTermEffect) {
    Rng gen(15);
    for (int n : {1, 2}) {
        const auto h = random_hamiltonian(n, 2, 0.2, gen);
        QueryOracle oracle(h, AccessMode::kTimeReversal);
        const double delta = 4.0, eps = 0.05;
        const int64_t N = 200;
        const auto exact = arcsin_encoding(oracle, delta, eps, {4.0, false, true, {}});
        const double q1 = static_cast<double>(arcsin_queries(eps, 4.0));
        const double gamma = std::pow(operator_norm(hamiltonian_dense(h).matrix()) / delta, 2) / N;
        const auto ref = pchoi_referenced(exact.block(), 1.0);
        std::vector<DecodingOperator> ops{decoding_normalizer(n)};
        for (const auto& t : h.terms()) ops.push_back(decoding_term(t.pauli));

        const int traj = 200;
        const size_t dd = size_t{1} << (2 * n);
        std::vector<cplx> o(ops.size());
        double w_ref = 0;
        std::vector<double> w2(dd, 0.0);
        for (int k = 0; k < traj; ++k) {
            Controlization ctl{true, N, &gen};
            const auto b = arcsin_encoding(oracle, delta, eps, {4.0, false, true, ctl});
            const double p = pchoi_ref_success(b);
            const auto s = pchoi_referenced(b.block(), 1.0);
            for (size_t i = 0; i < ops.size(); ++i) o[i] += p * exact_expectation(s.vector(), ops[i]);
            w_ref += p;
            const double pr = pchoi_refless_success(b);
            if (pr > 0) {
                const auto probs = bell_distribution(pchoi_referenceless(b.block(), 1.0).vector());
                for (size_t j = 0; j < dd; ++j) w2[j] += pr * probs[j] / traj;
            }
        }
        for (size_t i = 0; i < ops.size(); ++i) {
            const cplx tilde = o[i] / w_ref;
            EXPECT_LE(std::abs(tilde - exact_expectation(ref.vector(), ops[i])), 6 * q1 * gamma);
        }
        const double alpha = kPi * delta / 2;
        for (size_t j = 1; j < dd; ++j) {
            const PauliString p = PauliString::from_index(n, j);
            EXPECT_GE(std::abs(h.coefficient(p)) + 1e-9, alpha * std::sqrt(w2[j]) - alpha * std::sqrt(q1 * gamma))
                << p.letters();
        }
    }
}
