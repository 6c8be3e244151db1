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

#include "hamlearn/cli/runner.hpp"

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
    }
};
const auto* const kAudit = ::testing::AddGlobalTestEnvironment(new AuditEnvironment);

std::string error_of(const std::string& ini) {
    try {
        parse_run_config(ini, "t.ini");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Config, Defaults) {
    const RunConfig c = parse_run_config("");
    EXPECT_EQ(c.instance.n, 2);
    EXPECT_EQ(c.instance.m, 2);
    EXPECT_EQ(c.learner.m_bound, 2);
    EXPECT_EQ(c.resolved_pipeline(), Pipeline::kBootstrap);
    EXPECT_DOUBLE_EQ(c.learner.constants.c_boost, 3.0);
    EXPECT_TRUE(c.instance.terms.empty());
}

TEST(Config, SuppliedTermsSetInstanceShape) {
    const RunConfig c = parse_run_config("[instance]\nterms = XZI:0.25, YYZ:-0.5\n[mode]\nmode = time-forward\n");
    ASSERT_EQ(c.instance.terms.size(), 2u);
    EXPECT_EQ(c.instance.n, 3);
    EXPECT_EQ(c.learner.m_bound, 2);
    EXPECT_EQ(c.resolved_pipeline(), Pipeline::kTimeForward);
    EXPECT_EQ(c.instance.terms[1].pauli.letters(), "YYZ");
    EXPECT_DOUBLE_EQ(c.instance.terms[1].coefficient, -0.5);
}

TEST(Config, GalacticPBelowOneHasFieldDiagnostic) {
    const std::string e = error_of("[mode]\nmode = galactic\ngalactic_p = 0.5\n");
    EXPECT_NE(e.find("t.ini:3: [mode] galactic_p"), std::string::npos) << e;
}

TEST(Config, FieldErrors) {
    EXPECT_NE(error_of("[budget]\nepsilon = abc\n").find("t.ini:2: [budget] epsilon: expected a number"),
              std::string::npos);
    EXPECT_NE(error_of("[budget]\nepsilon = 1.5\n").find("[budget] epsilon: must lie in (0, 1)"), std::string::npos);
    EXPECT_NE(error_of("[mode]\nmode = sideways\n").find("unknown value 'sideways'"), std::string::npos);
    EXPECT_NE(error_of("[constants]\nc_cc = -1\n").find("[constants] c_cc"), std::string::npos);
    EXPECT_NE(error_of("[instance]\nterms = ZZ:0.5, ZZ:0.1\n").find("duplicate term"), std::string::npos);
    EXPECT_NE(error_of("[instance]\nterms = ZQ:0.5\n").find("cannot parse term"), std::string::npos);
    EXPECT_NE(error_of("[mode]\npipeline = bootstrap\nmode = time-forward\n").find("bootstrap needs"),
              std::string::npos);
    EXPECT_NE(error_of("[extras]\nfoo = 1\n").find("[extras] foo: unknown field"), std::string::npos);
    EXPECT_NE(error_of("[budget\n").find("t.ini:1"), std::string::npos);
    EXPECT_EQ(error_of("[sweep]\n"), "");
}

TEST(Verify, DefaultRunPasses) {
    const auto v = verify_bounds();
    for (const auto& r : v.results) EXPECT_TRUE(r.pass) << r.name << ": " << r.detail;
    EXPECT_TRUE(v.pass);
    EXPECT_EQ(v.report["lambda_table"].size(), 20u);
}

TEST(Verify, CoefficientSignBugIsCaught) {
    const auto mutant = [](int K) {
        MatrixLogCoefficients m = matrix_log_coefficients(K);
        m.c[1] = -m.c[1];
        return m;
    };
    EXPECT_TRUE(checks::matrix_log_coefficients_check().pass);
    EXPECT_FALSE(checks::matrix_log_coefficients_check(20, mutant).pass);
}

TEST(Sweep, SlopeFitMatchesReference) {
    // Reference values from an independent least-squares implementation.
    const std::vector<double> x = {std::log(5.0), std::log(10.0), std::log(20.0), std::log(40.0)};
    const std::vector<double> y = {16.5, 17.0, 18.4, 19.1};
    const SlopeFit f = fit_slope(x, y);
    EXPECT_NEAR(f.slope, 1.3272794376178467, 1e-12);
    EXPECT_NEAR(f.intercept, 14.233826152703626, 1e-11);
    EXPECT_NEAR(f.stderr_slope, 0.1694782934120986, 1e-12);
    EXPECT_NEAR(f.ci_low, 0.598073195844037, 1e-9);
    EXPECT_NEAR(f.ci_high, 2.0564856793916566, 1e-9);
}

TEST(Sweep, RejectsFewerThanThreeEpsilons) {
    RunConfig c = parse_run_config("[mode]\nmode = time-forward\n[sweep]\nepsilons = 0.2, 0.1\n");
    EXPECT_THROW(run_sweep(c), ConfigError);
}

TEST(Run, SuppliedZTimeForward) {
    const RunConfig c =
        parse_run_config("[instance]\nterms = Z:0.5\n[mode]\nmode = time-forward\n[budget]\nepsilon = 0.2\nseed = 7\n");
    const auto o = run_experiment(c, false);
    const auto& entries = o.report["outputs"]["parameters"]["entries"];
    bool found = false;
    for (const auto& e : entries)
        if (e["pauli"] == "Z") {
            found = true;
            EXPECT_NEAR(e["lambda_hat"].get<double>(), 0.5, 0.2);
        }
    EXPECT_TRUE(found);
    EXPECT_EQ(o.ledger.negative_queries, 0u);
    EXPECT_TRUE(o.pass);
}

TEST(Run, IdenticalSeedGivesIdenticalReport) {
    const RunConfig c = parse_run_config("[instance]\nn = 2\nm = 2\n[budget]\nepsilon = 0.2\nseed = 4\n");
    const std::string a = run_experiment(c, false).report.dump();
    const std::string b = run_experiment(c, false).report.dump();
    EXPECT_EQ(a, b);
    RunConfig d = c;
    d.learner.seed = 5;
    EXPECT_NE(a, run_experiment(d, false).report.dump());
}

TEST(Run, EstimateOnlyAndCsv) {
    const RunConfig c = parse_run_config(
        "[instance]\nterms = XZ:0.6, YI:-0.4\n[mode]\npipeline = estimate-only\n[budget]\nepsilon = 0.2\nseed = 3\n");
    const auto o = run_experiment(c, false);
    EXPECT_TRUE(o.pass);
    EXPECT_LE(o.report["outputs"]["max_error"].get<double>(), 0.2);
    const std::string csv = stages_csv(o.trace, o.ledger);
    EXPECT_EQ(csv.rfind("stage,round,queries", 0), 0u);
    EXPECT_NE(csv.find("\ntotal,,"), std::string::npos);
}

TEST(Run, LedgerConsistency) {
    const RunConfig c = parse_run_config("[instance]\nterms = XX:0.7\n[budget]\nepsilon = 0.2\nseed = 1\n");
    const auto o = run_experiment(c, false);
    EXPECT_GE(o.ledger.t_total, o.ledger.t_min_observed);
    double staged = 0;
    for (const auto& s : o.trace.stages) staged += s.cost.time;
    EXPECT_NEAR(staged, o.ledger.t_total, 1e-6 * o.ledger.t_total);
}

TEST(GenInstance, RespectsShapeAndGap) {
    RunConfig c = parse_run_config("[instance]\nn = 3\nm = 5\nmin_coefficient = 0.4\n[budget]\nseed = 12\n");
    const SparseHamiltonian h = make_instance(c);
    EXPECT_EQ(h.n(), 3);
    EXPECT_EQ(h.m(), 5u);
    for (const auto& t : h.terms()) EXPECT_GE(std::abs(t.coefficient), 0.4);
    const Json r = instance_report(h, 12, 0.4);
    const RunConfig back = parse_run_config("[instance]\nterms = " + r["ini_terms"].get<std::string>() + "\n");
    ASSERT_EQ(back.instance.terms.size(), 5u);
    for (size_t i = 0; i < 5; ++i) EXPECT_EQ(back.instance.terms[i].coefficient, h.terms()[i].coefficient);
}
