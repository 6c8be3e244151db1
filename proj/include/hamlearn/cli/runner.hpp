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

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "hamlearn/cli/checks.hpp"
#include "hamlearn/cli/config.hpp"
#include "hamlearn/learner.hpp"
#include "json.hpp"

namespace hamlearn {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchemaVersion = "1.0";

namespace report {

/// Non-finite values become null.
inline Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json terms_json(const std::vector<Term>& terms) {
    Json a = Json::array();
    for (const auto& t : terms) a.push_back({{"pauli", t.pauli.letters()}, {"lambda", t.coefficient}});
    return a;
}

inline Json estimate_json(const ParameterEstimate& e) {
    Json a = Json::array();
    for (const auto& [p, v] : e.entries) a.push_back({{"pauli", p.letters()}, {"lambda_hat", v}});
    return {{"entries", a}, {"epsilon", e.epsilon}, {"delta", e.delta}};
}

inline Json structure_json(const StructureEstimate& s) {
    Json a = Json::array();
    for (const auto& p : s.terms) a.push_back(p.letters());
    return {{"terms", a},
            {"threshold", s.threshold},
            {"successes", s.successes},
            {"trials", s.trials},
            {"budget_exhausted", s.budget_exhausted}};
}

inline Json ledger_json(const LedgerSnapshot& s) {
    return {{"t_total", s.t_total},
            {"n_exp", s.n_exp},
            {"t_min_observed", num(s.t_min_observed)},
            {"n_anc_max", s.n_anc_max},
            {"query_count", s.query_count},
            {"negative_queries", s.negative_queries}};
}

inline Json stages_json(const LearnTrace& t) {
    Json a = Json::array();
    for (const auto& s : t.stages)
        a.push_back({{"name", s.name},
                     {"round", s.round},
                     {"queries", s.cost.queries},
                     {"time", s.cost.time},
                     {"t_min", num(s.cost.t_min)},
                     {"negative_queries", s.cost.negative_queries},
                     {"experiments", s.experiments},
                     {"copies", s.copies},
                     {"ancillas", s.ancillas},
                     {"segments", s.segments},
                     {"threshold", s.threshold},
                     {"budget_exhausted", s.budget_exhausted}});
    return a;
}

inline Json rounds_json(const LearnTrace& t) {
    Json a = Json::array();
    for (const auto& r : t.rounds) {
        Json nt = Json::array();
        for (const auto& p : r.new_terms) nt.push_back(p.letters());
        Json est = Json::array();
        for (const auto& [p, v] : r.estimate) est.push_back({{"pauli", p.letters()}, {"lambda_hat", v}});
        a.push_back({{"round", r.round}, {"eta", r.eta}, {"zeta", r.zeta}, {"new_terms", nt}, {"estimate", est}});
    }
    return a;
}

inline Json config_json(const RunConfig& c) {
    const LearnerConfig& l = c.learner;
    const Constants& k = l.constants;
    Json j = {{"pipeline", to_string(c.resolved_pipeline())},
              {"mode", to_string(l.mode)},
              {"galactic_p", l.galactic_p},
              {"control", to_string(l.control)},
              {"control_gamma", l.control_gamma},
              {"estimator", to_string(l.estimator)},
              {"exact_encodings", l.exact_encodings},
              {"norm_bound", l.norm_bound ? Json(*l.norm_bound) : Json(nullptr)},
              {"epsilon", l.epsilon},
              {"delta", l.delta},
              {"m_bound", l.m_bound},
              {"seed", l.seed},
              {"workers", l.workers},
              {"constants",
               {{"c_d", k.c_d},
                {"c_amp", k.c_amp},
                {"c_sh", k.c_sh},
                {"c_cc", k.c_cc},
                {"c_enc", k.c_enc},
                {"c_N", k.c_N},
                {"c_boost", k.c_boost},
                {"c_ctrl", k.c_ctrl},
                {"mom_batches", k.mom_batches}}}};
    return j;
}

inline Json checks_json(const std::vector<CheckResult>& cs) {
    Json a = Json::array();
    for (const auto& c : cs)
        a.push_back({{"name", c.name}, {"pass", c.pass}, {"flagged", c.flagged}, {"detail", c.detail}});
    return a;
}

}  // namespace report

inline SparseHamiltonian make_instance(const RunConfig& c) {
    if (!c.instance.terms.empty()) return SparseHamiltonian(c.instance.terms.front().pauli.n(), c.instance.terms);
    Rng rng = substream(c.learner.seed, "instance");
    return random_hamiltonian(c.instance.n, static_cast<size_t>(c.instance.m), c.instance.min_coefficient, rng);
}

struct RunOutcome {
    Json report;
    bool pass = true;
    LearnTrace trace;
    LedgerSnapshot ledger;
};

/// Runs the configured pipeline on `h` and assembles the report.
inline RunOutcome run_experiment(const RunConfig& c, const SparseHamiltonian& h, bool timing = true) {
    const auto t0 = std::chrono::steady_clock::now();
    const LearnerConfig& l = c.learner;
    const Pipeline p = c.resolved_pipeline();
    const AccessMode access = l.mode == LearnMode::kTimeReversal ? AccessMode::kTimeReversal : AccessMode::kTimeForward;
    QueryOracle oracle(h, access, nullptr, c.instance.trace_shift);

    RunOutcome out;
    StructureEstimate structure;
    ParameterEstimate params;
    bool have_structure = false, have_params = false;
    switch (p) {
        case Pipeline::kBootstrap:
            params = bootstrap_learn(oracle, l, &out.trace);
            have_params = true;
            break;
        case Pipeline::kTimeForward:
            params = timeforward_learn(oracle, l, &out.trace);
            have_params = true;
            break;
        case Pipeline::kIdentifyOnly:
            structure = identify_only(oracle, l, &out.trace);
            have_structure = true;
            break;
        case Pipeline::kEstimateOnly: {
            std::vector<PauliString> terms;
            for (const auto& t : h.terms()) terms.push_back(t.pauli);
            params = estimate_only(oracle, l, terms, &out.trace);
            have_params = true;
            break;
        }
        case Pipeline::kAuto: break;
    }
    if (have_params && !have_structure) {
        for (const auto& [q, v] : params.entries) structure.terms.insert(q);
        structure.threshold = l.epsilon;
        have_structure = true;
    }
    out.ledger = oracle.ledger().snapshot();

    std::vector<CheckResult> cs;
    if (have_params) {
        const double err = params.max_error(h);
        cs.push_back({"max_error_within_epsilon", err <= l.epsilon, false, "max error " + checks::fmt(err)});
    }
    if (have_structure && p != Pipeline::kEstimateOnly) {
        int missing = 0;
        for (const auto& t : h.terms())
            if (std::abs(t.coefficient) > l.epsilon && !structure.terms.count(t.pauli)) ++missing;
        cs.push_back({"structure_covers_large_terms", missing == 0, false, std::to_string(missing) + " missing"});
    }
    if (access == AccessMode::kTimeForward)
        cs.push_back({"no_negative_time", out.ledger.negative_queries == 0, false,
                      std::to_string(out.ledger.negative_queries) + " negative-time queries"});
    cs.push_back({"ledger_consistent", out.ledger.t_total >= out.ledger.t_min_observed || out.ledger.query_count == 0,
                  false, ""});
    for (const auto& ch : cs) out.pass = out.pass && ch.pass;

    Json inst = {{"n", h.n()}, {"m", h.m()}, {"generated", c.instance.terms.empty()},
                 {"min_coefficient", c.instance.min_coefficient}, {"trace_shift", c.instance.trace_shift},
                 {"terms", report::terms_json(h.terms())}};
    Json outputs = Json::object();
    if (have_structure) outputs["structure"] = report::structure_json(structure);
    if (have_params) {
        outputs["parameters"] = report::estimate_json(params);
        outputs["max_error"] = params.max_error(h);
    }
    Json norm = {{"delta", out.trace.delta_used}, {"K", out.trace.K}, {"lambda", out.trace.lambda}};
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.report = {{"schema_version", kReportSchemaVersion},
                  {"command", "run"},
                  {"seed", l.seed},
                  {"config", report::config_json(c)},
                  {"instance", inst},
                  {"normalization", norm},
                  {"outputs", outputs},
                  {"ledger", report::ledger_json(out.ledger)},
                  {"stages", report::stages_json(out.trace)},
                  {"rounds", report::rounds_json(out.trace)},
                  {"checks", report::checks_json(cs)},
                  {"pass", out.pass},
                  {"wall_clock_seconds", timing ? Json(wall) : Json(nullptr)}};
    return out;
}

inline RunOutcome run_experiment(const RunConfig& c, bool timing = true) { return run_experiment(c, make_instance(c), timing); }

inline std::string stages_csv(const LearnTrace& t, const LedgerSnapshot& s) {
    std::ostringstream os;
    os.precision(17);
    os << "stage,round,queries,time,t_min,negative_queries,experiments,copies,ancillas,segments,threshold,budget_exhausted\n";
    for (const auto& st : t.stages)
        os << st.name << ',' << st.round << ',' << st.cost.queries << ',' << st.cost.time << ','
           << (std::isfinite(st.cost.t_min) ? st.cost.t_min : 0.0) << ',' << st.cost.negative_queries << ','
           << st.experiments << ',' << st.copies << ',' << st.ancillas << ',' << st.segments << ',' << st.threshold
           << ',' << (st.budget_exhausted ? 1 : 0) << '\n';
    os << "total,," << s.query_count << ',' << s.t_total << ','
       << (std::isfinite(s.t_min_observed) ? s.t_min_observed : 0.0) << ',' << s.negative_queries << ',' << s.n_exp
       << ",," << s.n_anc_max << ",,,\n";
    return os.str();
}

struct SlopeFit {
    double slope = 0, intercept = 0, stderr_slope = 0, ci_low = 0, ci_high = 0;
};

/// Least squares y = a + b x with a 95% interval on b.
inline SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t k = x.size();
    if (k < 2 || y.size() != k) throw OutOfRange("fit_slope: need matching samples, at least two");
    double mx = 0, my = 0;
    for (size_t i = 0; i < k; ++i) {
        mx += x[i] / static_cast<double>(k);
        my += y[i] / static_cast<double>(k);
    }
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < k; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (k > 2) {
        double ssr = 0;
        for (size_t i = 0; i < k; ++i) ssr += std::pow(y[i] - f.intercept - f.slope * x[i], 2);
        f.stderr_slope = std::sqrt(ssr / static_cast<double>(k - 2) / sxx);
        boost::math::students_t t(static_cast<double>(k - 2));
        const double q = boost::math::quantile(boost::math::complement(t, 0.025));
        f.ci_low = f.slope - q * f.stderr_slope;
        f.ci_high = f.slope + q * f.stderr_slope;
    } else {
        f.ci_low = f.ci_high = f.slope;
    }
    return f;
}

struct SweepOutcome {
    Json report;
    SlopeFit fit;
    std::vector<double> epsilons, t_total;
};

/// Reruns the pipeline per epsilon on one instance and fits log t_total
/// against log(1/epsilon).
inline SweepOutcome run_sweep(const RunConfig& base, bool timing = true) {
    const auto t0 = std::chrono::steady_clock::now();
    if (base.sweep.epsilons.size() < 3) throw ConfigError("sweep: [sweep] epsilons needs at least three values");
    const SparseHamiltonian h = make_instance(base);
    SweepOutcome out;
    Json points = Json::array();
    std::vector<double> x, y;
    for (double eps : base.sweep.epsilons) {
        double total = 0, worst = 0;
        for (int r = 0; r < base.sweep.runs; ++r) {
            RunConfig c = base;
            c.learner.epsilon = eps;
            c.learner.seed = base.learner.seed + static_cast<uint64_t>(r);
            const auto o = run_experiment(c, h, false);
            total += o.ledger.t_total / base.sweep.runs;
            worst = std::max(worst, o.report["outputs"].value("max_error", 0.0));
        }
        out.epsilons.push_back(eps);
        out.t_total.push_back(total);
        x.push_back(std::log(1.0 / eps));
        y.push_back(std::log(total));
        points.push_back({{"epsilon", eps}, {"t_total", total}, {"max_error", worst}});
    }
    out.fit = fit_slope(x, y);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.report = {{"schema_version", kReportSchemaVersion},
                  {"command", "sweep"},
                  {"seed", base.learner.seed},
                  {"config", report::config_json(base)},
                  {"instance", {{"n", h.n()}, {"m", h.m()}, {"terms", report::terms_json(h.terms())}}},
                  {"points", points},
                  {"fit",
                   {{"slope", out.fit.slope},
                    {"intercept", out.fit.intercept},
                    {"stderr", out.fit.stderr_slope},
                    {"ci95", {out.fit.ci_low, out.fit.ci_high}}}},
                  {"wall_clock_seconds", timing ? Json(wall) : Json(nullptr)}};
    return out;
}

struct VerifyOutcome {
    Json report;
    bool pass = true;
    std::vector<CheckResult> results;
};

/// Every lemma-level check at fixed seeds plus the Lambda and galactic tables.
inline VerifyOutcome verify_bounds(uint64_t seed = 0, bool timing = true) {
    const auto t0 = std::chrono::steady_clock::now();
    VerifyOutcome out;
    out.results = {checks::matrix_log_coefficients_check(),
                   checks::truncation_check(200, 17 + seed),
                   checks::encoding_audit_check(23 + seed),
                   checks::bell_check(20, 10000, 99 + seed),
                   checks::shadow_check(10, 10000, 31 + seed),
                   checks::controlization_check(50, 8 + seed),
                   checks::copies_check(10000, 4 + seed),
                   checks::coupon_check(2000, 5 + seed),
                   checks::galactic_check()};
    for (const auto& r : out.results) out.pass = out.pass && r.pass;
    Json lt = Json::array();
    for (const auto& r : checks::lambda_table()) lt.push_back({{"K", r.K}, {"lambda", r.lambda}, {"bound_lo", r.lo}, {"bound_hi", r.hi}});
    Json gt = Json::array();
    for (const auto& r : checks::galactic_table())
        gt.push_back({{"p", r.p}, {"delta", r.g.delta}, {"K", r.g.K}, {"lambda_bound", r.g.lambda_bound}, {"lambda", r.g.lambda}});
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.report = {{"schema_version", kReportSchemaVersion},
                  {"command", "verify-bounds"},
                  {"seed", seed},
                  {"checks", report::checks_json(out.results)},
                  {"lambda_table", lt},
                  {"galactic_table", gt},
                  {"pass", out.pass},
                  {"wall_clock_seconds", timing ? Json(wall) : Json(nullptr)}};
    return out;
}

inline Json instance_report(const SparseHamiltonian& h, uint64_t seed, double min_coefficient) {
    std::string ini;
    for (const auto& t : h.terms()) {
        std::ostringstream os;
        os.precision(17);
        os << t.pauli.letters() << ':' << t.coefficient;
        ini += (ini.empty() ? "" : ", ") + os.str();
    }
    return {{"schema_version", kReportSchemaVersion},
            {"command", "gen-instance"},
            {"seed", seed},
            {"instance", {{"n", h.n()}, {"m", h.m()}, {"generated", true}, {"min_coefficient", min_coefficient},
                          {"terms", report::terms_json(h.terms())}}},
            {"ini_terms", ini}};
}

}  // namespace hamlearn
