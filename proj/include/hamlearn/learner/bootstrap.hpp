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
#include <functional>
#include <vector>

#include "hamlearn/learner/parameters.hpp"
#include "hamlearn/learner/structure.hpp"

namespace hamlearn {

struct ResidualResult {
    StructureEstimate structure;
    ParameterEstimate residual;  // r_hat = (lambda - lambda_hat) / eta at accuracy 1/2
};

namespace detail {

/// qDRIFT segments for a controlled query of duration t at normalization
/// Delta: explicit per-query error gamma, or the stage default.
inline int64_t control_segments(const LearnerConfig& cfg, Stage stage, double delta, double eps, double t) {
    if (cfg.control == ControlMode::kExact) return 1;
    if (cfg.control_gamma > 0) {
        const double e = std::pow(t * delta / 2.0, 2) / cfg.control_gamma;
        return std::max<int64_t>(1, static_cast<int64_t>(std::ceil(e)));
    }
    return required_segments(stage, delta, std::min(eps, 0.5), cfg.constants.c_N);
}

/// Per-query controlization error (t ||H||)^2 / N with ||H|| <= Delta/2.
inline double control_error(double delta, double t, int64_t segments) {
    return std::pow(t * delta / 2.0, 2) / static_cast<double>(segments);
}

/// Structure threshold lowered by the controlization term effect
/// alpha sqrt(Q_1 gamma_ctrl), never below half the exact-control value.
inline double controlized_threshold(double gamma, const LearnerConfig& cfg, double alpha, double queries,
                                    double gamma_ctrl) {
    if (cfg.control == ControlMode::kExact) return gamma;
    const double shift = cfg.constants.c_ctrl * alpha * std::sqrt(queries * gamma_ctrl);
    return std::max(gamma - shift, 0.5 * gamma);
}

/// Keeps the m largest |lambda_hat|, clamped to [-1, 1].
inline void clamp_and_cap(std::map<PauliString, double>& est, int m_bound) {
    for (auto& [p, v] : est) v = std::clamp(v, -1.0, 1.0);
    if (est.size() <= static_cast<size_t>(m_bound)) return;
    std::vector<std::pair<PauliString, double>> v(est.begin(), est.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return std::abs(a.second) > std::abs(b.second); });
    v.resize(static_cast<size_t>(m_bound));
    est = std::map<PauliString, double>(v.begin(), v.end());
}

inline SparseHamiltonian as_hamiltonian(int n, const std::map<PauliString, double>& est) {
    std::vector<Term> terms;
    for (const auto& [p, v] : est) terms.push_back({p, v});
    return SparseHamiltonian(n, std::move(terms));
}

/// One learning round. Round 0 runs on the unamplified arcsin encoding of
/// H/Delta; later rounds on the amplified residual encoding of R/(eta Delta).
inline ResidualResult run_round(const QueryOracle& oracle, const SparseHamiltonian& h_hat, double eta, double zeta,
                                const LearnerConfig& cfg, bool amplified, int round, LearnTrace* trace) {
    oracle.require_time_reversal("time-reversal learning");
    if (!(eta > 0 && eta <= 1)) throw OutOfRange("learn_residual: eta must lie in (0, 1]");
    if (!(zeta > 0 && zeta < 1)) throw OutOfRange("learn_residual: zeta must lie in (0, 1)");
    const Constants& k = cfg.constants;
    const double delta = 2.0 * cfg.m_bound;
    const double t = 1.0 / delta;
    const double eps_arc = std::min(k.c_enc * (amplified ? eta : 1.0) / delta, kPi / 4);
    const double eps_amp = std::min(k.c_enc / delta, 2.0 / kPi);
    const double scale = amplified ? 2.0 * delta : kPi * delta / 2.0;
    const double round_eps = amplified ? eta : 1.0;

    auto build = [&](Stage stage, Rng& r, int64_t& segs) {
        segs = control_segments(cfg, stage, delta, round_eps, t);
        Controlization ctl{cfg.control == ControlMode::kQDrift, segs, &r};
        const BlockEncoding b_h = arcsin_encoding(oracle, delta, eps_arc, {k.c_d, cfg.exact_encodings, true, ctl});
        if (!amplified) return b_h;
        const BlockEncoding b_r = residual_encoding(b_h, h_hat, delta);
        return amplify(b_r, eta, eps_amp, {delta, eps_arc, k.c_amp, segs});
    };

    ResidualResult out;
    const std::string tag = "round" + std::to_string(round);

    // Structure: union of Bell outcomes at threshold 1/2 less the systematic error.
    StageReport srep;
    srep.name = tag + ".structure";
    srep.round = round;
    Rng srng = substream(cfg.seed, "structure", static_cast<uint64_t>(round));
    int64_t segs = 1;
    const BlockEncoding bs = build(Stage::kStructTR, srng, segs);
    srep.segments = segs;
    const double sys = delta * bs.eps_claimed;
    double gamma = std::max(0.5 - sys, 0.05);
    gamma = controlized_threshold(gamma, cfg, scale, static_cast<double>(bs.cost.queries) / static_cast<double>(segs),
                                  control_error(delta, t, segs));
    StructureOptions so;
    so.gamma = gamma;
    so.delta = zeta / 2;
    so.unit = 1.0 / scale;
    so.norm_sq = cfg.m_bound;
    so.m_bound = cfg.m_bound;
    so.c_cc = k.c_cc;
    so.estimator = cfg.estimator;
    out.structure = identify_structure(bs, oracle, so, srng, &srep);

    std::vector<PauliString> terms;
    for (const auto& tm : h_hat.terms()) terms.push_back(tm.pauli);
    for (const auto& p : out.structure.terms)
        if (std::find(terms.begin(), terms.end(), p) == terms.end()) terms.push_back(p);
    if (trace) trace->stages.push_back(srep);

    out.residual.epsilon = 0.5;
    out.residual.delta = zeta / 2;
    if (terms.empty()) return out;

    // Parameters: median over repetitions at confidence 2/3 each.
    StageReport prep;
    prep.name = tag + ".parameters";
    prep.round = round;
    const int reps = std::max(1, static_cast<int>(std::ceil(k.c_boost * std::log(2.0 / zeta))));
    ParameterOptions po;
    po.epsilon = 0.5;
    po.delta = 1.0 / 3.0;
    po.scale = scale;
    po.c_sh = k.c_sh;
    po.batches = k.mom_batches;
    po.estimator = cfg.estimator;
    po.workers = cfg.workers;
    std::vector<ParameterEstimate> runs;
    std::optional<BlockEncoding> fixed;
    for (int r = 0; r < reps; ++r) {
        Rng prng = substream(cfg.seed, "parameters", (static_cast<uint64_t>(round) << 16) | static_cast<uint64_t>(r));
        if (!fixed || cfg.control == ControlMode::kQDrift) fixed = build(Stage::kParamTR, prng, segs);
        prep.segments = segs;
        runs.push_back(estimate_parameters(terms, *fixed, oracle, po, prng, &prep));
    }
    out.residual = median_estimate(runs);
    out.residual.epsilon = 0.5;
    out.residual.delta = zeta / 2;
    if (trace) trace->stages.push_back(prep);
    return out;
}

}  // namespace detail

/// Amplified residual round: new terms with |lambda_a| > eta/2 and
/// r_hat = (lambda - lambda_hat)/eta to within 1/2, each with probability
/// at least 1 - zeta/2.
inline ResidualResult learn_residual(const QueryOracle& oracle, const SparseHamiltonian& h_hat, double eta,
                                     double zeta, const LearnerConfig& cfg, LearnTrace* trace = nullptr,
                                     int round = 1) {
    cfg.validate();
    return detail::run_round(oracle, h_hat, eta, zeta, cfg, true, round, trace);
}

/// Rounds T = floor(log2(1/eps)).
inline int bootstrap_rounds(double eps) {
    return static_cast<int>(std::floor(std::log2(1.0 / eps) + 1e-12));
}

/// zeta_j = delta / 2^{T+1-j}.
inline double bootstrap_zeta(double delta, int T, int j) { return std::ldexp(delta, -(T + 1 - j)); }

/// Heisenberg-limited learning with time reversal: T+1 rounds at
/// precision 2^{-j}, round 0 unamplified.
inline ParameterEstimate bootstrap_learn(const QueryOracle& oracle, const LearnerConfig& cfg,
                                         LearnTrace* trace = nullptr) {
    cfg.validate();
    if (cfg.mode != LearnMode::kTimeReversal) throw ConfigError("bootstrap_learn requires time-reversal mode");
    oracle.require_time_reversal("bootstrap_learn");
    const int T = bootstrap_rounds(cfg.epsilon);
    if (trace) trace->delta_used = 2.0 * cfg.m_bound;
    std::map<PauliString, double> est;
    for (int j = 0; j <= T; ++j) {
        const double eta = std::ldexp(1.0, -j);
        const double zeta = bootstrap_zeta(cfg.delta, T, j);
        const SparseHamiltonian h_hat = detail::as_hamiltonian(oracle.n(), est);
        const auto res = detail::run_round(oracle, h_hat, eta, zeta, cfg, j > 0, j, trace);
        RoundReport rr;
        rr.round = j;
        rr.eta = eta;
        rr.zeta = zeta;
        for (const auto& [p, r] : res.residual.entries) {
            if (!est.count(p)) rr.new_terms.push_back(p);
            est[p] += eta * r;
        }
        detail::clamp_and_cap(est, cfg.m_bound);
        rr.estimate = est;
        if (trace) trace->rounds.push_back(std::move(rr));
    }
    ParameterEstimate out;
    out.entries = std::move(est);
    out.epsilon = cfg.epsilon;
    out.delta = cfg.delta;
    return out;
}

}  // namespace hamlearn
