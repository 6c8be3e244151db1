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

#include "hamlearn/learner/bootstrap.hpp"

namespace hamlearn {

struct GalacticParams {
    double delta = 0.0;        // 2^p ||H||
    int K = 1;
    double lambda_bound = 0.0; // (Delta/eps)^{1/p}, up to constants
    double lambda = 0.0;       // exact sum_j |c_j| at this K
};

/// Delta = 2^p ||H||, K = ceil(log2(C/gamma)/p) - 1 with C^{-1} = 2(1 - 2^{-p})
/// and gamma = eps/(2 Delta); K is at least 1.
inline GalacticParams galactic_params(double p, double h_norm, double eps) {
    if (!(p >= 1)) throw ConfigError("galactic p must be >= 1");
    if (!(h_norm > 0)) throw OutOfRange("galactic_params: ||H|| must be positive");
    if (!(eps > 0 && eps < 1)) throw OutOfRange("galactic_params: eps must lie in (0, 1)");
    GalacticParams g;
    g.delta = std::exp2(p) * h_norm;
    // log2(C/gamma) = log2(Delta/eps) - log2(1 - 2^{-p})
    const double lg = std::log2(g.delta / eps) - std::log1p(-std::exp2(-p)) / std::log(2.0);
    g.K = std::clamp(static_cast<int>(std::ceil(lg / p - 1e-12)) - 1, 1, 40);
    g.lambda_bound = std::pow(g.delta / eps, 1.0 / p);
    g.lambda = matrix_log_coefficients(g.K).lambda;
    return g;
}

/// Learning from forward evolutions only: structure and parameters from
/// the matrix-log encoding of H/Delta.
inline ParameterEstimate timeforward_learn(const QueryOracle& oracle, const LearnerConfig& cfg,
                                           LearnTrace* trace = nullptr) {
    cfg.validate();
    if (cfg.mode == LearnMode::kTimeReversal) throw ConfigError("timeforward_learn requires time-forward or galactic mode");
    const Constants& k = cfg.constants;
    const double h_bound = cfg.norm_bound.value_or(static_cast<double>(cfg.m_bound));
    double delta = 2.0 * h_bound;
    int K = matrix_log_order(delta, cfg.epsilon);
    double r_bound = 0.5;
    if (cfg.mode == LearnMode::kGalactic) {
        const auto g = galactic_params(cfg.galactic_p, h_bound, cfg.epsilon);
        delta = g.delta;
        K = g.K;
        r_bound = std::exp2(-cfg.galactic_p);
    }
    const double eps_stage = std::min(cfg.epsilon, 0.5);
    auto build = [&](Stage stage, Rng& r, int64_t& segs) {
        segs = detail::control_segments(cfg, stage, delta, eps_stage, K / delta);
        Controlization ctl{cfg.control == ControlMode::kQDrift, segs, &r};
        return matrix_log_encoding(oracle, delta, K, {true, ctl, r_bound});
    };

    StageReport srep;
    srep.name = "structure";
    Rng srng = substream(cfg.seed, "structure");
    int64_t segs = 1;
    const BlockEncoding bs = build(Stage::kStructTF, srng, segs);
    srep.segments = segs;
    const double scale = bs.alpha * delta;
    if (trace) {
        trace->delta_used = delta;
        trace->K = K;
        trace->lambda = bs.alpha;
    }
    StructureOptions so;
    so.gamma = detail::controlized_threshold(cfg.epsilon / 2, cfg, scale,
                                             static_cast<double>(bs.cost.queries) / static_cast<double>(segs),
                                             detail::control_error(delta, K / delta, segs));
    so.delta = cfg.delta / 2;
    so.unit = 1.0 / scale;
    so.norm_sq = cfg.m_bound;
    so.m_bound = cfg.m_bound;
    so.c_cc = k.c_cc;
    so.estimator = cfg.estimator;
    const StructureEstimate st = identify_structure(bs, oracle, so, srng, &srep);
    if (trace) trace->stages.push_back(srep);

    ParameterEstimate out;
    out.epsilon = cfg.epsilon;
    out.delta = cfg.delta;
    if (st.terms.empty()) return out;
    std::vector<PauliString> terms(st.terms.begin(), st.terms.end());

    StageReport prep;
    prep.name = "parameters";
    Rng prng = substream(cfg.seed, "parameters");
    const BlockEncoding bp = cfg.control == ControlMode::kQDrift ? build(Stage::kParamTF, prng, segs) : bs;
    prep.segments = segs;
    ParameterOptions po;
    po.epsilon = cfg.epsilon;
    po.delta = cfg.delta / 2;
    po.scale = bp.alpha * delta;
    po.c_sh = k.c_sh;
    po.batches = k.mom_batches;
    po.estimator = cfg.estimator;
    po.workers = cfg.workers;
    out = estimate_parameters(terms, bp, oracle, po, prng, &prep);
    out.epsilon = cfg.epsilon;
    out.delta = cfg.delta;
    detail::clamp_and_cap(out.entries, cfg.m_bound);
    if (trace) trace->stages.push_back(prep);
    return out;
}

}  // namespace hamlearn
