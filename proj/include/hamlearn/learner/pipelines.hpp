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

#include <vector>

#include "hamlearn/learner/timeforward.hpp"

namespace hamlearn {

namespace detail {

struct StageEncoding {
    BlockEncoding b;
    double scale = 1.0;  // coefficient per block entry
    double delta = 1.0;
    double t_max = 1.0;  // longest controlled query
};

/// Single-shot encoding of H/Delta for the standalone stages: arcsin with
/// time reversal, matrix log without.
inline StageEncoding single_stage_encoding(const QueryOracle& oracle, const LearnerConfig& cfg,
                                                              Stage stage, Rng& rng, int64_t& segs,
                                                              LearnTrace* trace) {
    const Constants& k = cfg.constants;
    if (cfg.mode == LearnMode::kTimeReversal) {
        const double delta = 2.0 * cfg.m_bound;
        segs = control_segments(cfg, stage, delta, cfg.epsilon, 1.0 / delta);
        Controlization ctl{cfg.control == ControlMode::kQDrift, segs, &rng};
        const double eps_arc = std::min(k.c_enc * cfg.epsilon / delta, kPi / 4);
        auto b = arcsin_encoding(oracle, delta, eps_arc, {k.c_d, cfg.exact_encodings, true, ctl});
        if (trace) trace->delta_used = delta;
        return {b, kPi * delta / 2, delta, 1.0 / delta};
    }
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
    segs = control_segments(cfg, stage, delta, std::min(cfg.epsilon, 0.5), K / delta);
    Controlization ctl{cfg.control == ControlMode::kQDrift, segs, &rng};
    auto b = matrix_log_encoding(oracle, delta, K, {true, ctl, r_bound});
    if (trace) {
        trace->delta_used = delta;
        trace->K = K;
        trace->lambda = b.alpha;
    }
    return {b, b.alpha * delta, delta, K / delta};
}

}  // namespace detail

/// Structure identification alone at threshold epsilon less the encoding
/// error (time reversal) or epsilon/2 (forward only).
inline StructureEstimate identify_only(const QueryOracle& oracle, const LearnerConfig& cfg,
                                       LearnTrace* trace = nullptr) {
    cfg.validate();
    StageReport rep;
    rep.name = "structure";
    Rng rng = substream(cfg.seed, "structure");
    int64_t segs = 1;
    const auto enc = detail::single_stage_encoding(
        oracle, cfg, cfg.mode == LearnMode::kTimeReversal ? Stage::kStructTR : Stage::kStructTF, rng, segs, trace);
    const BlockEncoding& b = enc.b;
    const double scale = enc.scale;
    rep.segments = segs;
    const double sys = enc.delta * b.eps_claimed;
    double gamma = cfg.mode == LearnMode::kTimeReversal ? cfg.epsilon - sys : cfg.epsilon / 2;
    gamma = detail::controlized_threshold(std::max(gamma, cfg.epsilon / 4), cfg, scale,
                                          static_cast<double>(b.cost.queries) / static_cast<double>(segs),
                                          detail::control_error(enc.delta, enc.t_max, segs));
    StructureOptions so;
    so.gamma = gamma;
    so.delta = cfg.delta;
    so.unit = 1.0 / scale;
    so.norm_sq = cfg.m_bound;
    so.m_bound = cfg.m_bound;
    so.c_cc = cfg.constants.c_cc;
    so.estimator = cfg.estimator;
    auto out = identify_structure(b, oracle, so, rng, &rep);
    if (trace) trace->stages.push_back(rep);
    return out;
}

/// Parameter estimation alone on a known support, without amplification.
inline ParameterEstimate estimate_only(const QueryOracle& oracle, const LearnerConfig& cfg,
                                       const std::vector<PauliString>& terms, LearnTrace* trace = nullptr) {
    cfg.validate();
    StageReport rep;
    rep.name = "parameters";
    Rng rng = substream(cfg.seed, "parameters");
    int64_t segs = 1;
    const auto enc = detail::single_stage_encoding(
        oracle, cfg, cfg.mode == LearnMode::kTimeReversal ? Stage::kParamTR : Stage::kParamTF, rng, segs, trace);
    rep.segments = segs;
    ParameterOptions po;
    po.epsilon = cfg.epsilon;
    po.delta = cfg.delta;
    po.scale = enc.scale;
    po.c_sh = cfg.constants.c_sh;
    po.batches = cfg.constants.mom_batches;
    po.estimator = cfg.estimator;
    po.workers = cfg.workers;
    auto out = estimate_parameters(terms, enc.b, oracle, po, rng, &rep);
    detail::clamp_and_cap(out.entries, cfg.m_bound);
    if (trace) trace->stages.push_back(rep);
    return out;
}

}  // namespace hamlearn
