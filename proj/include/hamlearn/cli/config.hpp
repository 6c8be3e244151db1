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

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hamlearn/learner/config.hpp"

namespace hamlearn {

enum class Pipeline { kAuto, kBootstrap, kTimeForward, kIdentifyOnly, kEstimateOnly };

inline std::string to_string(Pipeline p) {
    switch (p) {
        case Pipeline::kAuto: return "auto";
        case Pipeline::kBootstrap: return "bootstrap";
        case Pipeline::kTimeForward: return "timeforward";
        case Pipeline::kIdentifyOnly: return "identify-only";
        case Pipeline::kEstimateOnly: return "estimate-only";
    }
    return "?";
}

struct InstanceSpec {
    int n = 2;
    int m = 2;
    double min_coefficient = 0.3;   // lower bound on |lambda_a| for generated instances
    std::vector<Term> terms;        // supplied instance; empty means generate
    double trace_shift = 0.0;
};

struct SweepSpec {
    std::vector<double> epsilons;
    int runs = 1;
};

struct RunConfig {
    LearnerConfig learner;
    InstanceSpec instance;
    Pipeline pipeline = Pipeline::kAuto;
    SweepSpec sweep;

    Pipeline resolved_pipeline() const {
        if (pipeline != Pipeline::kAuto) return pipeline;
        return learner.mode == LearnMode::kTimeReversal ? Pipeline::kBootstrap : Pipeline::kTimeForward;
    }
};

namespace detail {

/// Line of `section.key` in INI text, for diagnostics; 0 when absent.
inline std::map<std::string, int> ini_lines(const std::string& text) {
    std::map<std::string, int> out;
    std::istringstream in(text);
    std::string line, section;
    int no = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq != std::string::npos) out[section + "." + trim(t.substr(0, eq))] = no;
    }
    return out;
}

class IniReader {
   public:
    IniReader(const boost::property_tree::ptree& pt, std::map<std::string, int> lines, std::string source)
        : pt_(pt), lines_(std::move(lines)), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        auto it = lines_.find(key);
        std::string where = source_;
        if (it != lines_.end()) where += ":" + std::to_string(it->second);
        const auto dot = key.find('.');
        throw ConfigError(where + ": [" + key.substr(0, dot) + "] " + key.substr(dot + 1) + ": " + msg);
    }

    std::optional<std::string> raw(const std::string& key) {
        used_.insert(key);
        auto v = pt_.get_optional<std::string>(key);
        if (v) {
            std::string s = *v;
            const auto b = s.find_first_not_of(" \t\"");
            const auto e = s.find_last_not_of(" \t\"");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        }
        return std::nullopt;
    }

    double real(const std::string& key, double def) {
        auto v = raw(key);
        if (!v) return def;
        try {
            size_t pos = 0;
            const double d = std::stod(*v, &pos);
            if (pos != v->size()) fail(key, "expected a number, got '" + *v + "'");
            return d;
        } catch (const std::logic_error&) {
            fail(key, "expected a number, got '" + *v + "'");
        }
    }

    int64_t integer(const std::string& key, int64_t def) {
        auto v = raw(key);
        if (!v) return def;
        try {
            size_t pos = 0;
            const long long d = std::stoll(*v, &pos);
            if (pos != v->size()) fail(key, "expected an integer, got '" + *v + "'");
            return d;
        } catch (const std::logic_error&) {
            fail(key, "expected an integer, got '" + *v + "'");
        }
    }

    bool boolean(const std::string& key, bool def) {
        auto v = raw(key);
        if (!v) return def;
        if (*v == "true" || *v == "1" || *v == "yes") return true;
        if (*v == "false" || *v == "0" || *v == "no") return false;
        fail(key, "expected true or false, got '" + *v + "'");
    }

    template <class E>
    E choice(const std::string& key, E def, const std::vector<std::pair<std::string, E>>& options) {
        auto v = raw(key);
        if (!v) return def;
        std::string names;
        for (const auto& [name, val] : options) {
            if (*v == name) return val;
            names += (names.empty() ? "" : ", ") + name;
        }
        fail(key, "unknown value '" + *v + "' (expected one of " + names + ")");
    }

    /// Rejects keys that were never read.
    void check_unknown() const {
        for (const auto& [section, tree] : pt_) {
            if (tree.empty() && !tree.data().empty()) {
                throw ConfigError(source_ + ": top-level key '" + section + "' outside any section");
            }
            for (const auto& [key, v] : tree) {
                const std::string full = section + "." + key;
                if (!used_.count(full)) fail(full, "unknown field");
            }
        }
    }

   private:
    const boost::property_tree::ptree& pt_;
    std::map<std::string, int> lines_;
    std::string source_;
    std::set<std::string> used_;
};

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            const auto b = cur.find_first_not_of(" \t");
            const auto e = cur.find_last_not_of(" \t");
            if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

}  // namespace detail

/// Parses an INI run configuration with sections [instance], [mode],
/// [budget], [constants] and [sweep].
inline RunConfig parse_run_config(const std::string& text, const std::string& source = "<config>") {
    boost::property_tree::ptree pt;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    detail::IniReader r(pt, detail::ini_lines(text), source);
    RunConfig c;
    LearnerConfig& l = c.learner;

    c.instance.n = static_cast<int>(r.integer("instance.n", c.instance.n));
    c.instance.m = static_cast<int>(r.integer("instance.m", c.instance.m));
    c.instance.min_coefficient = r.real("instance.min_coefficient", c.instance.min_coefficient);
    c.instance.trace_shift = r.real("instance.trace_shift", 0.0);
    if (c.instance.n < 1 || c.instance.n > kMaxSystemQubits) r.fail("instance.n", "must lie in [1, 6]");
    if (c.instance.m < 1) r.fail("instance.m", "must be at least 1");
    if (!(c.instance.min_coefficient >= 0 && c.instance.min_coefficient < 1))
        r.fail("instance.min_coefficient", "must lie in [0, 1)");
    if (auto terms = r.raw("instance.terms")) {
        for (const auto& item : detail::split_list(*terms)) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) r.fail("instance.terms", "expected PAULI:value, got '" + item + "'");
            try {
                PauliString p(item.substr(0, colon));
                size_t pos = 0;
                const std::string num = item.substr(colon + 1);
                const double v = std::stod(num, &pos);
                if (pos != num.size()) throw std::invalid_argument(num);
                c.instance.terms.push_back({p, v});
            } catch (const std::exception&) {
                r.fail("instance.terms", "cannot parse term '" + item + "'");
            }
        }
        try {
            const SparseHamiltonian h(c.instance.terms.front().pauli.n(), c.instance.terms);
            c.instance.n = h.n();
            c.instance.m = static_cast<int>(h.m());
        } catch (const Error& e) {
            r.fail("instance.terms", e.what());
        }
    }

    c.pipeline = r.choice<Pipeline>("mode.pipeline", Pipeline::kAuto,
                                    {{"auto", Pipeline::kAuto},
                                     {"bootstrap", Pipeline::kBootstrap},
                                     {"timeforward", Pipeline::kTimeForward},
                                     {"identify-only", Pipeline::kIdentifyOnly},
                                     {"estimate-only", Pipeline::kEstimateOnly}});
    l.mode = r.choice<LearnMode>("mode.mode", l.mode,
                                 {{"time-reversal", LearnMode::kTimeReversal},
                                  {"time-forward", LearnMode::kTimeForward},
                                  {"galactic", LearnMode::kGalactic}});
    l.galactic_p = r.real("mode.galactic_p", l.galactic_p);
    if (l.mode == LearnMode::kGalactic && !(l.galactic_p >= 1)) r.fail("mode.galactic_p", "must be >= 1 in galactic mode");
    l.control = r.choice<ControlMode>("mode.control", l.control,
                                      {{"exact", ControlMode::kExact}, {"qdrift", ControlMode::kQDrift}});
    l.control_gamma = r.real("mode.control_gamma", l.control_gamma);
    if (l.control_gamma < 0) r.fail("mode.control_gamma", "must be non-negative (0 selects segments automatically)");
    l.estimator = r.choice<EstimatorMode>("mode.estimator", l.estimator,
                                          {{"shadows", EstimatorMode::kShadows}, {"exact", EstimatorMode::kExact}});
    l.exact_encodings = r.boolean("mode.exact_encodings", l.exact_encodings);
    if (r.raw("mode.norm_bound")) {
        l.norm_bound = r.real("mode.norm_bound", 1.0);
        if (!(*l.norm_bound > 0)) r.fail("mode.norm_bound", "must be positive");
    }
    const Pipeline p = c.resolved_pipeline();
    if (p == Pipeline::kBootstrap && l.mode != LearnMode::kTimeReversal)
        r.fail("mode.pipeline", "bootstrap needs mode = time-reversal");
    if (p == Pipeline::kTimeForward && l.mode == LearnMode::kTimeReversal)
        r.fail("mode.pipeline", "timeforward needs mode = time-forward or galactic");

    l.epsilon = r.real("budget.epsilon", l.epsilon);
    if (!(l.epsilon > 0 && l.epsilon < 1)) r.fail("budget.epsilon", "must lie in (0, 1)");
    l.delta = r.real("budget.delta", l.delta);
    if (!(l.delta > 0 && l.delta < 1)) r.fail("budget.delta", "must lie in (0, 1)");
    l.m_bound = static_cast<int>(r.integer("budget.m_bound", c.instance.m));
    if (l.m_bound < 1) r.fail("budget.m_bound", "must be at least 1");
    l.seed = static_cast<uint64_t>(r.integer("budget.seed", 0));
    l.workers = static_cast<int>(r.integer("budget.workers", 1));
    if (l.workers < 1) r.fail("budget.workers", "must be at least 1");

    Constants& k = l.constants;
    for (auto [name, ref] : std::vector<std::pair<std::string, double*>>{{"c_d", &k.c_d},
                                                                        {"c_amp", &k.c_amp},
                                                                        {"c_sh", &k.c_sh},
                                                                        {"c_cc", &k.c_cc},
                                                                        {"c_enc", &k.c_enc},
                                                                        {"c_N", &k.c_N},
                                                                        {"c_boost", &k.c_boost},
                                                                        {"c_ctrl", &k.c_ctrl}}) {
        *ref = r.real("constants." + name, *ref);
        if (!(*ref > 0) && !(name == "c_ctrl" && *ref == 0)) r.fail("constants." + name, "must be positive");
    }
    k.mom_batches = static_cast<int>(r.integer("constants.mom_batches", k.mom_batches));
    if (k.mom_batches < 1) r.fail("constants.mom_batches", "must be at least 1");

    if (auto eps = r.raw("sweep.epsilons")) {
        for (const auto& e : detail::split_list(*eps)) {
            try {
                c.sweep.epsilons.push_back(std::stod(e));
            } catch (const std::exception&) {
                r.fail("sweep.epsilons", "cannot parse '" + e + "'");
            }
            if (!(c.sweep.epsilons.back() > 0 && c.sweep.epsilons.back() < 1))
                r.fail("sweep.epsilons", "values must lie in (0, 1)");
        }
    }
    c.sweep.runs = static_cast<int>(r.integer("sweep.runs", 1));
    if (c.sweep.runs < 1) r.fail("sweep.runs", "must be at least 1");
    r.check_unknown();
    l.validate();
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), path);
}

}  // namespace hamlearn
