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

// hamlearn: batch runner for the learning pipelines and bound checks.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hamlearn/cli/runner.hpp"

namespace {

using namespace hamlearn;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

struct Common {
    std::string config;
    std::string out;
    std::string format = "json";
    uint64_t seed = 0;
    int workers = 0;
    bool omit_timing = false;
};

void add_common(CLI::App* sub, Common& c, bool with_config = true) {
    if (with_config) sub->add_option("--config", c.config, "INI experiment configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "override the configured seed");
    sub->add_option("--out", c.out, "write the report here instead of stdout");
    sub->add_option("--workers", c.workers, "worker threads for shot sampling")->check(CLI::PositiveNumber);
    sub->add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--omit-timing", c.omit_timing, "emit null wall_clock_seconds so reports compare byte for byte");
}

RunConfig resolve(const Common& c, const CLI::App* sub) {
    RunConfig rc = c.config.empty() ? parse_run_config("", "<defaults>") : load_run_config(c.config);
    if (sub->count("--seed")) rc.learner.seed = c.seed;
    if (c.workers > 0) rc.learner.workers = c.workers;
    rc.learner.validate();
    return rc;
}

void emit(const Common& c, const std::string& body) {
    if (c.out.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ConfigError("cannot open --out path " + c.out);
    f << body;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string checks_csv(const Json& checks) {
    std::ostringstream os;
    os << "check,pass,flagged,detail\n";
    for (const auto& c : checks)
        os << c["name"].get<std::string>() << ',' << (c["pass"].get<bool>() ? 1 : 0) << ','
           << (c["flagged"].get<bool>() ? 1 : 0) << ",\"" << c["detail"].get<std::string>() << "\"\n";
    return os.str();
}

std::string sweep_csv(const Json& r) {
    std::ostringstream os;
    os.precision(17);
    os << "epsilon,t_total,max_error\n";
    for (const auto& p : r["points"])
        os << p["epsilon"].get<double>() << ',' << p["t_total"].get<double>() << ',' << p["max_error"].get<double>()
           << '\n';
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pauli-structure Hamiltonian learning experiments"};
    app.require_subcommand(1);

    Common run_opt, verify_opt, sweep_opt, gen_opt;
    auto* run = app.add_subcommand("run", "learn one instance and report");
    add_common(run, run_opt);
    auto* verify = app.add_subcommand("verify-bounds", "run every lemma-level check at fixed seeds");
    add_common(verify, verify_opt, false);
    auto* sweep = app.add_subcommand("sweep", "fit log t_total against log(1/epsilon)");
    add_common(sweep, sweep_opt);
    auto* gen = app.add_subcommand("gen-instance", "sample a random instance from [instance]");
    add_common(gen, gen_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (*run) {
            const RunConfig rc = resolve(run_opt, run);
            const auto o = run_experiment(rc, !run_opt.omit_timing);
            emit(run_opt, run_opt.format == "csv" ? stages_csv(o.trace, o.ledger) : dump(o.report));
            return o.pass ? kExitOk : kExitCheckFailed;
        }
        if (*verify) {
            const auto o = verify_bounds(verify->count("--seed") ? verify_opt.seed : 0, !verify_opt.omit_timing);
            emit(verify_opt, verify_opt.format == "csv" ? checks_csv(o.report["checks"]) : dump(o.report));
            return o.pass ? kExitOk : kExitCheckFailed;
        }
        if (*sweep) {
            const RunConfig rc = resolve(sweep_opt, sweep);
            const auto o = run_sweep(rc, !sweep_opt.omit_timing);
            emit(sweep_opt, sweep_opt.format == "csv" ? sweep_csv(o.report) : dump(o.report));
            return kExitOk;
        }
        if (*gen) {
            const RunConfig rc = resolve(gen_opt, gen);
            RunConfig g = rc;
            g.instance.terms.clear();
            const SparseHamiltonian h = make_instance(g);
            const Json r = instance_report(h, rc.learner.seed, rc.instance.min_coefficient);
            if (gen_opt.format == "csv") {
                std::ostringstream os;
                os.precision(17);
                os << "pauli,lambda\n";
                for (const auto& t : h.terms()) os << t.pauli.letters() << ',' << t.coefficient << '\n';
                emit(gen_opt, os.str());
            } else {
                emit(gen_opt, dump(r));
            }
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
    return kExitOk;
}
