// Copyright 2026 The qhop Authors
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

// Command-line runner for the numerical studies and the resource estimator.
// Exit codes: 0 success, 2 validation failure, 3 numerical non-convergence.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qhop/experiments.hpp"
#include "qhop/operator_core.hpp"

namespace {

constexpr int kValidationExit = 2;
constexpr int kConvergenceExit = 3;

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool timing = false;
    bool include_1024 = false;
};

qhop::experiments::RunConfig resolve(const std::string& subcommand, const Options& o) {
    using qhop::experiments::Json;
    Json source = Json::object();
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw qhop::ValidationError("config: cannot open '" + o.config + "'");
        try {
            source = Json::parse(in);
        } catch (const Json::exception& e) {
            throw qhop::ValidationError("config: '" + o.config + "' is not valid JSON: " + e.what());
        }
    }
    if (o.seed) source["seed"] = *o.seed;
    if (o.include_1024) source["include_1024"] = true;
    return qhop::experiments::make_config(subcommand, source);
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) throw qhop::ValidationError("cannot write '" + out + "'");
    file << text;
}

int execute(const std::string& subcommand, const Options& o) {
    const auto config = resolve(subcommand, o);
    if (subcommand == "estimate") {
        std::string text;
        for (const auto& record : qhop::experiments::estimate(config)) text += record.dump() + "\n";
        emit(text, o.out);
        return 0;
    }
    const auto result = qhop::experiments::run(config);
    emit(qhop::experiments::to_csv(config, result, o.timing), o.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qhop numerical studies and resource estimates"};
    app.require_subcommand(1);
    Options options;
    const std::pair<const char*, const char*> commands[] = {
        {"commutator-scan", "Commutator norm against lag for the Schrodinger system"},
        {"converge-h", "Operator error against step size"},
        {"scale-n", "Operator and vector errors against grid size"},
        {"wavepacket-k", "Vector error against wavepacket frequency"},
        {"bound-check", "Measured errors relative to the analytic bounds"},
        {"estimate", "Formula-level resource estimates, one JSON record per method"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", options.config, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--out", options.out, "Output path (default stdout)");
        sub->add_option("--seed", options.seed, "64-bit RNG seed");
        sub->add_flag("--timing", options.timing, "Record wall times (output is then not byte-stable)");
        sub->add_flag("--include-1024", options.include_1024, "Add N = 1024 to the commutator scan");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kValidationExit;
    }
    try {
        return execute(app.get_subcommands().front()->get_name(), options);
    } catch (const qhop::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidationExit;
    } catch (const qhop::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return kConvergenceExit;
    }
}
