// Copyright 2026 The qdspin Authors
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

// qdspin command-line tool.
//
//   qdspin list
//   qdspin show fig3a
//   qdspin validate my.toml
//   qdspin run fig3a out/fig3a --set params.kappa_ghz=5 --threads 4

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "qdspin/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Quantum-dot spin in a bimodal cavity: scenario runner"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "List the built-in scenarios");

    std::string show_name;
    auto* show = app.add_subcommand("show", "Print a built-in scenario file");
    show->add_option("name", show_name, "Built-in scenario name")->required();

    std::string validate_spec;
    std::vector<std::string> validate_sets;
    auto* validate = app.add_subcommand("validate", "Check a scenario without running it");
    validate->add_option("config", validate_spec, "Scenario file or built-in name")->required();
    validate->add_option("--set", validate_sets, "Override a value: section.key=value (repeatable)");

    std::string run_spec;
    std::string out_pos;
    std::string out_opt;
    std::vector<std::string> run_sets;
    std::size_t threads = 0;
    auto* run = app.add_subcommand("run", "Run a scenario and write its result files");
    run->add_option("config", run_spec, "Scenario file or built-in name")->required();
    run->add_option("out_dir", out_pos, "Output directory (default out/<scenario name>)");
    run->add_option("--out,-o", out_opt, "Output directory; takes precedence over the positional form");
    run->add_option("--set", run_sets, "Override a value: section.key=value (repeatable)");
    run->add_option("--threads,-j", threads, "Worker threads (default: QDSPIN_THREADS or all cores)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qdspin::kExitConfig;
    }

    try {
        if (*list) {
            for (const auto& s : qdspin::list_scenarios()) std::printf("%-8s %s\n", s.name.c_str(), s.description.c_str());
            return qdspin::kExitOk;
        }
        if (*show) {
            const auto* b = qdspin::find_builtin(show_name);
            if (!b) {
                std::fprintf(stderr, "error: no built-in scenario '%s'\n", show_name.c_str());
                return qdspin::kExitConfig;
            }
            std::cout << b->text;
            return qdspin::kExitOk;
        }
        if (*validate) {
            const auto loaded = qdspin::resolve_scenario(validate_spec, validate_sets);
            std::printf("%s: ok (%s)\n", loaded.scenario.name.c_str(), qdspin::to_string(loaded.scenario.kind));
            return qdspin::kExitOk;
        }
        const auto loaded = qdspin::resolve_scenario(run_spec, run_sets);
        const std::string out = !out_opt.empty() ? out_opt : !out_pos.empty() ? out_pos : "out/" + loaded.scenario.name;
        const std::size_t n = threads > 0 ? threads : qdspin::default_threads();
        const auto report = qdspin::run_to_directory(loaded, out, n);
        for (const auto& f : report.files) std::printf("wrote %s\n", f.string().c_str());
        std::printf("%s finished in %.2f s\n", loaded.scenario.name.c_str(), report.wall_seconds);
        return qdspin::kExitOk;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return qdspin::exit_code_for(e);
    }
}
