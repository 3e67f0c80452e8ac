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

// Running a scenario to disk.
//
// A run directory holds one long-form CSV per result (axis columns first, then
// one column per readout, in output units), metadata.json with the scalar
// summaries of every result, and manifest.json. Everything except the
// manifest's timing fields is a pure function of the resolved scenario.

#pragma once

#include <cstddef>
#include <exception>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qdspin/config.hpp"
#include "qdspin/experiments.hpp"

namespace qdspin {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitSolver = 3 };

/// 2 for configuration problems, 3 for everything raised while solving.
int exit_code_for(const std::exception& e);

/// QDSPIN_THREADS if set to a positive integer, otherwise the hardware concurrency (at least 1).
std::size_t default_threads();

/// `spec` is a path to a scenario file, or the name of a built-in scenario
/// when no such file exists.
LoadedScenario resolve_scenario(const std::string& spec, const std::vector<std::string>& overrides = {});

/// Every parameter the run depends on, defaults included, in file units.
nlohmann::ordered_json resolved_parameters(const Scenario& s);

/// Long-form CSV of one result; '#' lines carry the version, scenario and resolved parameters.
std::string result_csv(const SweepResult& r, const Scenario& s);

std::string sha256_hex(std::string_view data);

struct RunReport {
    std::vector<std::filesystem::path> files;  // result files, then manifest.json
    double wall_seconds = 0.0;
};

/// Runs the scenario and writes its files into `out_dir` (created if needed).
RunReport run_to_directory(const LoadedScenario& loaded, const std::filesystem::path& out_dir, std::size_t threads);

struct ScenarioListing {
    std::string name;
    std::string description;
};

/// Built-in scenarios sorted by name.
std::vector<ScenarioListing> list_scenarios();

}  // namespace qdspin
