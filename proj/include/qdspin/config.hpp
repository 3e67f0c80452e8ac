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

// Scenario files.
//
// A scenario is a TOML document. Frequencies are written as f = omega / 2pi in
// GHz (keys ending in _ghz), times in ps (_ps) and the magnetic field in tesla.
// Everything is converted to rad/ns, ns and T on load.
//
//   name = "fig3a"
//   kind = "init_map"            # pl_map | eigenbranches | init_map |
//                                # init_dynamics | manipulation | field_ratio
//   initial_state = "mixed_spin" # mixed_spin | spin_up
//   driving = "qd_direct"        # manipulation only: qd_direct | cavity
//
//   [params]    g_ghz, kappa_ghz, gamma_ghz set both modes / all four dipoles;
//               g_a_ghz, kappa_b_ghz, gamma_41_ghz ... set one. Also
//               omega_o_ghz, omega_a_ghz, omega_b_ghz, B_tesla, g_e, g_h,
//               fock_cutoff, pump_ghz.
//   [drive]     omega_l_ghz, eps_a_ghz, eps_b_ghz, omega_h_ghz, omega_v_ghz,
//               polarization, phase_rad
//   [drive.pulse] shape ("constant" | "gaussian"), fwhm_ps, center_ps, amplitude_scale
//   [field]     power_w, sigma0_m, n, lambda0_m, eta, v_m_m3, kappa_ghz, q, mu_h_cm, mu_v_cm
//   [sweep]     one entry per axis, either an array or {start, stop, num}:
//               B_tesla, delta_ghz, delta_b_ghz, delta_l_ghz, delta_c2_ghz,
//               time_ps, detuning_ghz, amplitude_ghz
//
// Unknown keys, wrong types and physically invalid values raise ConfigError
// with the source line where one is available.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qdspin/experiments.hpp"

namespace qdspin {

struct LoadedScenario {
    Scenario scenario;
    /// The document after overrides, re-serialized; hashing it identifies the inputs.
    std::string resolved_text;
};

/// Parses a scenario document. Each override has the form "section.key=value"
/// where value is a TOML value ("5", "\"cavity\"", "[1, 2]", "{start=0, stop=1, num=3}").
LoadedScenario parse_scenario(std::string_view text, const std::string& source_name,
                              const std::vector<std::string>& overrides = {});

LoadedScenario load_scenario_file(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Config-file key and unit conversion factor (config value = internal value / factor)
/// for an internal axis name, e.g. "delta_b" -> ("delta_b_ghz", 2 pi).
struct AxisUnit {
    std::string key;
    std::string unit;
    double factor;
};
AxisUnit axis_unit(const std::string& axis_name);

struct BuiltinScenario {
    std::string name;
    std::string description;
    std::string text;
};

/// The shipped scenario files, sorted by name.
const std::vector<BuiltinScenario>& builtin_scenarios();
const BuiltinScenario* find_builtin(const std::string& name);

}  // namespace qdspin
