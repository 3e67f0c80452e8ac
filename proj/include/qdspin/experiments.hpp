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

// Figure campaigns: PL maps, spin initialization (steady state and time
// domain), pulsed spin manipulation and the classical field-ratio curve.
//
// Sweeps evaluate cells independently on a small thread pool. Each cell's
// result depends only on its own inputs, so output is identical for any
// thread count.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qdspin/dynamics.hpp"
#include "qdspin/fieldmodel.hpp"
#include "qdspin/model.hpp"
#include "qdspin/spectra.hpp"

namespace qdspin {

enum class InitialState { mixed_spin, spin_up, custom };

const char* to_string(InitialState s);
InitialState initial_state_from_string(const std::string& s);

/// mixed_spin: (|1><1| + |2><2|)/2 with both modes in vacuum; spin_up: |1> and vacuum.
/// `custom` takes `custom_rho`, which must be a valid density matrix on `space`.
DensityMatrix make_initial_state(InitialState s, const HilbertSpace& space, const Matrix* custom_rho = nullptr);

struct Axis {
    std::string name;
    std::vector<double> values;
};

/// Readouts on the outer product of the axes; the first axis varies slowest.
struct SweepResult {
    std::string name;
    std::vector<Axis> axes;
    std::map<std::string, std::vector<double>> values;
    std::map<std::string, std::string> metadata;

    std::size_t cells() const;
    std::vector<std::size_t> shape() const;
    /// Row-major flat index of a multi-index.
    std::size_t flat(const std::vector<std::size_t>& index) const;
    /// Throws InvalidArgument unless every readout has cells() entries.
    void check_shape() const;
};

/// Calls body(i) for i in [0, count) on up to `threads` workers. If any call
/// throws, the exception from the lowest failing index is rethrown after all
/// workers finish.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

// ---------------------------------------------------------------- spectra --

/// Emission spectra versus field with both cavities held at omega_o.
SweepResult run_pl_map(const SystemParams& params, const std::vector<double>& b_grid, double pump,
                       const std::vector<double>& omega_grid, std::size_t threads = 1);

// --------------------------------------------------------- initialization --

struct SpinReadout {
    double rho11 = 0.0;
    double rho22 = 0.0;
    double purity = 0.0;       // Tr[(rho^(1,2))^2], unnormalized block
    double block_trace = 0.0;  // rho11 + rho22
    double top_fock = 0.0;
    double fidelity() const { return std::abs(rho11 - rho22); }
};

SpinReadout spin_readout(const Matrix& rho, const HilbertSpace& space);

/// Long-time state under the CW cavity drive, starting from mixed_spin. The
/// laser frequency is drive.omega_l; only the cavity channel is driven.
SpinReadout initialization_steady_state(const SystemParams& params, const DriveConfig& drive,
                                        InitialState init = InitialState::mixed_spin);

/// |rho11 - rho22| over (delta_b, delta_l), with omega_b = omega_o + delta_b and
/// omega_l = omega_o + delta_l. Readouts: fidelity, rho11, rho22, top_fock.
SweepResult run_initialization_map(const SystemParams& params, const DriveConfig& drive,
                                   const std::vector<double>& delta_b_grid,
                                   const std::vector<double>& delta_l_grid, std::size_t threads = 1,
                                   InitialState init = InitialState::mixed_spin);

struct InitializationTrace {
    double delta_c2 = 0.0;
    std::vector<double> times;
    std::vector<double> fidelity;
    double plateau = 0.0;     // long-time |rho11 - rho22|
    double t90 = 0.0;         // first time reaching 90% of the plateau (NaN if never)
    double rise_10_90 = 0.0;  // t90 - t10
};

/// Time-domain pumping from mixed_spin with the laser on omega_14 and mode b at
/// omega_24 + delta_c2 for each entry of `delta_c2_list`.
std::vector<InitializationTrace> run_initialization_dynamics(const SystemParams& params, const DriveConfig& drive,
                                                             const std::vector<double>& delta_c2_list,
                                                             const std::vector<double>& times,
                                                             std::size_t threads = 1,
                                                             InitialState init = InitialState::mixed_spin);

SweepResult to_sweep(const std::vector<InitializationTrace>& traces);

// ----------------------------------------------------------- manipulation --

enum class Driving { qd_direct, cavity };

const char* to_string(Driving d);
Driving driving_from_string(const std::string& s);

struct ManipulationOptions {
    double fock_tolerance = 1e-3;  // BasisTooSmall above this top-level population
    double rtol = 1e-8;
    double atol = 1e-10;
};

/// Readout time: pulse centre + 5 FWHM + 10/kappa + 5/gamma.
double manipulation_readout_time(const SystemParams& params, const PulseEnvelope& pulse);

/// One pulse from spin_up with the laser at omega_o + detuning. `amplitude`
/// sets omega_h = omega_v (qd_direct) or eps_a = eps_b (cavity); polarization,
/// envelope and phase come from `drive`.
SpinReadout manipulation_cell(const SystemParams& params, const DriveConfig& drive, double detuning,
                              double amplitude, Driving driving, const ManipulationOptions& opts = {},
                              InitialState init = InitialState::spin_up);

/// Readouts over (detuning, amplitude): rho11, rho22, diff, purity, block_trace, top_fock.
SweepResult run_manipulation_sweep(const SystemParams& params, const DriveConfig& drive,
                                   const std::vector<double>& detunings, const std::vector<double>& amplitudes,
                                   Driving driving, std::size_t threads = 1, const ManipulationOptions& opts = {},
                                   InitialState init = InitialState::spin_up);

/// Number of complete oscillations of a sampled curve about zero: floor(sign changes / 2).
std::size_t count_full_oscillations(const std::vector<double>& curve);

// ------------------------------------------------------------ field ratio --

/// field_ratio, e_field_cav and e_field_nocav over `delta_grid`; the unity
/// crossing (GHz, or "none") goes to metadata["unity_crossing_ghz"].
SweepResult run_field_ratio_curve(const FieldParams& fp, const std::vector<double>& delta_grid);

// --------------------------------------------------------------- scenarios --

enum class ScenarioKind { pl_map, eigenbranches, init_map, init_dynamics, manipulation, field_ratio };

const char* to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string& s);

/// Axis names each kind expects, in output order.
std::vector<std::string> required_axes(ScenarioKind k);

/// A fully resolved campaign. Axis values are in internal units (rad/ns, ns, T).
struct Scenario {
    std::string name;
    std::string description;
    ScenarioKind kind = ScenarioKind::pl_map;
    SystemParams params;
    DriveConfig drive;
    InitialState initial_state = InitialState::mixed_spin;
    std::vector<Axis> sweep;
    double pump = 0.0;
    Driving driving = Driving::qd_direct;
    FieldParams field;

    const Axis& axis(const std::string& name) const;
    /// Throws InvalidArgument for missing, empty or non-monotone axes and bad parameters.
    void validate() const;
};

std::vector<SweepResult> run_scenario(const Scenario& s, std::size_t threads = 1);

}  // namespace qdspin
