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

// Classical estimate of the laser field reaching the dot directly versus the
// field built up inside the cavity. SI units, except that the cavity linewidth
// and laser detunings are angular frequencies in rad/ns like the rest of the
// library.

#pragma once

#include <optional>

namespace qdspin {

inline constexpr double kSpeedOfLight = 299792458.0;       // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kHbar = 1.054571817e-34;           // J s

struct FieldParams {
    double power = 1e-9;          // W
    double sigma0 = 1e-6;         // beam radius, m
    double n = 3.46;
    double lambda0 = 930e-9;      // m
    double eta = 0.1;
    double v_m = 0.0;             // m^3; 0 selects (lambda0 / n)^3
    double delta_omega = 0.0;     // cavity linewidth, rad/ns
    double q = 0.0;               // 0 selects omega0 / delta_omega
    double c = kSpeedOfLight;
    double epsilon = kVacuumPermittivity;
    double mu_h = 1e-28;          // dipole moments, C m
    double mu_v = 1e-28;

    /// Linewidth 2 kappa for a field decay rate kappa (rad/ns), with the defaults above.
    static FieldParams for_cavity(double kappa_rad_per_ns);

    double mode_volume() const;
    double quality() const;
    /// Throws InvalidArgument naming the offending field.
    void validate() const;
};

/// (2 / (1 + n)) sqrt(P / (c eps pi sigma0^2)), V/m
double e_field_nocav(const FieldParams& fp);

/// sqrt(eta P Q lambda0 / (2 pi c eps V_m) / (1 + (2 delta / delta_omega)^2)), V/m
double e_field_cav(const FieldParams& fp, double delta);

/// ((1 + n) / 2) sqrt(eta Q lambda0 sigma0^2 / (2 V_m) / (1 + (2 delta / delta_omega)^2))
double field_ratio(const FieldParams& fp, double delta);

/// Positive detuning where field_ratio = 1, or nullopt when the on-resonance ratio is <= 1.
std::optional<double> unity_crossing(const FieldParams& fp);

/// mu E / hbar in rad/ns.
double rabi_frequency(double dipole, double field);

}  // namespace qdspin
