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

// Hamiltonian and dissipator construction for a charged quantum dot in a
// bimodal cavity.
//
// Units: angular frequencies in rad/ns, times in ns, magnetic field in tesla.
// A value quoted as "f/2pi = x GHz" is stored as ghz(x) = 2*pi*x rad/ns.
//
// QD levels: |1>,|2> are the electron spin ground states (energies -/+ De/2),
// |3>,|4> the trion states (omega_o -/+ Dh/2). Mode a (H) couples 1-4 and
// 2-3, mode b (V) couples 1-3 and 2-4 with an extra factor i.

#pragma once

#include <array>
#include <numbers>
#include <string>
#include <vector>

#include "qdspin/opalg.hpp"

namespace qdspin {

/// 2*pi*f for f in GHz, giving rad/ns.
constexpr double ghz(double f) { return 2.0 * std::numbers::pi * f; }
/// rad/ns back to GHz.
constexpr double to_ghz(double w) { return w / (2.0 * std::numbers::pi); }
constexpr double ps(double t) { return t * 1e-3; }

/// Bohr magneton / h = 13.996245 GHz/T, as rad/ns per tesla.
inline constexpr double kBohrMagneton = ghz(13.996245);

struct SystemParams {
    double g_a = ghz(20.0);
    double g_b = ghz(20.0);
    double kappa_a = ghz(20.0);
    double kappa_b = ghz(20.0);
    double gamma_41 = ghz(1.0);
    double gamma_42 = ghz(1.0);
    double gamma_31 = ghz(1.0);
    double gamma_32 = ghz(1.0);
    double omega_o = 0.0;
    double omega_a = 0.0;
    double omega_b = 0.0;
    double B = 5.0;
    // Chosen so that B = 5 T gives De/2pi = 28 GHz and Dh/2pi = 14 GHz.
    double g_e = 28.0 / (13.996245 * 5.0);
    double g_h = 14.0 / (13.996245 * 5.0);
    double mu_B = kBohrMagneton;
    std::size_t fock_cutoff = 4;

    double delta_e() const { return g_e * mu_B * B; }
    double delta_h() const { return g_h * mu_B * B; }

    /// Bare QD level energies E1..E4 (index 0..3).
    std::array<double, 4> level_energies() const;
    /// omega_ij = E_j - E_i for a ground level i in {1,2} and trion j in {3,4}.
    double transition(int ground, int trion) const;

    HilbertSpace space() const { return HilbertSpace::cavity_qd(fock_cutoff); }

    /// Throws InvalidArgument naming the offending field.
    void validate() const;
};

enum class Polarization { circular, diagonal, linear_H, linear_V };

const char* to_string(Polarization p);
Polarization polarization_from_string(const std::string& s);

struct PulseEnvelope {
    enum class Shape { constant, gaussian };
    Shape shape = Shape::constant;
    double fwhm = 0.0;    // intensity FWHM (ns), gaussian only
    double center = 0.0;  // ns
    double amplitude_scale = 1.0;

    static PulseEnvelope constant() { return {}; }
    static PulseEnvelope gaussian(double fwhm, double center, double scale = 1.0) {
        return {Shape::gaussian, fwhm, center, scale};
    }

    /// Field-amplitude envelope. For a gaussian, its square (the intensity) has FWHM `fwhm`.
    double operator()(double t) const;
    bool is_constant() const { return shape == Shape::constant; }
    void validate() const;
};

struct DriveConfig {
    double omega_l = 0.0;
    double eps_a = 0.0;
    double eps_b = 0.0;
    double omega_h = 0.0;
    double omega_v = 0.0;
    Polarization polarization = Polarization::circular;
    PulseEnvelope envelope{};
    double phase = 0.0;  // common phase (rad) multiplying every drive amplitude


    void validate() const;
};

/// H_o: bare QD levels plus the two cavity modes.
Operator build_h0(const SystemParams& p);

/// H_int = g_a a^dag (s14 + s23) + i g_b b^dag (s24 + s13) + h.c.
Operator build_hint(const SystemParams& p);

/// a^dag a + b^dag b + s33 + s44; commutes with H_o and H_int.
Operator excitation_number(const HilbertSpace& space);

/// Rotating-frame cavity drive (envelope not applied).
///   circular:  E_a (a + a^dag) + E_b (i b - i b^dag)
///   diagonal:  E_a (a + a^dag) + E_b (b + b^dag)
///   linear_H / linear_V: only the a / b term.
/// `phase` multiplies the annihilating half by exp(i phase).
Operator build_hdrive_cav(const DriveConfig& d, const HilbertSpace& space);

/// Rotating-frame QD drive (envelope not applied).
///   circular:  W_h (s13 + s24) + W_v (s23 + s14) + h.c.
///   diagonal:  W_h (s13 + s24) + i W_v (s23 + s14) + h.c.
///   linear_H / linear_V: only the W_h / W_v term.
Operator build_hdrive_qd(const DriveConfig& d, const HilbertSpace& space);

/// Frame rotating at omega_l for the photons and trion levels: H - omega_l N.
/// Valid for any H commuting with N (H_o, H_int and sums thereof).
Operator rotating_frame(const Operator& h_lab, double omega_l);

/// sqrt(k_a) a, sqrt(k_b) b, then the trion decays 4->1, 4->2, 3->1, 3->2 with rates
/// g41, g42, g31, g32 (lowering operators |1><4|, |2><4|, |1><3|, |2><3|).
std::vector<Operator> collapse_operators(const SystemParams& p);

/// sqrt(P) a^dag, sqrt(P) b^dag.
std::vector<Operator> pump_operators(double pump_rate, const HilbertSpace& space);

/// Rotating-frame Hamiltonian split into a static part and one drive operator
/// that is multiplied by drive.envelope(t).
struct RotatingHamiltonian {
    Operator static_part;
    Operator drive_part;
    PulseEnvelope envelope;
};

struct DriveChannels {
    bool cavity = true;
    bool qd = true;
};

RotatingHamiltonian build_rotating_hamiltonian(const SystemParams& p, const DriveConfig& d,
                                               DriveChannels channels = {});

}  // namespace qdspin
