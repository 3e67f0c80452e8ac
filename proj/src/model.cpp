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

#include "qdspin/model.hpp"

#include <cmath>

#include "qdspin/errors.hpp"

namespace qdspin {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Ops {
    HilbertSpace space;
    Operator a, b, ad, bd;
    Operator sigma(int i, int j) const { return embed(qd_transition(i, j), kSlotQd, space); }
};

Ops make_ops(const HilbertSpace& space) {
    if (!space.is_cavity_qd()) throw InvalidDimension("expected a (N, N, 4) cavity-QD space");
    const Operator a1 = fock_annihilation(space.dim(kSlotModeA));
    Ops o{space, embed(a1, kSlotModeA, space), embed(a1, kSlotModeB, space), {}, {}};
    o.ad = o.a.adjoint();
    o.bd = o.b.adjoint();
    return o;
}

void require_nonneg(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw InvalidArgument(std::string(name) + " must be a finite non-negative number");
}

}  // namespace

std::array<double, 4> SystemParams::level_energies() const {
    const double de = delta_e(), dh = delta_h();
    return {-de / 2.0, de / 2.0, omega_o - dh / 2.0, omega_o + dh / 2.0};
}

double SystemParams::transition(int ground, int trion) const {
    if (ground < 1 || ground > 2 || trion < 3 || trion > 4)
        throw InvalidLevel("transition needs ground in {1,2} and trion in {3,4}");
    const auto e = level_energies();
    return e[trion - 1] - e[ground - 1];
}

void SystemParams::validate() const {
    require_nonneg(g_a, "g_a");
    require_nonneg(g_b, "g_b");
    require_nonneg(kappa_a, "kappa_a");
    require_nonneg(kappa_b, "kappa_b");
    require_nonneg(gamma_41, "gamma_41");
    require_nonneg(gamma_42, "gamma_42");
    require_nonneg(gamma_31, "gamma_31");
    require_nonneg(gamma_32, "gamma_32");
    require_nonneg(mu_B, "mu_B");
    if (!std::isfinite(omega_o) || !std::isfinite(omega_a) || !std::isfinite(omega_b) ||
        !std::isfinite(B) || !std::isfinite(g_e) || !std::isfinite(g_h))
        throw InvalidArgument("frequencies, field and g-factors must be finite");
    if (fock_cutoff < 1) throw InvalidArgument("fock_cutoff must be >= 1");
}

const char* to_string(Polarization p) {
    switch (p) {
        case Polarization::circular: return "circular";
        case Polarization::diagonal: return "diagonal";
        case Polarization::linear_H: return "linear_H";
        case Polarization::linear_V: return "linear_V";
    }
    return "?";
}

Polarization polarization_from_string(const std::string& s) {
    if (s == "circular") return Polarization::circular;
    if (s == "diagonal") return Polarization::diagonal;
    if (s == "linear_H") return Polarization::linear_H;
    if (s == "linear_V") return Polarization::linear_V;
    throw InvalidArgument("unknown polarization '" + s + "'");
}

double PulseEnvelope::operator()(double t) const {
    if (shape == Shape::constant) return amplitude_scale;
    const double x = (t - center) / fwhm;
    return amplitude_scale * std::exp(-2.0 * std::numbers::ln2 * x * x);
}

void PulseEnvelope::validate() const {
    if (shape == Shape::gaussian && !(fwhm > 0.0))
        throw InvalidArgument("gaussian envelope needs fwhm > 0");
    if (!std::isfinite(amplitude_scale) || !std::isfinite(center))
        throw InvalidArgument("envelope parameters must be finite");
}

void DriveConfig::validate() const {
    require_nonneg(eps_a, "eps_a");
    require_nonneg(eps_b, "eps_b");
    require_nonneg(omega_h, "omega_h");
    require_nonneg(omega_v, "omega_v");
    if (!std::isfinite(omega_l)) throw InvalidArgument("omega_l must be finite");
    if (!std::isfinite(phase)) throw InvalidArgument("phase must be finite");
    envelope.validate();
}

Operator build_h0(const SystemParams& p) {
    p.validate();
    const Ops o = make_ops(p.space());
    const auto e = p.level_energies();
    Operator h = p.omega_a * (o.ad * o.a) + p.omega_b * (o.bd * o.b);
    for (int k = 1; k <= 4; ++k) h += e[k - 1] * o.sigma(k, k);
    return h;
}

Operator build_hint(const SystemParams& p) {
    p.validate();
    const Ops o = make_ops(p.space());
    const Operator half = p.g_a * (o.ad * (o.sigma(1, 4) + o.sigma(2, 3))) +
                          (kI * p.g_b) * (o.bd * (o.sigma(2, 4) + o.sigma(1, 3)));
    return half + half.adjoint();
}

Operator excitation_number(const HilbertSpace& space) {
    const Ops o = make_ops(space);
    return o.ad * o.a + o.bd * o.b + o.sigma(3, 3) + o.sigma(4, 4);
}

Operator build_hdrive_cav(const DriveConfig& d, const HilbertSpace& space) {
    d.validate();
    const Ops o = make_ops(space);
    const bool use_a = d.polarization != Polarization::linear_V;
    const bool use_b = d.polarization != Polarization::linear_H;
    const cplx phase_b = d.polarization == Polarization::circular ? kI : cplx(1.0, 0.0);
    Operator half = Operator::zero(space);
    if (use_a) half += d.eps_a * o.a;
    if (use_b) half += (phase_b * d.eps_b) * o.b;
    half *= std::polar(1.0, d.phase);
    return half + half.adjoint();
}

Operator build_hdrive_qd(const DriveConfig& d, const HilbertSpace& space) {
    d.validate();
    const Ops o = make_ops(space);
    const bool use_h = d.polarization != Polarization::linear_V;
    const bool use_v = d.polarization != Polarization::linear_H;
    const cplx phase_v = d.polarization == Polarization::diagonal ? kI : cplx(1.0, 0.0);
    Operator half = Operator::zero(space);
    if (use_h) half += d.omega_h * (o.sigma(1, 3) + o.sigma(2, 4));
    if (use_v) half += (phase_v * d.omega_v) * (o.sigma(2, 3) + o.sigma(1, 4));
    half *= std::polar(1.0, d.phase);
    return half + half.adjoint();
}

Operator rotating_frame(const Operator& h_lab, double omega_l) {
    if (!std::isfinite(omega_l)) throw InvalidArgument("omega_l must be finite");
    return h_lab - omega_l * excitation_number(h_lab.space);
}

std::vector<Operator> collapse_operators(const SystemParams& p) {
    p.validate();
    const Ops o = make_ops(p.space());
    return {
        std::sqrt(p.kappa_a) * o.a,
        std::sqrt(p.kappa_b) * o.b,
        // gamma_41 drives the decay |4> -> |1>, i.e. the lowering operator |1><4|.
        std::sqrt(p.gamma_41) * o.sigma(1, 4),
        std::sqrt(p.gamma_42) * o.sigma(2, 4),
        std::sqrt(p.gamma_31) * o.sigma(1, 3),
        std::sqrt(p.gamma_32) * o.sigma(2, 3),
    };
}

std::vector<Operator> pump_operators(double pump_rate, const HilbertSpace& space) {
    require_nonneg(pump_rate, "pump rate P");
    const Ops o = make_ops(space);
    const double s = std::sqrt(pump_rate);
    return {s * o.ad, s * o.bd};
}

RotatingHamiltonian build_rotating_hamiltonian(const SystemParams& p, const DriveConfig& d,
                                               DriveChannels channels) {
    d.validate();
    const HilbertSpace space = p.space();
    Operator stat = rotating_frame(build_h0(p) + build_hint(p), d.omega_l);
    Operator drive = Operator::zero(space);
    if (channels.cavity) drive += build_hdrive_cav(d, space);
    if (channels.qd) drive += build_hdrive_qd(d, space);
    if (d.envelope.is_constant()) {
        stat += d.envelope(0.0) * drive;
        drive = Operator::zero(space);
    }
    // Exact Hermitian symmetrization removes round-off asymmetry from the products above.
    stat.matrix = 0.5 * (stat.matrix + stat.matrix.adjoint()).eval();
    drive.matrix = 0.5 * (drive.matrix + drive.matrix.adjoint()).eval();
    return {std::move(stat), std::move(drive), d.envelope};
}

}  // namespace qdspin
