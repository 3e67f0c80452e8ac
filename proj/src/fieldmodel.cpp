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

#include "qdspin/fieldmodel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qdspin/errors.hpp"

namespace qdspin {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string("field.") + name + " must be positive");
}

double lorentzian(const FieldParams& fp, double delta) {
    const double x = 2.0 * delta / fp.delta_omega;
    return 1.0 / (1.0 + x * x);
}

}  // namespace

FieldParams FieldParams::for_cavity(double kappa_rad_per_ns) {
    FieldParams fp;
    fp.delta_omega = 2.0 * kappa_rad_per_ns;
    return fp;
}

double FieldParams::mode_volume() const {
    if (v_m > 0.0) return v_m;
    const double l = lambda0 / n;
    return l * l * l;
}

double FieldParams::quality() const {
    if (q > 0.0) return q;
    // omega0 in rad/s against a linewidth in rad/ns
    return 2.0 * std::numbers::pi * c / lambda0 / (delta_omega * 1e9);
}

void FieldParams::validate() const {
    require_positive(power, "power");
    require_positive(sigma0, "sigma0");
    require_positive(n, "n");
    require_positive(lambda0, "lambda0");
    require_positive(delta_omega, "delta_omega");
    require_positive(c, "c");
    require_positive(epsilon, "epsilon");
    require_positive(mu_h, "mu_h");
    require_positive(mu_v, "mu_v");
    if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("field.eta must lie in (0, 1]");
    if (v_m < 0.0 || !std::isfinite(v_m)) throw InvalidArgument("field.v_m must be positive (or 0 for the default)");
    if (q < 0.0 || !std::isfinite(q)) throw InvalidArgument("field.q must be positive (or 0 for the default)");
}

double e_field_nocav(const FieldParams& fp) {
    fp.validate();
    return 2.0 / (1.0 + fp.n) *
           std::sqrt(fp.power / (fp.c * fp.epsilon * std::numbers::pi * fp.sigma0 * fp.sigma0));
}

double e_field_cav(const FieldParams& fp, double delta) {
    fp.validate();
    return std::sqrt(fp.eta * fp.power * fp.quality() * fp.lambda0 /
                     (2.0 * std::numbers::pi * fp.c * fp.epsilon * fp.mode_volume()) * lorentzian(fp, delta));
}

double field_ratio(const FieldParams& fp, double delta) {
    fp.validate();
    return 0.5 * (1.0 + fp.n) *
           std::sqrt(fp.eta * fp.quality() * fp.lambda0 * fp.sigma0 * fp.sigma0 / (2.0 * fp.mode_volume()) *
                     lorentzian(fp, delta));
}

std::optional<double> unity_crossing(const FieldParams& fp) {
    const double r0 = field_ratio(fp, 0.0);
    if (!(r0 > 1.0)) return std::nullopt;
    return 0.5 * fp.delta_omega * std::sqrt(r0 * r0 - 1.0);
}

double rabi_frequency(double dipole, double field) { return dipole * field / kHbar * 1e-9; }

}  // namespace qdspin
