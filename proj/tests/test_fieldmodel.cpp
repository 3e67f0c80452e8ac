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


#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qdspin/errors.hpp"
#include "qdspin/fieldmodel.hpp"
#include "qdspin/model.hpp"

using namespace qdspin;

namespace {

// Plain bisection for field_ratio(delta) = 1 on (0, hi].
double bisect_unity(const FieldParams& fp) {
    double lo = 0.0, hi = fp.delta_omega;
    while (field_ratio(fp, hi) > 1.0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (field_ratio(fp, mid) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("fieldmodel") {

TEST_CASE("defaults resolve the mode volume and quality factor") {
    const auto fp = FieldParams::for_cavity(ghz(20.0));
    CHECK(fp.delta_omega == doctest::Approx(2.0 * ghz(20.0)));
    CHECK(fp.mode_volume() == doctest::Approx(std::pow(930e-9 / 3.46, 3)));
    const double omega0 = 2.0 * std::numbers::pi * kSpeedOfLight / 930e-9;  // rad/s
    CHECK(fp.quality() == doctest::Approx(omega0 / (fp.delta_omega * 1e9)));
}

TEST_CASE("field amplitudes follow the closed forms") {
    auto fp = FieldParams::for_cavity(ghz(20.0));
    const double pi = std::numbers::pi;
    const double enocav = (2.0 / (1.0 + fp.n)) * std::sqrt(fp.power / (fp.c * fp.epsilon * pi * fp.sigma0 * fp.sigma0));
    CHECK(e_field_nocav(fp) == doctest::Approx(enocav));
    const double delta = ghz(13.0);
    const double lor = 1.0 + std::pow(2.0 * delta / fp.delta_omega, 2);
    const double ecav =
        std::sqrt(fp.eta * fp.power * fp.quality() * fp.lambda0 / (2.0 * pi * fp.c * fp.epsilon * fp.mode_volume()) / lor);
    CHECK(e_field_cav(fp, delta) == doctest::Approx(ecav));
    CHECK(field_ratio(fp, delta) == doctest::Approx(ecav / enocav));
}

TEST_CASE("ratio curve is even, peaked at zero detuning and above one there") {
    const auto fp = FieldParams::for_cavity(ghz(20.0));
    const double r0 = field_ratio(fp, 0.0);
    CHECK(r0 > 1.0);
    for (double d : {1.0, 10.0, 100.0, 1000.0, 1e5}) {
        CHECK(field_ratio(fp, d) == doctest::Approx(field_ratio(fp, -d)).epsilon(1e-15));
        CHECK(field_ratio(fp, d) < r0);
    }
}

TEST_CASE("unity crossing agrees with bisection") {
    for (double eta : {0.1, 0.01, 1.0}) {
        auto fp = FieldParams::for_cavity(ghz(20.0));
        fp.eta = eta;
        const auto x = unity_crossing(fp);
        REQUIRE(x.has_value());
        CHECK(std::abs(*x - bisect_unity(fp)) <= 1e-9 * *x);
        CHECK(field_ratio(fp, *x) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("no crossing when the on-resonance ratio is at most one") {
    auto fp = FieldParams::for_cavity(ghz(20.0));
    fp.v_m = 1.0;  // a cubic metre: enhancement is gone
    CHECK(field_ratio(fp, 0.0) < 1.0);
    CHECK_FALSE(unity_crossing(fp).has_value());
}

TEST_CASE("Rabi frequency in rad/ns") {
    CHECK(rabi_frequency(1e-28, 1e4) == doctest::Approx(1e-28 * 1e4 / kHbar * 1e-9));
}

TEST_CASE("validation") {
    auto fp = FieldParams::for_cavity(ghz(20.0));
    fp.eta = 1.5;
    CHECK_THROWS_AS(fp.validate(), InvalidArgument);
    fp = FieldParams::for_cavity(ghz(20.0));
    fp.power = -1.0;
    CHECK_THROWS_AS(fp.validate(), InvalidArgument);
    FieldParams no_width;
    CHECK_THROWS_AS(no_width.validate(), InvalidArgument);
}

}  // TEST_SUITE
