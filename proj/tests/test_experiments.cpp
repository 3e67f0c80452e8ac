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

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdspin/errors.hpp"
#include "qdspin/experiments.hpp"

using namespace qdspin;

namespace {

SystemParams small_params(std::size_t cutoff) {
    SystemParams p;
    p.fock_cutoff = cutoff;
    return p;
}

DriveConfig cw_drive_h(double eps_a) {
    DriveConfig d;
    d.polarization = Polarization::linear_H;
    d.eps_a = eps_a;
    return d;
}

DriveConfig pulse_drive() {
    DriveConfig d;
    d.polarization = Polarization::circular;
    d.envelope = PulseEnvelope::gaussian(ps(5.0), ps(15.0));
    return d;
}

Scenario base_scenario(ScenarioKind kind) {
    Scenario s;
    s.name = "t";
    s.kind = kind;
    return s;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("parallel_for visits every index exactly once for any thread count") {
    for (std::size_t threads : {1u, 2u, 4u, 16u}) {
        std::vector<std::atomic<int>> hits(37);
        parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i].fetch_add(1); });
        for (const auto& h : hits) CHECK(h.load() == 1);
    }
    parallel_for(0, 4, [](std::size_t) { FAIL("body called for an empty range"); });
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
    for (std::size_t threads : {1u, 3u}) {
        try {
            parallel_for(20, threads, [](std::size_t i) {
                if (i == 5 || i == 11) throw std::runtime_error("cell " + std::to_string(i));
            });
            FAIL("no exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "cell 5");
        }
    }
}

TEST_CASE("initial states") {
    const HilbertSpace space = HilbertSpace::cavity_qd(3);
    const auto mixed = make_initial_state(InitialState::mixed_spin, space);
    const auto up = make_initial_state(InitialState::spin_up, space);
    const auto rm = spin_readout(mixed.matrix(), space);
    CHECK(rm.rho11 == doctest::Approx(0.5));
    CHECK(rm.rho22 == doctest::Approx(0.5));
    CHECK(rm.purity == doctest::Approx(0.5));
    CHECK(rm.fidelity() == doctest::Approx(0.0));
    const auto ru = spin_readout(up.matrix(), space);
    CHECK(ru.rho11 == doctest::Approx(1.0));
    CHECK(ru.purity == doctest::Approx(1.0));
    CHECK(ru.block_trace == doctest::Approx(1.0));
    CHECK(ru.top_fock == doctest::Approx(0.0));

    CHECK_THROWS_AS(make_initial_state(InitialState::custom, space), InvalidArgument);
    const Matrix custom = up.matrix();
    CHECK(make_initial_state(InitialState::custom, space, &custom).matrix().isApprox(custom));
    CHECK_THROWS_AS(make_initial_state(InitialState::spin_up, HilbertSpace{3}), InvalidDimension);
    CHECK(initial_state_from_string(to_string(InitialState::spin_up)) == InitialState::spin_up);
    CHECK_THROWS_AS(initial_state_from_string("up"), InvalidArgument);
}

TEST_CASE("SweepResult indexing is row-major with the first axis slowest") {
    SweepResult r;
    r.axes = {{"x", {1, 2, 3}}, {"y", {1, 2}}};
    CHECK(r.cells() == 6);
    CHECK(r.shape() == std::vector<std::size_t>{3, 2});
    CHECK(r.flat({2, 1}) == 5);
    CHECK(r.flat({1, 0}) == 2);
    CHECK_THROWS(r.flat({3, 0}));
    r.values["v"] = std::vector<double>(6, 0.0);
    CHECK_NOTHROW(r.check_shape());
    r.values["w"] = std::vector<double>(5, 0.0);
    CHECK_THROWS_AS(r.check_shape(), InvalidArgument);
}

TEST_CASE("no drive leaves the mixed spin unpolarized") {
    const auto r = run_initialization_map(small_params(2), cw_drive_h(0.0), {ghz(-20.0), ghz(10.0)},
                                          {ghz(-30.0), ghz(0.0), ghz(21.0)});
    REQUIRE(r.values.at("fidelity").size() == 6);
    for (double f : r.values.at("fidelity")) CHECK(f == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("initialization map is symmetric under reflecting both detunings") {
    // Reflecting every detuning exchanges the two spin states.
    const SystemParams p = small_params(3);
    const DriveConfig d = cw_drive_h(ghz(2.0));
    const auto r = run_initialization_map(p, d, {ghz(-27.0), ghz(27.0)}, {ghz(-40.5), ghz(40.5)}, 2);
    const auto& r11 = r.values.at("rho11");
    const auto& r22 = r.values.at("rho22");
    CHECK(r11[r.flat({0, 1})] == doctest::Approx(r22[r.flat({1, 0})]).epsilon(1e-7));
    CHECK(r22[r.flat({0, 1})] == doctest::Approx(r11[r.flat({1, 0})]).epsilon(1e-7));
    CHECK(r11[r.flat({0, 0})] == doctest::Approx(r22[r.flat({1, 1})]).epsilon(1e-7));
    CHECK(r.values.at("fidelity")[r.flat({0, 1})] > 0.5);
    CHECK(r.metadata.count("argmax_delta_b_ghz") == 1);
}

TEST_CASE("thread count does not change sweep results") {
    const SystemParams p = small_params(2);
    const DriveConfig d = cw_drive_h(ghz(0.5));
    const std::vector<double> b = {ghz(-20.0), ghz(0.0), ghz(20.0)};
    const auto one = run_initialization_map(p, d, b, b, 1);
    const auto three = run_initialization_map(p, d, b, b, 3);
    CHECK(one.values == three.values);
}

TEST_CASE("initialization traces start unpolarized and approach the plateau") {
    const SystemParams p = small_params(2);
    std::vector<double> times;
    for (int i = 0; i <= 40; ++i) times.push_back(ps(250.0) * i);
    const auto traces = run_initialization_dynamics(p, cw_drive_h(ghz(6.0)), {0.0, ghz(20.0)}, times);
    REQUIRE(traces.size() == 2);
    for (const auto& t : traces) {
        CHECK(t.fidelity.front() == doctest::Approx(0.0));
        CHECK(t.plateau > 0.1);
        CHECK(t.fidelity.back() <= t.plateau * 1.001);
        CHECK(t.t90 > 0.0);
        CHECK(t.rise_10_90 > 0.0);
        CHECK(t.rise_10_90 <= t.t90);
    }
    const auto sweep = to_sweep(traces);
    CHECK(sweep.shape() == std::vector<std::size_t>{2, times.size()});
    CHECK_NOTHROW(sweep.check_shape());
    CHECK_THROWS_AS(run_initialization_dynamics(p, pulse_drive(), {0.0}, times), InvalidArgument);
}

TEST_CASE("manipulation without a pulse keeps the spin up") {
    const SystemParams p = small_params(2);
    for (Driving drv : {Driving::qd_direct, Driving::cavity}) {
        const auto r = manipulation_cell(p, pulse_drive(), ghz(100.0), 0.0, drv);
        CHECK(r.rho11 - r.rho22 == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.purity == doctest::Approx(1.0).epsilon(1e-9));
    }
    DriveConfig cw = pulse_drive();
    cw.envelope = PulseEnvelope::constant();
    CHECK_THROWS_AS(manipulation_cell(p, cw, 0.0, 0.0, Driving::qd_direct), InvalidArgument);
    CHECK_THROWS_AS(manipulation_cell(p, pulse_drive(), 0.0, -1.0, Driving::qd_direct), InvalidArgument);
}

TEST_CASE("a common drive phase does not change the readout") {
    const SystemParams p = small_params(3);
    DriveConfig d = pulse_drive();
    const auto r0 = manipulation_cell(p, d, ghz(100.0), ghz(40.0), Driving::qd_direct);
    d.phase = 1.1;
    const auto r1 = manipulation_cell(p, d, ghz(100.0), ghz(40.0), Driving::qd_direct);
    CHECK(r1.rho11 == doctest::Approx(r0.rho11).epsilon(1e-6));
    CHECK(r1.rho22 == doctest::Approx(r0.rho22).epsilon(1e-6));
    CHECK(r1.purity == doctest::Approx(r0.purity).epsilon(1e-6));
    CHECK(r0.rho11 - r0.rho22 < 0.999);
}

TEST_CASE("readout time adds the pulse tail and the decay times") {
    SystemParams p;
    const auto env = PulseEnvelope::gaussian(ps(5.0), ps(15.0));
    CHECK(manipulation_readout_time(p, env) ==
          doctest::Approx(ps(15.0) + 5.0 * ps(5.0) + 10.0 / ghz(20.0) + 5.0 / ghz(1.0)));
    p.kappa_a = p.kappa_b = 0.0;
    CHECK(manipulation_readout_time(p, env) == doctest::Approx(ps(40.0) + 5.0 / ghz(1.0)));
}

TEST_CASE("a truncated basis fails with the cell coordinates") {
    const SystemParams p = small_params(2);
    try {
        run_manipulation_sweep(p, pulse_drive(), {ghz(20.0)}, {0.0, ghz(60.0)}, Driving::cavity);
        FAIL("no exception");
    } catch (const SweepCellFailure& e) {
        CHECK(e.cell == 1);
        CHECK(e.coordinates.find("amplitude=60 GHz") != std::string::npos);
        CHECK(std::string(e.what()).find("fock_cutoff") != std::string::npos);
    }
}

TEST_CASE("full oscillations count sign-change pairs") {
    CHECK(count_full_oscillations({}) == 0);
    CHECK(count_full_oscillations({1.0, 0.5, 0.2}) == 0);
    CHECK(count_full_oscillations({1.0, -1.0}) == 0);
    CHECK(count_full_oscillations({1.0, -1.0, 1.0}) == 1);
    CHECK(count_full_oscillations({1.0, 0.0, -1.0, 0.0, 1.0, -0.5, 0.3}) == 2);
    std::vector<double> c;
    for (int i = 0; i <= 400; ++i) c.push_back(std::cos(0.05 * i));
    CHECK(count_full_oscillations(c) == 3);
}

TEST_CASE("field ratio curve carries its crossing") {
    const auto fp = FieldParams::for_cavity(ghz(20.0));
    const auto r = run_field_ratio_curve(fp, {ghz(-100.0), 0.0, ghz(100.0)});
    CHECK(r.values.at("ratio")[0] == doctest::Approx(r.values.at("ratio")[2]));
    CHECK(r.values.at("ratio")[1] > r.values.at("ratio")[0]);
    CHECK(r.metadata.at("unity_crossing_ghz") != "none");
}

TEST_CASE("scenario validation") {
    Scenario s = base_scenario(ScenarioKind::field_ratio);
    s.field = FieldParams::for_cavity(ghz(20.0));
    CHECK_THROWS_AS(s.validate(), InvalidArgument);  // no delta axis
    s.sweep = {{"delta", {}}};
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s.sweep = {{"delta", {0.0, 2.0, 1.0}}};
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s.sweep = {{"delta", {2.0, 1.0, 0.0}}};
    CHECK_NOTHROW(s.validate());
    s.sweep.push_back({"B", {1.0}});
    CHECK_THROWS_AS(s.validate(), InvalidArgument);

    Scenario m = base_scenario(ScenarioKind::manipulation);
    m.sweep = {{"detuning", {ghz(20.0)}}, {"amplitude", {0.0, 1.0}}};
    CHECK_THROWS_AS(m.validate(), InvalidArgument);  // constant envelope
    m.drive = pulse_drive();
    CHECK_NOTHROW(m.validate());
    m.sweep[1].values = {-1.0, 1.0};
    CHECK_THROWS_AS(m.validate(), InvalidArgument);

    Scenario pl = base_scenario(ScenarioKind::pl_map);
    pl.sweep = {{"B", {0.0}}, {"delta", {0.0}}};
    CHECK_THROWS_AS(pl.validate(), InvalidArgument);  // no pump
    pl.pump = ghz(0.1);
    CHECK_NOTHROW(pl.validate());
    pl.params.kappa_a = -1.0;
    CHECK_THROWS_AS(pl.validate(), InvalidArgument);

    Scenario dyn = base_scenario(ScenarioKind::init_dynamics);
    dyn.sweep = {{"delta_c2", {0.0}}, {"time", {ps(1.0), ps(2.0)}}};
    CHECK_THROWS_AS(dyn.validate(), InvalidArgument);
}

TEST_CASE("eigenbranch scenarios produce a bare and a dressed result") {
    Scenario s = base_scenario(ScenarioKind::eigenbranches);
    s.sweep = {{"B", {0.0, 2.5, 5.0}}};
    const auto out = run_scenario(s);
    REQUIRE(out.size() == 2);
    CHECK(out[0].name == "branches_bare");
    CHECK(out[1].name == "branches_cavity");
    for (const auto& r : out) CHECK_NOTHROW(r.check_shape());
    CHECK(out[0].values.size() == 4);
    CHECK(out[1].values.size() == 6);
}

TEST_CASE("enum names round trip") {
    for (auto k : {ScenarioKind::pl_map, ScenarioKind::eigenbranches, ScenarioKind::init_map,
                   ScenarioKind::init_dynamics, ScenarioKind::manipulation, ScenarioKind::field_ratio})
        CHECK(scenario_kind_from_string(to_string(k)) == k);
    for (auto d : {Driving::qd_direct, Driving::cavity}) CHECK(driving_from_string(to_string(d)) == d);
    CHECK_THROWS_AS(scenario_kind_from_string("plmap"), InvalidArgument);
    CHECK_THROWS_AS(driving_from_string("laser"), InvalidArgument);
}

}  // TEST_SUITE
