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

#include "qdspin/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <thread>

#include "qdspin/errors.hpp"
#include "qdspin/format.hpp"

namespace qdspin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string ghz_label(const std::string& name, double w) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", to_ghz(w));
    return name + "=" + buf + " GHz";
}

template <class Fn>
void run_cells(std::size_t count, std::size_t threads, Fn&& cell, const std::function<std::string(std::size_t)>& where) {
    parallel_for(count, threads, [&](std::size_t i) {
        try {
            cell(i);
        } catch (const std::exception& e) {
            throw SweepCellFailure(i, where(i), e.what());
        }
    });
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    v.back() = b;
    return v;
}

double positive_min(std::initializer_list<double> xs) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : xs)
        if (x > 0.0) m = std::min(m, x);
    return m;
}

double crossing_time(const std::vector<double>& t, const std::vector<double>& f, double level) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] >= level) {
            if (i == 0) return t[0];
            const double s = (level - f[i - 1]) / (f[i] - f[i - 1]);
            return t[i - 1] + s * (t[i] - t[i - 1]);
        }
    }
    return kNaN;
}

}  // namespace

// ------------------------------------------------------------------ basics --

const char* to_string(InitialState s) {
    switch (s) {
        case InitialState::mixed_spin: return "mixed_spin";
        case InitialState::spin_up: return "spin_up";
        case InitialState::custom: return "custom";
    }
    return "?";
}

InitialState initial_state_from_string(const std::string& s) {
    if (s == "mixed_spin") return InitialState::mixed_spin;
    if (s == "spin_up") return InitialState::spin_up;
    if (s == "custom") return InitialState::custom;
    throw InvalidArgument("unknown initial state '" + s + "' (expected mixed_spin, spin_up or custom)");
}

DensityMatrix make_initial_state(InitialState s, const HilbertSpace& space, const Matrix* custom_rho) {
    if (!space.is_cavity_qd()) throw InvalidDimension("initial states are defined on (N, N, 4) spaces");
    const auto d = static_cast<Eigen::Index>(space.total());
    Matrix rho = Matrix::Zero(d, d);
    // vacuum in both modes: QD level k sits at flat index k
    switch (s) {
        case InitialState::mixed_spin:
            rho(0, 0) = 0.5;
            rho(1, 1) = 0.5;
            break;
        case InitialState::spin_up:
            rho(0, 0) = 1.0;
            break;
        case InitialState::custom:
            if (custom_rho == nullptr) throw InvalidArgument("custom initial state needs a density matrix");
            return DensityMatrix(*custom_rho, space);
    }
    return DensityMatrix(std::move(rho), space);
}

std::size_t SweepResult::cells() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values.size();
    return n;
}

std::vector<std::size_t> SweepResult::shape() const {
    std::vector<std::size_t> s;
    for (const auto& a : axes) s.push_back(a.values.size());
    return s;
}

std::size_t SweepResult::flat(const std::vector<std::size_t>& index) const {
    if (index.size() != axes.size()) throw InvalidArgument("index rank does not match the sweep");
    std::size_t f = 0;
    for (std::size_t k = 0; k < axes.size(); ++k) {
        if (index[k] >= axes[k].values.size()) throw InvalidArgument("index out of range on axis " + axes[k].name);
        f = f * axes[k].values.size() + index[k];
    }
    return f;
}

void SweepResult::check_shape() const {
    for (const auto& [field, v] : values)
        if (v.size() != cells())
            throw InvalidArgument("readout '" + field + "' has " + std::to_string(v.size()) + " values for " +
                                  std::to_string(cells()) + " cells");
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    threads = std::clamp<std::size_t>(threads, 1, count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    // Indices are claimed in increasing order, so when claiming stops after a
    // failure every lower index has already run: the lowest failure is fixed.
    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
                failed.store(true);
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

SpinReadout spin_readout(const Matrix& rho, const HilbertSpace& space) {
    SpinReadout r;
    const auto pop = qd_populations(rho, space);
    r.rho11 = pop[0];
    r.rho22 = pop[1];
    r.block_trace = pop[0] + pop[1];
    const Eigen::Matrix2cd blk = spin_block(rho, space);
    r.purity = (blk * blk).trace().real();
    r.top_fock = top_fock_population(rho, space);
    return r;
}

// ---------------------------------------------------------------- spectra --

SweepResult run_pl_map(const SystemParams& params, const std::vector<double>& b_grid, double pump,
                       const std::vector<double>& omega_grid, std::size_t threads) {
    SweepResult out;
    out.name = "spectrum";
    out.axes = {{"B", b_grid}, {"delta", omega_grid}};
    auto& intensity = out.values["intensity"];
    intensity.assign(out.cells(), 0.0);
    std::vector<double> photons(b_grid.size());
    const std::size_t nw = omega_grid.size();
    run_cells(
        b_grid.size(), threads,
        [&](std::size_t i) {
            SystemParams p = params;
            p.B = b_grid[i];
            p.omega_a = p.omega_o;
            p.omega_b = p.omega_o;
            const Spectrum s = emission_spectrum(p, pump, omega_grid, {.diagnostics = false});
            std::copy(s.values.begin(), s.values.end(), intensity.begin() + static_cast<std::ptrdiff_t>(i * nw));
            photons[i] = s.diagnostics.mean_photons;
        },
        [&](std::size_t i) { return "B=" + format_number(b_grid[i]) + " T"; });
    double max_n = 0.0;
    for (double n : photons) max_n = std::max(max_n, n);
    out.metadata["max_mean_photons"] = format_number(max_n);
    return out;
}

// --------------------------------------------------------- initialization --

SpinReadout initialization_steady_state(const SystemParams& params, const DriveConfig& drive, InitialState init) {
    if (!drive.envelope.is_constant()) throw InvalidArgument("initialization uses a CW (constant) drive envelope");
    const HilbertSpace space = params.space();
    const RotatingHamiltonian rh = build_rotating_hamiltonian(params, drive, {.cavity = true, .qd = false});
    const Liouvillian L = build_liouvillian(rh.static_part, collapse_operators(params));
    const DensityMatrix rho = asymptotic_state(L, make_initial_state(init, space));
    return spin_readout(rho.matrix(), space);
}

SweepResult run_initialization_map(const SystemParams& params, const DriveConfig& drive,
                                   const std::vector<double>& delta_b_grid, const std::vector<double>& delta_l_grid,
                                   std::size_t threads, InitialState init) {
    SweepResult out;
    out.name = "fidelity_map";
    out.axes = {{"delta_b", delta_b_grid}, {"delta_l", delta_l_grid}};
    const std::size_t n = out.cells(), nl = delta_l_grid.size();
    std::vector<double> fid(n), r11(n), r22(n), top(n);
    constexpr double kFockTolerance = 1e-3;
    run_cells(
        n, threads,
        [&](std::size_t c) {
            SystemParams p = params;
            p.omega_b = p.omega_o + delta_b_grid[c / nl];
            DriveConfig d = drive;
            d.omega_l = p.omega_o + delta_l_grid[c % nl];
            const SpinReadout r = initialization_steady_state(p, d, init);
            if (r.top_fock > kFockTolerance) throw BasisTooSmall(p.fock_cutoff, r.top_fock);
            fid[c] = r.fidelity();
            r11[c] = r.rho11;
            r22[c] = r.rho22;
            top[c] = r.top_fock;
        },
        [&](std::size_t c) {
            return ghz_label("delta_b", delta_b_grid[c / nl]) + ", " + ghz_label("delta_l", delta_l_grid[c % nl]);
        });
    out.values["fidelity"] = fid;
    out.values["rho11"] = r11;
    out.values["rho22"] = r22;
    out.values["top_fock"] = top;

    const auto best = static_cast<std::size_t>(std::max_element(fid.begin(), fid.end()) - fid.begin());
    out.metadata["argmax_delta_b_ghz"] = format_number(to_ghz(delta_b_grid[best / nl]));
    out.metadata["argmax_delta_l_ghz"] = format_number(to_ghz(delta_l_grid[best % nl]));
    out.metadata["max_fidelity"] = format_number(fid[best]);
    return out;
}

std::vector<InitializationTrace> run_initialization_dynamics(const SystemParams& params, const DriveConfig& drive,
                                                             const std::vector<double>& delta_c2_list,
                                                             const std::vector<double>& times, std::size_t threads,
                                                             InitialState init) {
    if (!drive.envelope.is_constant()) throw InvalidArgument("initialization uses a CW (constant) drive envelope");
    std::vector<InitializationTrace> out(delta_c2_list.size());
    run_cells(
        delta_c2_list.size(), threads,
        [&](std::size_t k) {
            SystemParams p = params;
            p.omega_b = p.transition(2, 4) + delta_c2_list[k];
            DriveConfig d = drive;
            d.omega_l = p.transition(1, 4);
            const HilbertSpace space = p.space();
            const RotatingHamiltonian rh = build_rotating_hamiltonian(p, d, {.cavity = true, .qd = false});
            const Liouvillian L = build_liouvillian(rh.static_part, collapse_operators(p));
            const DensityMatrix rho0 = make_initial_state(init, space);

            EvolveOptions opts;
            const Operator s11 = embed(qd_transition(1, 1), kSlotQd, space);
            const Operator s22 = embed(qd_transition(2, 2), kSlotQd, space);
            opts.observables = {{"rho11", s11}, {"rho22", s22}};
            const Trajectory traj = evolve(rho0, L, times, opts);

            InitializationTrace& tr = out[k];
            tr.delta_c2 = delta_c2_list[k];
            tr.times = times;
            tr.fidelity.resize(times.size());
            const auto& a = traj.observables.at("rho11");
            const auto& b = traj.observables.at("rho22");
            for (std::size_t i = 0; i < times.size(); ++i) tr.fidelity[i] = std::abs(a[i].real() - b[i].real());
            tr.plateau = spin_readout(asymptotic_state(L, rho0).matrix(), space).fidelity();
            const double t10 = crossing_time(times, tr.fidelity, 0.1 * tr.plateau);
            tr.t90 = crossing_time(times, tr.fidelity, 0.9 * tr.plateau);
            tr.rise_10_90 = tr.t90 - t10;
        },
        [&](std::size_t k) { return ghz_label("delta_c2", delta_c2_list[k]); });
    return out;
}

SweepResult to_sweep(const std::vector<InitializationTrace>& traces) {
    SweepResult out;
    out.name = "traces";
    std::vector<double> dc;
    for (const auto& t : traces) dc.push_back(t.delta_c2);
    const std::vector<double> times = traces.empty() ? std::vector<double>{} : traces.front().times;
    out.axes = {{"delta_c2", dc}, {"time", times}};
    auto& f = out.values["fidelity"];
    for (const auto& t : traces) {
        if (t.times != times) throw InvalidArgument("traces use different time grids");
        f.insert(f.end(), t.fidelity.begin(), t.fidelity.end());
    }
    return out;
}

// ----------------------------------------------------------- manipulation --

const char* to_string(Driving d) { return d == Driving::qd_direct ? "qd_direct" : "cavity"; }

Driving driving_from_string(const std::string& s) {
    if (s == "qd_direct") return Driving::qd_direct;
    if (s == "cavity") return Driving::cavity;
    throw InvalidArgument("unknown driving '" + s + "' (expected qd_direct or cavity)");
}

double manipulation_readout_time(const SystemParams& params, const PulseEnvelope& pulse) {
    const double kappa = positive_min({params.kappa_a, params.kappa_b});
    const double gamma = positive_min({params.gamma_41, params.gamma_42, params.gamma_31, params.gamma_32});
    double t = pulse.center + 5.0 * pulse.fwhm;
    if (std::isfinite(kappa)) t += 10.0 / kappa;
    if (std::isfinite(gamma)) t += 5.0 / gamma;
    return t;
}

SpinReadout manipulation_cell(const SystemParams& params, const DriveConfig& drive, double detuning,
                              double amplitude, Driving driving, const ManipulationOptions& opts,
                              InitialState init) {
    if (drive.envelope.is_constant()) throw InvalidArgument("manipulation needs a gaussian pulse envelope");
    if (!(amplitude >= 0.0)) throw InvalidArgument("drive amplitude must be non-negative");
    DriveConfig d = drive;
    d.omega_l = params.omega_o + detuning;
    if (driving == Driving::qd_direct) {
        d.omega_h = d.omega_v = amplitude;
        d.eps_a = d.eps_b = 0.0;
    } else {
        d.eps_a = d.eps_b = amplitude;
        d.omega_h = d.omega_v = 0.0;
    }
    const HilbertSpace space = params.space();
    const auto c_ops = collapse_operators(params);
    const RotatingHamiltonian rh = build_rotating_hamiltonian(
        params, d, {.cavity = driving == Driving::cavity, .qd = driving == Driving::qd_direct});
    const PulseEnvelope env = rh.envelope;
    const TimeDependentLiouvillian pulsed(build_liouvillian(rh.static_part, c_ops),
                                          {DriveTerm{build_liouvillian(rh.drive_part, {}),
                                                     [env](double t) { return env(t); }}});

    const double fwhm = d.envelope.fwhm;
    const double t_pulse = d.envelope.center + 5.0 * fwhm;
    const double t_end = manipulation_readout_time(params, d.envelope);

    Matrix last;
    double top = 0.0;
    EvolveOptions o;
    o.rtol = opts.rtol;
    o.atol = opts.atol;
    o.on_sample = [&](double, const Matrix& rho) {
        const double p = top_fock_population(rho, space);
        top = std::max(top, p);
        if (p > opts.fock_tolerance) throw BasisTooSmall(params.fock_cutoff, p);
        last = rho;
    };

    // Pulse window, sampled finely enough to watch the photon number.
    o.max_step = fwhm / 5.0;
    const auto n1 = static_cast<std::size_t>(std::ceil(t_pulse / (fwhm / 4.0))) + 1;
    evolve(make_initial_state(init, space), pulsed, linspace(0.0, t_pulse, std::max<std::size_t>(n1, 2)), o);

    // The drive is off from here on: continue in the frame rotating at omega_o,
    // where the free evolution is slow. Populations and the spin block are the
    // same in both frames.
    const Operator n_op = excitation_number(space);
    const auto dim = static_cast<Eigen::Index>(space.total());
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double dn = n_op.matrix(i, i).real() - n_op.matrix(j, j).real();
            if (dn != 0.0) last(i, j) *= std::polar(1.0, -detuning * dn * t_pulse);
        }
    const Liouvillian free = build_liouvillian(
        rotating_frame(build_h0(params) + build_hint(params), params.omega_o), c_ops);
    o.max_step = 0.0;
    evolve(DensityMatrix::unchecked(last, space), free, linspace(t_pulse, t_end, 9), o);

    SpinReadout r = spin_readout(last, space);
    r.top_fock = top;
    return r;
}

SweepResult run_manipulation_sweep(const SystemParams& params, const DriveConfig& drive,
                                   const std::vector<double>& detunings, const std::vector<double>& amplitudes,
                                   Driving driving, std::size_t threads, const ManipulationOptions& opts,
                                   InitialState init) {
    SweepResult out;
    out.name = "manipulation";
    out.axes = {{"detuning", detunings}, {"amplitude", amplitudes}};
    const std::size_t n = out.cells(), na = amplitudes.size();
    std::vector<SpinReadout> cells(n);
    run_cells(
        n, threads,
        [&](std::size_t c) {
            cells[c] = manipulation_cell(params, drive, detunings[c / na], amplitudes[c % na], driving, opts, init);
        },
        [&](std::size_t c) {
            return ghz_label("detuning", detunings[c / na]) + ", " + ghz_label("amplitude", amplitudes[c % na]);
        });
    for (const auto& r : cells) {
        out.values["rho11"].push_back(r.rho11);
        out.values["rho22"].push_back(r.rho22);
        out.values["diff"].push_back(r.rho11 - r.rho22);
        out.values["purity"].push_back(r.purity);
        out.values["block_trace"].push_back(r.block_trace);
        out.values["top_fock"].push_back(r.top_fock);
    }
    out.metadata["driving"] = to_string(driving);
    out.metadata["readout_time_ps"] = format_number(manipulation_readout_time(params, drive.envelope) * 1e3);
    return out;
}

std::size_t count_full_oscillations(const std::vector<double>& curve) {
    std::size_t changes = 0;
    int prev = 0;
    for (double v : curve) {
        const int s = (v > 0.0) - (v < 0.0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes / 2;
}

// ------------------------------------------------------------ field ratio --

SweepResult run_field_ratio_curve(const FieldParams& fp, const std::vector<double>& delta_grid) {
    fp.validate();
    SweepResult out;
    out.name = "field_ratio";
    out.axes = {{"delta", delta_grid}};
    const double e0 = e_field_nocav(fp);
    for (double dl : delta_grid) {
        out.values["ratio"].push_back(field_ratio(fp, dl));
        out.values["e_cav"].push_back(e_field_cav(fp, dl));
        out.values["e_nocav"].push_back(e0);
    }
    const auto x = unity_crossing(fp);
    out.metadata["unity_crossing_ghz"] = x ? format_number(to_ghz(*x)) : "none";
    out.metadata["quality_factor"] = format_number(fp.quality());
    out.metadata["mode_volume_m3"] = format_number(fp.mode_volume());
    return out;
}

// --------------------------------------------------------------- scenarios --

const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::pl_map: return "pl_map";
        case ScenarioKind::eigenbranches: return "eigenbranches";
        case ScenarioKind::init_map: return "init_map";
        case ScenarioKind::init_dynamics: return "init_dynamics";
        case ScenarioKind::manipulation: return "manipulation";
        case ScenarioKind::field_ratio: return "field_ratio";
    }
    return "?";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
    for (auto k : {ScenarioKind::pl_map, ScenarioKind::eigenbranches, ScenarioKind::init_map,
                   ScenarioKind::init_dynamics, ScenarioKind::manipulation, ScenarioKind::field_ratio})
        if (s == to_string(k)) return k;
    throw InvalidArgument("unknown scenario kind '" + s + "'");
}

std::vector<std::string> required_axes(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::pl_map: return {"B", "delta"};
        case ScenarioKind::eigenbranches: return {"B"};
        case ScenarioKind::init_map: return {"delta_b", "delta_l"};
        case ScenarioKind::init_dynamics: return {"delta_c2", "time"};
        case ScenarioKind::manipulation: return {"detuning", "amplitude"};
        case ScenarioKind::field_ratio: return {"delta"};
    }
    return {};
}

const Axis& Scenario::axis(const std::string& axis_name) const {
    for (const auto& a : sweep)
        if (a.name == axis_name) return a;
    throw InvalidArgument("scenario '" + name + "' has no sweep axis '" + axis_name + "'");
}

void Scenario::validate() const {
    params.validate();
    drive.validate();
    for (const auto& req : required_axes(kind)) {
        const Axis& a = axis(req);
        if (a.values.empty()) throw InvalidArgument("sweep." + req + ": range is empty");
        for (double v : a.values)
            if (!std::isfinite(v)) throw InvalidArgument("sweep." + req + ": non-finite value");
        bool inc = true, dec = true;
        for (std::size_t i = 1; i < a.values.size(); ++i) {
            inc = inc && a.values[i] > a.values[i - 1];
            dec = dec && a.values[i] < a.values[i - 1];
        }
        if (a.values.size() > 1 && !inc && !dec) throw InvalidArgument("sweep." + req + ": values are not monotone");
    }
    for (const auto& a : sweep) {
        const auto req = required_axes(kind);
        if (std::find(req.begin(), req.end(), a.name) == req.end())
            throw InvalidArgument("sweep." + a.name + ": not an axis of a " + to_string(kind) + " scenario");
    }
    switch (kind) {
        case ScenarioKind::pl_map:
            if (!(pump > 0.0)) throw InvalidArgument("params.pump_ghz must be positive for a PL map");
            if (!(params.kappa_a > 0.0 && params.kappa_b > 0.0))
                throw InvalidArgument("params.kappa_ghz must be positive for a PL map");
            break;
        case ScenarioKind::init_map:
        case ScenarioKind::init_dynamics:
            if (!drive.envelope.is_constant()) throw InvalidArgument("drive.pulse must be constant for initialization");
            if (kind == ScenarioKind::init_dynamics && axis("time").values.front() != 0.0)
                throw InvalidArgument("sweep.time must start at 0");
            break;
        case ScenarioKind::manipulation:
            if (drive.envelope.is_constant()) throw InvalidArgument("drive.pulse must be gaussian for manipulation");
            for (double v : axis("amplitude").values)
                if (v < 0.0) throw InvalidArgument("sweep.amplitude: values must be non-negative");
            break;
        case ScenarioKind::field_ratio:
            field.validate();
            break;
        case ScenarioKind::eigenbranches:
            break;
    }
}

std::vector<SweepResult> run_scenario(const Scenario& s, std::size_t threads) {
    s.validate();
    switch (s.kind) {
        case ScenarioKind::pl_map:
            return {run_pl_map(s.params, s.axis("B").values, s.pump, s.axis("delta").values, threads)};
        case ScenarioKind::eigenbranches: {
            std::vector<SweepResult> out;
            for (bool cav : {false, true}) {
                const EigenBranches eb = single_excitation_eigenvalues(s.params, s.axis("B").values, cav);
                SweepResult r;
                r.name = cav ? "branches_cavity" : "branches_bare";
                r.axes = {{"B", eb.b_grid}};
                for (std::size_t k = 0; k < eb.count(); ++k) r.values[eb.labels[k]] = eb.branches[k];
                out.push_back(std::move(r));
            }
            return out;
        }
        case ScenarioKind::init_map:
            return {run_initialization_map(s.params, s.drive, s.axis("delta_b").values, s.axis("delta_l").values,
                                           threads, s.initial_state)};
        case ScenarioKind::init_dynamics: {
            const auto traces = run_initialization_dynamics(s.params, s.drive, s.axis("delta_c2").values,
                                                            s.axis("time").values, threads, s.initial_state);
            SweepResult summary;
            summary.name = "summary";
            summary.axes = {{"delta_c2", s.axis("delta_c2").values}};
            for (const auto& t : traces) {
                summary.values["plateau"].push_back(t.plateau);
                summary.values["t90"].push_back(t.t90);
                summary.values["rise_10_90"].push_back(t.rise_10_90);
            }
            return {to_sweep(traces), summary};
        }
        case ScenarioKind::manipulation:
            return {run_manipulation_sweep(s.params, s.drive, s.axis("detuning").values, s.axis("amplitude").values,
                                           s.driving, threads, {}, s.initial_state)};
        case ScenarioKind::field_ratio:
            return {run_field_ratio_curve(s.field, s.axis("delta").values)};
    }
    return {};
}

}  // namespace qdspin
