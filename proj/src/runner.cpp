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

#include "qdspin/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "qdspin/errors.hpp"
#include "qdspin/format.hpp"
#include "qdspin/kernels.hpp"

#ifndef QDSPIN_VERSION
#define QDSPIN_VERSION "unknown"
#endif

namespace qdspin {

namespace {

using json = nlohmann::ordered_json;

// Column label and the divisor taking the internal value to output units.
struct Column {
    std::string label;
    double divisor;
};

Column readout_column(const SweepResult& r, const std::string& readout) {
    if (r.name == "branches_bare" || r.name == "branches_cavity") return {readout + "_ghz", ghz(1.0)};
    if (r.name == "summary" && (readout == "t90" || readout == "rise_10_90")) return {readout + "_ps", ps(1.0)};
    if (readout == "e_cav" || readout == "e_nocav") return {readout + "_v_per_m", 1.0};
    return {readout, 1.0};
}

json toml_to_json(const toml::node& n) {
    if (const auto* t = n.as_table()) {
        json j = json::object();
        for (const auto& [k, v] : *t) j[std::string(k.str())] = toml_to_json(v);
        return j;
    }
    if (const auto* a = n.as_array()) {
        json j = json::array();
        for (const auto& v : *a) j.push_back(toml_to_json(v));
        return j;
    }
    if (auto v = n.value_exact<std::int64_t>()) return *v;
    if (auto v = n.value_exact<double>()) return *v;
    if (auto v = n.value_exact<bool>()) return *v;
    if (auto v = n.value_exact<std::string>()) return *v;
    return nullptr;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
    if (!out) throw std::runtime_error("error writing " + p.string());
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_number_float()) {
        out.emplace_back(prefix, format_number(j.get<double>()));
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else {
        out.emplace_back(prefix, j.dump());
    }
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e)) return kExitConfig;
    return kExitSolver;
}

std::size_t default_threads() {
    if (const char* env = std::getenv("QDSPIN_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

LoadedScenario resolve_scenario(const std::string& spec, const std::vector<std::string>& overrides) {
    if (std::filesystem::exists(spec)) return load_scenario_file(spec, overrides);
    if (const BuiltinScenario* b = find_builtin(spec)) return parse_scenario(b->text, "builtin:" + b->name, overrides);
    throw ConfigError(spec, 0, "", "no such file or built-in scenario (see `qdspin list`)");
}

json resolved_parameters(const Scenario& s) {
    const auto f = [](double w) { return to_ghz(w); };
    json j;
    j["name"] = s.name;
    j["kind"] = to_string(s.kind);
    if (s.kind == ScenarioKind::field_ratio) {
        const FieldParams& fp = s.field;
        j["field"] = {{"power_w", fp.power},        {"sigma0_m", fp.sigma0},   {"n", fp.n},
                      {"lambda0_m", fp.lambda0},    {"eta", fp.eta},           {"v_m_m3", fp.mode_volume()},
                      {"kappa_ghz", f(fp.delta_omega) / 2.0}, {"q", fp.quality()},
                      {"c_m_per_s", fp.c},          {"epsilon_f_per_m", fp.epsilon},
                      {"mu_h_cm", fp.mu_h},         {"mu_v_cm", fp.mu_v}};
    } else {
        const SystemParams& p = s.params;
        j["initial_state"] = to_string(s.initial_state);
        j["params"] = {{"g_a_ghz", f(p.g_a)},
                       {"g_b_ghz", f(p.g_b)},
                       {"kappa_a_ghz", f(p.kappa_a)},
                       {"kappa_b_ghz", f(p.kappa_b)},
                       {"gamma_41_ghz", f(p.gamma_41)},
                       {"gamma_42_ghz", f(p.gamma_42)},
                       {"gamma_31_ghz", f(p.gamma_31)},
                       {"gamma_32_ghz", f(p.gamma_32)},
                       {"omega_o_ghz", f(p.omega_o)},
                       {"omega_a_ghz", f(p.omega_a)},
                       {"omega_b_ghz", f(p.omega_b)},
                       {"B_tesla", p.B},
                       {"g_e", p.g_e},
                       {"g_h", p.g_h},
                       {"mu_B_ghz_per_tesla", f(p.mu_B)},
                       {"fock_cutoff", p.fock_cutoff},
                       {"pump_ghz", f(s.pump)}};
        const DriveConfig& d = s.drive;
        j["drive"] = {{"omega_l_ghz", f(d.omega_l)},
                      {"eps_a_ghz", f(d.eps_a)},
                      {"eps_b_ghz", f(d.eps_b)},
                      {"omega_h_ghz", f(d.omega_h)},
                      {"omega_v_ghz", f(d.omega_v)},
                      {"polarization", to_string(d.polarization)},
                      {"phase_rad", d.phase},
                      {"pulse",
                       {{"shape", d.envelope.is_constant() ? "constant" : "gaussian"},
                        {"fwhm_ps", d.envelope.fwhm * 1e3},
                        {"center_ps", d.envelope.center * 1e3},
                        {"amplitude_scale", d.envelope.amplitude_scale}}}};
        if (s.kind == ScenarioKind::manipulation) j["driving"] = to_string(s.driving);
    }
    json sweep = json::object();
    for (const auto& a : s.sweep) {
        const AxisUnit u = axis_unit(a.name);
        sweep[u.key] = {{"num", a.values.size()},
                        {"first", a.values.front() / u.factor},
                        {"last", a.values.back() / u.factor}};
    }
    j["sweep"] = sweep;
    return j;
}

std::string result_csv(const SweepResult& r, const Scenario& s) {
    r.check_shape();
    std::ostringstream os;
    os << "# qdspin " << QDSPIN_VERSION << "\n";
    os << "# result = " << r.name << "\n";
    std::vector<std::pair<std::string, std::string>> lines;
    flatten(resolved_parameters(s), "", lines);
    for (const auto& [k, v] : lines) os << "# " << k << " = " << v << "\n";
    for (const auto& [k, v] : r.metadata) os << "# meta." << k << " = " << v << "\n";

    std::vector<AxisUnit> units;
    for (const auto& a : r.axes) units.push_back(axis_unit(a.name));
    std::vector<Column> cols;
    for (const auto& [name, _] : r.values) cols.push_back(readout_column(r, name));

    bool first = true;
    for (const auto& u : units) {
        os << (first ? "" : ",") << u.key;
        first = false;
    }
    for (const auto& c : cols) {
        os << (first ? "" : ",") << c.label;
        first = false;
    }
    os << "\n";

    const auto shape = r.shape();
    std::vector<std::size_t> idx(shape.size(), 0);
    for (std::size_t cell = 0; cell < r.cells(); ++cell) {
        std::size_t rem = cell;
        for (std::size_t k = shape.size(); k-- > 0;) {
            idx[k] = rem % shape[k];
            rem /= shape[k];
        }
        first = true;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            os << (first ? "" : ",") << format_number(r.axes[k].values[idx[k]] / units[k].factor);
            first = false;
        }
        std::size_t c = 0;
        for (const auto& [name, vals] : r.values) {
            os << (first ? "" : ",") << format_number(vals[cell] / cols[c++].divisor);
            first = false;
        }
        os << "\n";
    }
    return os.str();
}

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

RunReport run_to_directory(const LoadedScenario& loaded, const std::filesystem::path& out_dir, std::size_t threads) {
    const Scenario& s = loaded.scenario;
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<SweepResult> results = run_scenario(s, threads);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::filesystem::create_directories(out_dir);
    RunReport report;
    json outputs = json::array();
    json metadata = json::object();
    for (const auto& r : results) {
        const std::string csv = result_csv(r, s);
        const auto path = out_dir / (r.name + ".csv");
        write_file(path, csv);
        report.files.push_back(path);
        outputs.push_back({{"file", path.filename().string()}, {"rows", r.cells()}, {"sha256", sha256_hex(csv)}});
        json m = json::object();
        for (const auto& [k, v] : r.metadata) m[k] = v;
        metadata[r.name] = m;
    }
    const std::string meta_text = metadata.dump(2) + "\n";
    const auto meta_path = out_dir / "metadata.json";
    write_file(meta_path, meta_text);
    report.files.push_back(meta_path);
    outputs.push_back({{"file", "metadata.json"}, {"sha256", sha256_hex(meta_text)}});

    const ManipulationOptions mo;
    json manifest;
    manifest["tool"] = {{"name", "qdspin"}, {"version", QDSPIN_VERSION}};
    manifest["scenario"] = s.name;
    manifest["description"] = s.description;
    manifest["input_sha256"] = sha256_hex(loaded.resolved_text);
    manifest["config"] = toml_to_json(toml::parse(loaded.resolved_text));
    manifest["resolved"] = resolved_parameters(s);
    manifest["solver"] = {{"simd", kernels::isa_name(kernels::active_isa())},
                          {"steady_state", "sparse LU with trace row"},
                          {"spectrum", "Hessenberg resolvent on the emission sector"},
                          {"manipulation_rtol", mo.rtol},
                          {"manipulation_atol", mo.atol},
                          {"fock_tolerance", mo.fock_tolerance}};
    manifest["threads"] = threads;
    manifest["started_utc"] = started;
    manifest["wall_clock_seconds"] = wall;
    manifest["outputs"] = outputs;
    const auto manifest_path = out_dir / "manifest.json";
    write_file(manifest_path, manifest.dump(2) + "\n");
    report.files.push_back(manifest_path);
    report.wall_seconds = wall;
    return report;
}

std::vector<ScenarioListing> list_scenarios() {
    std::vector<ScenarioListing> out;
    for (const auto& b : builtin_scenarios()) out.push_back({b.name, b.description});
    return out;
}

}  // namespace qdspin
