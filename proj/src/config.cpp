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

#include "qdspin/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "qdspin/errors.hpp"

namespace qdspin {

namespace builtin_data {
// Generated at configure time from configs/*.toml.
extern const std::vector<std::pair<std::string, std::string>> kTexts;
}  // namespace builtin_data

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t line_of(const toml::node& n) { return static_cast<std::size_t>(n.source().begin.line); }

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const toml::node* n, const std::string& field, const std::string& msg) const {
        throw ConfigError(source_, n ? line_of(*n) : 0, field, msg);
    }

    double number(const toml::node& n, const std::string& field) const {
        if (auto v = n.value_exact<double>()) return *v;
        if (auto v = n.value_exact<std::int64_t>()) return static_cast<double>(*v);
        fail(&n, field, "expected a number");
    }

    double non_negative(const toml::node& n, const std::string& field) const {
        const double v = number(n, field);
        if (!(v >= 0.0) || !std::isfinite(v)) fail(&n, field, "must be a finite non-negative number");
        return v;
    }

    double finite(const toml::node& n, const std::string& field) const {
        const double v = number(n, field);
        if (!std::isfinite(v)) fail(&n, field, "must be finite");
        return v;
    }

    std::int64_t integer(const toml::node& n, const std::string& field) const {
        if (auto v = n.value_exact<std::int64_t>()) return *v;
        fail(&n, field, "expected an integer");
    }

    std::string string(const toml::node& n, const std::string& field) const {
        if (auto v = n.value_exact<std::string>()) return *v;
        fail(&n, field, "expected a string");
    }

    const toml::table& table(const toml::node& n, const std::string& field) const {
        if (const auto* t = n.as_table()) return *t;
        fail(&n, field, "expected a table");
    }

    using Handler = std::function<void(const toml::node&, const std::string& field)>;

    // Dispatches every key of `t` to its handler; unknown keys are errors.
    void walk(const toml::table& t, const std::string& prefix, const std::map<std::string, Handler>& handlers) const {
        for (const auto& [key, node] : t) {
            const std::string k(key.str());
            const std::string field = prefix.empty() ? k : prefix + "." + k;
            const auto it = handlers.find(k);
            if (it == handlers.end()) fail(&node, field, "unknown key");
            it->second(node, field);
        }
    }

    template <typename E, typename F>
    E enumeration(const toml::node& n, const std::string& field, F parse) const {
        const std::string s = string(n, field);
        try {
            return parse(s);
        } catch (const std::exception& e) {
            fail(&n, field, e.what());
        }
    }

    std::vector<double> axis(const toml::node& n, const std::string& field, double factor) const {
        std::vector<double> out;
        if (const auto* arr = n.as_array()) {
            for (const auto& v : *arr) out.push_back(finite(v, field) * factor);
        } else if (const auto* t = n.as_table()) {
            const toml::node* start = t->get("start");
            const toml::node* stop = t->get("stop");
            const toml::node* num = t->get("num");
            for (const auto& [key, node] : *t) {
                const std::string k(key.str());
                if (k != "start" && k != "stop" && k != "num") fail(&node, field + "." + k, "unknown key");
            }
            if (!start || !stop || !num) fail(&n, field, "range needs start, stop and num");
            const double a = finite(*start, field + ".start");
            const double b = finite(*stop, field + ".stop");
            const std::int64_t m = integer(*num, field + ".num");
            if (m < 1) fail(num, field + ".num", "must be >= 1");
            if (m == 1 && a != b) fail(num, field + ".num", "a single point needs start == stop");
            out.reserve(static_cast<std::size_t>(m));
            for (std::int64_t i = 0; i < m; ++i) {
                const double x = m == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(m - 1);
                out.push_back(x * factor);
            }
        } else {
            fail(&n, field, "expected an array or {start, stop, num}");
        }
        if (out.empty()) fail(&n, field, "range is empty");
        bool inc = true, dec = true;
        for (std::size_t i = 1; i < out.size(); ++i) {
            inc = inc && out[i] > out[i - 1];
            dec = dec && out[i] < out[i - 1];
        }
        if (out.size() > 1 && !inc && !dec) fail(&n, field, "values must be strictly monotone");
        return out;
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
};

const std::vector<std::string> kAxisNames = {"B",        "delta", "delta_b",   "delta_l",
                                             "delta_c2", "time",  "detuning",  "amplitude"};

// Shared keys (kappa_ghz) and per-channel keys (kappa_a_ghz) may not both appear.
void check_conflicts(const Reader& r, const toml::table& t, const std::string& shared,
                     const std::vector<std::string>& specific) {
    const toml::node* s = t.get(shared);
    if (!s) return;
    for (const auto& k : specific)
        if (t.get(k)) r.fail(t.get(k), "params." + k, "conflicts with params." + shared);
}

void insert_override(toml::table& root, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set", 0, spec, "expected key=value");
    std::string path = spec.substr(0, eq);
    path.erase(path.find_last_not_of(" \t") + 1);
    const std::string value = spec.substr(eq + 1);
    toml::table parsed;
    try {
        parsed = toml::parse("v = " + value);
    } catch (const toml::parse_error&) {
        // Bare words are taken as strings so that `--set kind=pl_map` works.
        parsed = toml::table{};
        parsed.insert("v", value);
    }
    toml::table* cur = &root;
    std::size_t pos = 0;
    while (true) {
        const auto dot = path.find('.', pos);
        const std::string part = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (part.empty()) throw ConfigError("--set", 0, path, "empty key segment");
        if (dot == std::string::npos) {
            cur->insert_or_assign(part, *parsed.get("v"));
            return;
        }
        toml::node* next = cur->get(part);
        if (!next) {
            cur->insert(part, toml::table{});
            next = cur->get(part);
        }
        cur = next->as_table();
        if (!cur) throw ConfigError("--set", 0, path, "'" + part + "' is not a table");
        pos = dot + 1;
    }
}

Scenario build(const toml::table& root, const Reader& r) {
    Scenario s;
    bool have_kind = false;
    const double g = kTwoPi;  // GHz -> rad/ns
    SystemParams& p = s.params;
    DriveConfig& d = s.drive;
    FieldParams& f = s.field;

    const std::map<std::string, Reader::Handler> params = {
        {"g_ghz", [&](auto& n, auto& k) { p.g_a = p.g_b = r.non_negative(n, k) * g; }},
        {"g_a_ghz", [&](auto& n, auto& k) { p.g_a = r.non_negative(n, k) * g; }},
        {"g_b_ghz", [&](auto& n, auto& k) { p.g_b = r.non_negative(n, k) * g; }},
        {"kappa_ghz", [&](auto& n, auto& k) { p.kappa_a = p.kappa_b = r.non_negative(n, k) * g; }},
        {"kappa_a_ghz", [&](auto& n, auto& k) { p.kappa_a = r.non_negative(n, k) * g; }},
        {"kappa_b_ghz", [&](auto& n, auto& k) { p.kappa_b = r.non_negative(n, k) * g; }},
        {"gamma_ghz",
         [&](auto& n, auto& k) { p.gamma_41 = p.gamma_42 = p.gamma_31 = p.gamma_32 = r.non_negative(n, k) * g; }},
        {"gamma_41_ghz", [&](auto& n, auto& k) { p.gamma_41 = r.non_negative(n, k) * g; }},
        {"gamma_42_ghz", [&](auto& n, auto& k) { p.gamma_42 = r.non_negative(n, k) * g; }},
        {"gamma_31_ghz", [&](auto& n, auto& k) { p.gamma_31 = r.non_negative(n, k) * g; }},
        {"gamma_32_ghz", [&](auto& n, auto& k) { p.gamma_32 = r.non_negative(n, k) * g; }},
        {"omega_o_ghz", [&](auto& n, auto& k) { p.omega_o = r.finite(n, k) * g; }},
        {"omega_a_ghz", [&](auto& n, auto& k) { p.omega_a = r.finite(n, k) * g; }},
        {"omega_b_ghz", [&](auto& n, auto& k) { p.omega_b = r.finite(n, k) * g; }},
        {"B_tesla", [&](auto& n, auto& k) { p.B = r.finite(n, k); }},
        {"g_e", [&](auto& n, auto& k) { p.g_e = r.finite(n, k); }},
        {"g_h", [&](auto& n, auto& k) { p.g_h = r.finite(n, k); }},
        {"fock_cutoff",
         [&](auto& n, auto& k) {
             const auto v = r.integer(n, k);
             if (v < 1) r.fail(&n, k, "must be >= 1");
             p.fock_cutoff = static_cast<std::size_t>(v);
         }},
        {"pump_ghz", [&](auto& n, auto& k) { s.pump = r.non_negative(n, k) * g; }},
    };

    const std::map<std::string, Reader::Handler> pulse = {
        {"shape",
         [&](auto& n, auto& k) {
             const std::string v = r.string(n, k);
             if (v == "constant")
                 d.envelope.shape = PulseEnvelope::Shape::constant;
             else if (v == "gaussian")
                 d.envelope.shape = PulseEnvelope::Shape::gaussian;
             else
                 r.fail(&n, k, "expected \"constant\" or \"gaussian\"");
         }},
        {"fwhm_ps",
         [&](auto& n, auto& k) {
             const double v = r.finite(n, k);
             if (!(v > 0.0)) r.fail(&n, k, "must be positive");
             d.envelope.fwhm = ps(v);
         }},
        {"center_ps", [&](auto& n, auto& k) { d.envelope.center = ps(r.finite(n, k)); }},
        {"amplitude_scale", [&](auto& n, auto& k) { d.envelope.amplitude_scale = r.finite(n, k); }},
    };

    const std::map<std::string, Reader::Handler> drive = {
        {"omega_l_ghz", [&](auto& n, auto& k) { d.omega_l = r.finite(n, k) * g; }},
        {"eps_a_ghz", [&](auto& n, auto& k) { d.eps_a = r.non_negative(n, k) * g; }},
        {"eps_b_ghz", [&](auto& n, auto& k) { d.eps_b = r.non_negative(n, k) * g; }},
        {"omega_h_ghz", [&](auto& n, auto& k) { d.omega_h = r.non_negative(n, k) * g; }},
        {"omega_v_ghz", [&](auto& n, auto& k) { d.omega_v = r.non_negative(n, k) * g; }},
        {"phase_rad", [&](auto& n, auto& k) { d.phase = r.finite(n, k); }},
        {"polarization",
         [&](auto& n, auto& k) {
             d.polarization = r.enumeration<Polarization>(n, k, polarization_from_string);
         }},
        {"pulse", [&](auto& n, auto& k) { r.walk(r.table(n, k), k, pulse); }},
    };

    bool field_linewidth = false;
    const std::map<std::string, Reader::Handler> field = {
        {"power_w", [&](auto& n, auto& k) { f.power = r.non_negative(n, k); }},
        {"sigma0_m", [&](auto& n, auto& k) { f.sigma0 = r.non_negative(n, k); }},
        {"n", [&](auto& n, auto& k) { f.n = r.non_negative(n, k); }},
        {"lambda0_m", [&](auto& n, auto& k) { f.lambda0 = r.non_negative(n, k); }},
        {"eta", [&](auto& n, auto& k) { f.eta = r.non_negative(n, k); }},
        {"v_m_m3", [&](auto& n, auto& k) { f.v_m = r.non_negative(n, k); }},
        {"kappa_ghz",
         [&](auto& n, auto& k) {
             f.delta_omega = 2.0 * r.non_negative(n, k) * g;
             field_linewidth = true;
         }},
        {"q", [&](auto& n, auto& k) { f.q = r.non_negative(n, k); }},
        {"mu_h_cm", [&](auto& n, auto& k) { f.mu_h = r.non_negative(n, k); }},
        {"mu_v_cm", [&](auto& n, auto& k) { f.mu_v = r.non_negative(n, k); }},
    };

    std::map<std::string, Reader::Handler> sweep;
    for (const auto& name : kAxisNames) {
        const AxisUnit u = axis_unit(name);
        sweep[u.key] = [&, name, u](auto& n, auto& k) {
            for (const auto& a : s.sweep)
                if (a.name == name) r.fail(&n, k, "axis given twice");
            s.sweep.push_back({name, r.axis(n, k, u.factor)});
        };
    }

    const std::map<std::string, Reader::Handler> top = {
        {"name", [&](auto& n, auto& k) { s.name = r.string(n, k); }},
        {"description", [&](auto& n, auto& k) { s.description = r.string(n, k); }},
        {"kind",
         [&](auto& n, auto& k) {
             s.kind = r.enumeration<ScenarioKind>(n, k, scenario_kind_from_string);
             have_kind = true;
         }},
        {"initial_state",
         [&](auto& n, auto& k) {
             s.initial_state = r.enumeration<InitialState>(n, k, initial_state_from_string);
             if (s.initial_state == InitialState::custom)
                 r.fail(&n, k, "custom initial states cannot be given in a scenario file");
         }},
        {"driving", [&](auto& n, auto& k) { s.driving = r.enumeration<Driving>(n, k, driving_from_string); }},
        {"params",
         [&](auto& n, auto& k) {
             const auto& t = r.table(n, k);
             check_conflicts(r, t, "g_ghz", {"g_a_ghz", "g_b_ghz"});
             check_conflicts(r, t, "kappa_ghz", {"kappa_a_ghz", "kappa_b_ghz"});
             check_conflicts(r, t, "gamma_ghz", {"gamma_41_ghz", "gamma_42_ghz", "gamma_31_ghz", "gamma_32_ghz"});
             r.walk(t, k, params);
         }},
        {"drive", [&](auto& n, auto& k) { r.walk(r.table(n, k), k, drive); }},
        {"field", [&](auto& n, auto& k) { r.walk(r.table(n, k), k, field); }},
        {"sweep", [&](auto& n, auto& k) { r.walk(r.table(n, k), k, sweep); }},
    };

    r.walk(root, "", top);
    if (!have_kind) r.fail(nullptr, "kind", "missing");
    if (s.name.empty()) r.fail(nullptr, "name", "missing");
    if (s.kind == ScenarioKind::field_ratio && !field_linewidth) r.fail(nullptr, "field.kappa_ghz", "missing");

    // Axes in the order the kind expects, so output files have a fixed layout.
    std::vector<Axis> ordered;
    for (const auto& req : required_axes(s.kind)) {
        const auto it = std::find_if(s.sweep.begin(), s.sweep.end(), [&](const Axis& a) { return a.name == req; });
        if (it == s.sweep.end()) r.fail(nullptr, "sweep." + axis_unit(req).key, "missing");
        ordered.push_back(*it);
    }
    for (const auto& a : s.sweep)
        if (std::find(kAxisNames.begin(), kAxisNames.end(), a.name) != kAxisNames.end() &&
            std::none_of(ordered.begin(), ordered.end(), [&](const Axis& o) { return o.name == a.name; }))
            r.fail(nullptr, "sweep." + axis_unit(a.name).key, std::string("not an axis of a ") + to_string(s.kind) +
                                                                   " scenario");
    s.sweep = std::move(ordered);

    try {
        s.validate();
    } catch (const InvalidArgument& e) {
        r.fail(nullptr, "", e.what());
    }
    return s;
}

}  // namespace

AxisUnit axis_unit(const std::string& axis_name) {
    if (axis_name == "B") return {"B_tesla", "T", 1.0};
    if (axis_name == "time") return {"time_ps", "ps", 1e-3};
    if (std::find(kAxisNames.begin(), kAxisNames.end(), axis_name) != kAxisNames.end())
        return {axis_name + "_ghz", "GHz", kTwoPi};
    throw InvalidArgument("unknown axis '" + axis_name + "'");
}

LoadedScenario parse_scenario(std::string_view text, const std::string& source_name,
                              const std::vector<std::string>& overrides) {
    toml::table root;
    try {
        root = toml::parse(text, source_name);
    } catch (const toml::parse_error& e) {
        throw ConfigError(source_name, static_cast<std::size_t>(e.source().begin.line), "",
                          std::string(e.description()));
    }
    for (const auto& o : overrides) insert_override(root, o);
    const Reader reader(source_name);
    LoadedScenario out{build(root, reader), {}};
    std::ostringstream os;
    os << toml::toml_formatter(root, toml::toml_formatter::default_flags & ~toml::format_flags::indentation);
    out.resolved_text = os.str();
    return out;
}

LoadedScenario load_scenario_file(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string(), 0, "", "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.string(), overrides);
}

const std::vector<BuiltinScenario>& builtin_scenarios() {
    static const std::vector<BuiltinScenario> list = [] {
        std::vector<BuiltinScenario> v;
        for (const auto& [name, text] : builtin_data::kTexts) {
            const toml::table t = toml::parse(text, name);
            v.push_back({name, t["description"].value_or(std::string()), text});
        }
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
        return v;
    }();
    return list;
}

const BuiltinScenario* find_builtin(const std::string& name) {
    for (const auto& b : builtin_scenarios())
        if (b.name == name) return &b;
    return nullptr;
}

}  // namespace qdspin
