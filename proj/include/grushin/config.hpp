#pragma once

// Flat "key = value" run configuration with per-subcommand schema checks.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "grushin/errors.hpp"
#include "grushin/extensions.hpp"

namespace grushin {

using KeyValues = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

// Lines are "key = value"; '#' starts a comment; duplicate keys are an error.
inline KeyValues parse_config_text(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
        const auto key = detail::trim(line.substr(0, eq));
        const auto val = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw config_error("line " + std::to_string(lineno) + ": empty key");
        if (val.empty()) throw config_error("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
        if (!kv.emplace(key, val).second) throw config_error("duplicate key '" + key + "'");
    }
    return kv;
}

inline KeyValues load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// "key=value" override; later overrides win.
inline void apply_override(KeyValues& kv, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos) throw config_error("--set expects key=value, got '" + assignment + "'");
    const auto key = detail::trim(assignment.substr(0, eq));
    const auto val = detail::trim(assignment.substr(eq + 1));
    if (key.empty() || val.empty()) throw config_error("--set expects key=value, got '" + assignment + "'");
    kv[key] = val;
}

inline long parse_int(const std::string& key, const std::string& v) {
    const double d = parse_real(key, v);
    if (d != std::floor(d) || std::abs(d) > 2e9) throw config_error("key '" + key + "': expected an integer, got '" + v + "'");
    return static_cast<long>(d);
}

inline const std::set<std::string>& extension_keys() {
    static const std::set<std::string> keys{"family", "gamma", "a_re", "a_im", "gamma1", "gamma2", "gamma3", "gamma4"};
    return keys;
}

inline void reject_unknown(const KeyValues& kv, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : kv)
        if (!allowed.count(k)) throw config_error("unknown key '" + k + "'");
}

struct EvolveSettings {
    double alpha = 0.5;
    ExtensionSpec spec;
    double L = 6.0;
    int N = 600;
    int K = 16;
    int M = 64;
    double dt = 1e-4;
    int steps = 1000;
    int record_every = 100;
    double center_x = 2.0;
    double sigma = 0.25;
    double momentum = -3.0;
    int mode = 1;
};

inline const std::set<std::string>& evolve_keys() {
    static const std::set<std::string> keys = [] {
        std::set<std::string> k{"alpha", "L", "N", "K", "M", "dt", "steps", "record_every",
                                "init.center_x", "init.sigma", "init.momentum", "init.mode"};
        k.insert(extension_keys().begin(), extension_keys().end());
        return k;
    }();
    return keys;
}

inline EvolveSettings evolve_settings(const KeyValues& kv) {
    reject_unknown(kv, evolve_keys());
    EvolveSettings s;
    auto real = [&](const char* key, double& out) {
        if (auto it = kv.find(key); it != kv.end()) out = parse_real(key, it->second);
    };
    auto integer = [&](const char* key, int& out) {
        if (auto it = kv.find(key); it != kv.end()) out = static_cast<int>(parse_int(key, it->second));
    };
    real("alpha", s.alpha);
    real("L", s.L);
    integer("N", s.N);
    integer("K", s.K);
    s.M = 4 * s.K;
    integer("M", s.M);
    real("dt", s.dt);
    integer("steps", s.steps);
    integer("record_every", s.record_every);
    real("init.center_x", s.center_x);
    real("init.sigma", s.sigma);
    real("init.momentum", s.momentum);
    integer("init.mode", s.mode);
    s.spec = spec_from_kv(kv);

    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw config_error(msg);
    };
    need(s.alpha >= 0.0 && s.alpha <= 0.9, "alpha must lie in [0, 0.9] for runs");
    need(s.L > 0.0, "L must be positive");
    need(s.N >= 100, "N must be >= 100");
    need(s.K >= 0, "K must be >= 0");
    need(s.M >= 2 * s.K + 2, "M must be >= 2K + 2");
    need(s.dt > 0.0, "dt must be positive");
    need(s.steps >= 0, "steps must be >= 0");
    need(s.record_every >= 1, "record_every must be >= 1");
    need(s.sigma > 0.0, "init.sigma must be positive");
    need(std::abs(s.mode) <= s.K, "init.mode must satisfy |mode| <= K");
    need(std::abs(s.center_x) < s.L, "init.center_x must lie inside (-L, L)");
    try {
        s.spec.validate();
    } catch (const domain_error& e) {
        throw config_error(e.what());
    }
    return s;
}

}  // namespace grushin
