/*
   Copyright 2026 The bethe-xxx Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef BETHE_IO_HPP
#define BETHE_IO_HPP

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bethe.hpp"
#include "wronski.hpp"

namespace bethe {

using Json = nlohmann::json;

/// Malformed or inconsistent run configuration (CLI exit code 64).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Scalars and small objects.

inline Json to_json(const Rational& x) { return x.get_str(); }
inline Json to_json(const Complex& x) { return Json::array({x.real(), x.imag()}); }

/// Accepts an integer, a decimal literal or a "p/q" string.
inline Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_float()) {
        const std::string text = j.dump();
        if (text.find_first_of("eE") != std::string::npos) throw std::invalid_argument("write " + text + " as a \"p/q\" string");
        return parse_rational(text);
    }
    throw std::invalid_argument("expected a number or a \"p/q\" string, got " + j.dump());
}

template <class S>
Json to_json(const std::vector<S>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

template <class S>
Json to_json(const Poly<S>& p) {
    Json a = Json::array();
    for (int i = 0; i <= p.degree(); ++i) a.push_back(to_json(p[i]));
    return a;
}

template <class S>
Json to_json(const BetheRoots<S>& t) {
    Json a = Json::array();
    for (const auto& block : t.blocks) a.push_back(to_json(block));
    return a;
}

template <class S>
Json to_json(const SpacePoint<S>& x) {
    Json coords = Json::array();
    for (const auto& row : x.coords) coords.push_back(to_json(row));
    return {{"mode", to_string(x.kind)}, {"q", to_json(x.q)}, {"lambda", x.lambda.lambda}, {"coordinates", coords}};
}

template <class S>
SpacePoint<S> space_point_from_json(const Json& j) {
    SpacePoint<S> x;
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "quasi_exp")
        x.kind = SpaceKind::quasi_exp;
    else if (mode == "polynomial")
        x.kind = SpaceKind::polynomial;
    else
        throw std::invalid_argument("unknown space mode '" + mode + "'");
    x.lambda = Weight(j.at("lambda").get<std::vector<int>>());
    for (const auto& v : j.at("q")) x.q.push_back(lift<S>(rational_from_json(v)));
    for (const auto& row : j.at("coordinates")) {
        x.coords.emplace_back();
        for (const auto& v : row) x.coords.back().push_back(lift<S>(rational_from_json(v)));
    }
    x.validate();
    return x;
}

// ---------------------------------------------------------------------------
// Run configuration.

struct Tolerances {
    double newton = 1e-12;
    double dedup = 1e-6;
    double offdiag = 1e-8;
    double eig = 1e-8;
};

struct RunConfig {
    int N = 2;
    int n = 0;
    Weight lambda;
    std::vector<Rational> q;
    bool q_ones = false;
    std::vector<Rational> b;
    Mode mode = Mode::exact;
    int smax = 0;  // expansion order; defaults to n + N
    Tolerances tol;
    std::uint64_t seed = 0;
    int cutoff = 3;
    std::string output;
    std::string self_test;

    BetheProblem<Rational> problem() const { return {lambda, q, b}; }
    SolverOptions solver_options() const {
        SolverOptions o;
        o.newton_tol = tol.newton;
        o.dedup_tol = tol.dedup;
        o.offdiag_tol = tol.offdiag;
        o.seed = seed;
        return o;
    }
};

namespace detail {

inline const Json* find_key(const Json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

template <class T>
T get_as(const Json& j, const std::string& what) {
    try {
        return j.get<T>();
    } catch (const Json::exception&) {
        throw ConfigError("'" + what + "' has the wrong type: " + j.dump());
    }
}

}  // namespace detail

/// Validates and expands a configuration object: "q": "ones" gives q = 1,
/// "b": "generic" gives b_s = 2(s - 1).
inline RunConfig parse_config(const Json& j) {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    static const std::set<std::string> known{"N", "n", "lambda", "q", "b", "mode", "smax", "tolerances", "seed", "cutoff", "output", "self_test"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ConfigError("unknown configuration key '" + key + "'");
    RunConfig c;
    for (const char* key : {"N", "lambda", "q", "b"})
        if (!detail::find_key(j, key)) throw ConfigError(std::string("missing required key '") + key + "'");
    c.N = detail::get_as<int>(j.at("N"), "N");
    if (c.N < 1) throw ConfigError("N must be at least 1");
    auto lam = detail::get_as<std::vector<int>>(j.at("lambda"), "lambda");
    if (static_cast<int>(lam.size()) != c.N) throw ConfigError("lambda must have N entries");
    for (int x : lam)
        if (x < 0) throw ConfigError("lambda entries must be nonnegative");
    c.lambda = Weight(lam);
    c.n = c.lambda.n();
    if (auto* n = detail::find_key(j, "n"); n && detail::get_as<int>(*n, "n") != c.n) throw ConfigError("n must equal |lambda|");

    try {
        const Json& q = j.at("q");
        if (q.is_string() && q.get<std::string>() == "ones") {
            c.q.assign(static_cast<std::size_t>(c.N), Rational(1));
        } else {
            if (!q.is_array()) throw ConfigError("q must be a list or \"ones\"");
            for (const auto& x : q) c.q.push_back(rational_from_json(x));
        }
        const Json& b = j.at("b");
        if (b.is_string() && b.get<std::string>() == "generic") {
            c.b = EvaluationData<Rational>::generic(c.N, c.n).b;
        } else {
            if (!b.is_array()) throw ConfigError("b must be a list or \"generic\"");
            for (const auto& x : b) c.b.push_back(rational_from_json(x));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (static_cast<int>(c.q.size()) != c.N) throw ConfigError("q must have N entries");
    if (static_cast<int>(c.b.size()) != c.n) throw ConfigError("b must have n = |lambda| entries");
    for (const auto& x : c.q)
        if (sgn(x) == 0) throw ConfigError("q entries must be nonzero");
    c.q_ones = std::all_of(c.q.begin(), c.q.end(), [](const Rational& x) { return x == 1; });

    if (auto* m = detail::find_key(j, "mode")) {
        try {
            c.mode = parse_mode(detail::get_as<std::string>(*m, "mode"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    c.smax = c.n + c.N;
    if (auto* s = detail::find_key(j, "smax")) c.smax = detail::get_as<int>(*s, "smax");
    if (c.smax < 1) throw ConfigError("smax must be positive");
    if (auto* t = detail::find_key(j, "tolerances")) {
        if (!t->is_object()) throw ConfigError("tolerances must be an object");
        for (const auto& [key, value] : t->items()) {
            const double v = detail::get_as<double>(value, "tolerances." + key);
            if (!(v > 0.0)) throw ConfigError("tolerance '" + key + "' must be positive");
            if (key == "newton")
                c.tol.newton = v;
            else if (key == "dedup")
                c.tol.dedup = v;
            else if (key == "offdiag")
                c.tol.offdiag = v;
            else if (key == "eig")
                c.tol.eig = v;
            else
                throw ConfigError("unknown tolerance '" + key + "'");
        }
    }
    if (auto* s = detail::find_key(j, "seed")) c.seed = detail::get_as<std::uint64_t>(*s, "seed");
    if (auto* d = detail::find_key(j, "cutoff")) c.cutoff = detail::get_as<int>(*d, "cutoff");
    if (c.cutoff < 0) throw ConfigError("cutoff must be nonnegative");
    if (auto* o = detail::find_key(j, "output")) c.output = detail::get_as<std::string>(*o, "output");
    if (auto* s = detail::find_key(j, "self_test")) {
        c.self_test = detail::get_as<std::string>(*s, "self_test");
        if (c.self_test != "corrupt_operator") throw ConfigError("unknown self_test '" + c.self_test + "'");
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read configuration '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw ConfigError("configuration '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

inline Json to_json(const RunConfig& c) {
    Json tol = {{"newton", c.tol.newton}, {"dedup", c.tol.dedup}, {"offdiag", c.tol.offdiag}, {"eig", c.tol.eig}};
    Json j = {{"N", c.N},           {"n", c.n},       {"lambda", c.lambda.lambda}, {"q", to_json(c.q)},
              {"b", to_json(c.b)},  {"mode", to_string(c.mode)}, {"smax", c.smax}, {"tolerances", tol},
              {"seed", c.seed},     {"cutoff", c.cutoff}};
    if (!c.self_test.empty()) j["self_test"] = c.self_test;
    return j;
}

// ---------------------------------------------------------------------------
// Reports.

enum class CheckStatus { pass, fail, skipped };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass:
            return "pass";
        case CheckStatus::fail:
            return "fail";
        default:
            return "skipped";
    }
}

struct CheckRecord {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    Json residuals = Json::object();
    Json data = Json::object();
    std::string note;

    Json to_json() const {
        Json j = {{"name", name}, {"status", to_string(status)}, {"residuals", residuals}, {"data", data}};
        if (!note.empty()) j["note"] = note;
        return j;
    }
};

/// Output of one subcommand.
struct Section {
    std::string command;
    std::vector<CheckRecord> checks;
    bool nonconvergent = false;
    Json extra = Json::object();

    CheckRecord& add(std::string name, bool ok) {
        checks.push_back({std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, Json::object(), Json::object(), {}});
        return checks.back();
    }
    CheckRecord& skip(std::string name, std::string why) {
        checks.push_back({std::move(name), CheckStatus::skipped, Json::object(), Json::object(), std::move(why)});
        return checks.back();
    }
    bool failed() const {
        return std::any_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.status == CheckStatus::fail; });
    }
    Json to_json() const {
        Json a = Json::array();
        for (const auto& c : checks) a.push_back(c.to_json());
        Json j = {{"command", command}, {"checks", a}, {"nonconvergent", nonconvergent}};
        if (!extra.empty()) j["results"] = extra;
        return j;
    }
};

/// 0 pass, 1 verification failure, 2 solver nonconvergence. A failed check
/// outranks nonconvergence.
inline int exit_code(const std::vector<Section>& sections) {
    bool failed = false, nonconv = false;
    for (const auto& s : sections) {
        failed = failed || s.failed();
        nonconv = nonconv || s.nonconvergent;
    }
    return failed ? 1 : nonconv ? 2 : 0;
}

inline Json make_report(const RunConfig& c, const std::vector<Section>& sections) {
    Json a = Json::array();
    for (const auto& s : sections) a.push_back(s.to_json());
    const int code = exit_code(sections);
    return {{"config", to_json(c)}, {"sections", a}, {"exit_code", code}, {"status", code == 0 ? "pass" : code == 1 ? "fail" : "nonconvergent"}};
}

}  // namespace bethe

#endif  // BETHE_IO_HPP
