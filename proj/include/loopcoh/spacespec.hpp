#pragma once

#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "loopcoh/emss.hpp"

namespace loopcoh {

using json = nlohmann::json;

/// A space specification: base presentation, spherical-fibration data per
/// prime, and optional sphere-bundle relation data. One JSON document.
struct SpaceSpec {
    std::string name;
    std::string description;
    std::vector<std::uint32_t> primes;  // default primes; 0 selects Q
    int truncation = 24;                // default report degree

    std::vector<GenDecl> generators;
    std::map<std::uint32_t, SteenrodTables> base_steenrod;  // keyed by odd/2 prime

    int fiber_dim = 2;
    RawClass euler;
    std::map<std::uint32_t, OrientationData> orientation;

    std::optional<std::pair<RawClass, RawClass>> massey;  // (s, t)

    static SpaceSpec from_json(const json& j);
    json to_json() const;

private:
    static SpaceSpec from_json_checked(const json& j);

public:

    static SpaceSpec builtin(const std::string& name);
    static std::vector<std::string> builtin_names();
    static SpaceSpec load_file(const std::string& path);
    /// A builtin name or a path to a JSON document.
    static SpaceSpec load(const std::string& name_or_path);

    struct Realized;
    /// Instantiate the algebraic model at one prime. The report degree
    /// drives the internal truncation so that every bidegree with total
    /// degree <= report_degree is representable.
    Realized realize(std::uint32_t p, std::optional<int> max_degree = std::nullopt) const;
};

struct SpaceSpec::Realized {
    std::shared_ptr<AlgebraPresentation> alg;
    std::shared_ptr<ThomModule> module;
    std::optional<MasseyData> massey;
    int report_degree = 24;
};

namespace specio {

inline const json& field(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end())
        throw schema_error(path + "." + key + ": missing");
    return *it;
}

inline int int_field(const json& j, const std::string& key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_number_integer())
        throw schema_error(path + "." + key + ": expected an integer");
    return v.get<int>();
}

inline RawClass raw_class(const json& j, const std::string& path) {
    if (!j.is_array())
        throw schema_error(path + ": expected an array of [exponents, coefficient] pairs");
    RawClass out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& term = j[i];
        const std::string tp = path + "[" + std::to_string(i) + "]";
        if (!term.is_array() || term.size() != 2)
            throw schema_error(tp + ": expected [exponents, coefficient]");
        if (!term[0].is_array())
            throw schema_error(tp + "[0]: expected an exponent array");
        std::vector<int> exps;
        for (const json& e : term[0]) {
            if (!e.is_number_integer()) throw schema_error(tp + "[0]: expected integers");
            exps.push_back(e.get<int>());
        }
        if (!term[1].is_number_integer())
            throw schema_error(tp + "[1]: expected an integer coefficient");
        out.emplace_back(std::move(exps), term[1].get<long long>());
    }
    return out;
}

inline json raw_class_to_json(const RawClass& raw) {
    json arr = json::array();
    for (const auto& [exps, c] : raw) arr.push_back(json::array({exps, c}));
    return arr;
}

inline std::map<int, RawClass> indexed_table(const json& j, const std::string& path) {
    if (!j.is_object())
        throw schema_error(path + ": expected an object keyed by operation index");
    std::map<int, RawClass> out;
    for (const auto& [key, val] : j.items()) {
        int idx;
        try {
            std::size_t used = 0;
            idx = std::stoi(key, &used);
            if (used != key.size()) throw std::invalid_argument("");
        } catch (...) {
            throw schema_error(path + ": key '" + key + "' is not an operation index");
        }
        out.emplace(idx, raw_class(val, path + "." + key));
    }
    return out;
}

inline std::uint32_t prime_key(const std::string& key, const std::string& path) {
    std::uint32_t p;
    try {
        std::size_t used = 0;
        unsigned long v = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument("");
        p = static_cast<std::uint32_t>(v);
    } catch (...) {
        throw schema_error(path + ": key '" + key + "' is not a prime");
    }
    require_characteristic(p);
    return p;
}

} // namespace specio

inline SpaceSpec SpaceSpec::from_json(const json& j) {
    try {
        return from_json_checked(j);
    } catch (const json::exception& e) {
        throw schema_error(std::string("space: ") + e.what());
    }
}

inline SpaceSpec SpaceSpec::from_json_checked(const json& j) {
    using namespace specio;
    SpaceSpec s;
    if (!j.is_object()) throw schema_error("space: expected a JSON object");
    s.name = field(j, "name", "space").get<std::string>();
    if (j.contains("description")) s.description = j["description"].get<std::string>();
    for (const json& p : field(j, "primes", "space")) {
        if (!p.is_number_integer() || p.get<long long>() < 0)
            throw schema_error("space.primes: expected nonnegative integers");
        std::uint32_t v = p.get<std::uint32_t>();
        require_characteristic(v);
        s.primes.push_back(v);
    }
    s.truncation = int_field(j, "truncation", "space");
    if (s.truncation < 1) throw schema_error("space.truncation: must be positive");

    const json& base = field(j, "base", "space");
    for (const json& g : field(base, "generators", "space.base")) {
        GenDecl d;
        d.name = field(g, "name", "space.base.generators[]").get<std::string>();
        d.degree = int_field(g, "degree", "space.base.generators[]");
        const json& shape = field(g, "shape", "space.base.generators[]");
        if (shape.is_string()) {
            std::string sh = shape.get<std::string>();
            if (sh == "polynomial") d.height = 0;
            else if (sh == "exterior") d.height = 2;
            else throw schema_error("space.base.generators[].shape: unknown shape '" + sh + "'");
        } else if (shape.is_object() && shape.contains("truncated")) {
            d.height = shape["truncated"].get<int>();
        } else {
            throw schema_error("space.base.generators[].shape: expected "
                               "\"polynomial\", \"exterior\", or {\"truncated\": h}");
        }
        s.generators.push_back(std::move(d));
    }
    if (base.contains("steenrod")) {
        for (const auto& [key, tbl] : base["steenrod"].items()) {
            std::uint32_t p = prime_key(key, "space.base.steenrod");
            const std::string path = "space.base.steenrod." + key;
            SteenrodTables t;
            if (tbl.contains("sq"))
                for (const auto& [gname, gt] : tbl["sq"].items())
                    t.sq[gname] = indexed_table(gt, path + ".sq." + gname);
            if (tbl.contains("pow"))
                for (const auto& [gname, gt] : tbl["pow"].items())
                    t.pow[gname] = indexed_table(gt, path + ".pow." + gname);
            if (tbl.contains("beta"))
                for (const auto& [gname, gt] : tbl["beta"].items())
                    t.beta[gname] = raw_class(gt, path + ".beta." + gname);
            s.base_steenrod.emplace(p, std::move(t));
        }
    }

    const json& bundle = field(j, "bundle", "space");
    s.fiber_dim = int_field(bundle, "fiber_dim", "space.bundle");
    s.euler = raw_class(field(bundle, "euler", "space.bundle"), "space.bundle.euler");
    const json& orient = field(bundle, "orientation", "space.bundle");
    for (const auto& [key, tbl] : orient.items()) {
        std::uint32_t p = prime_key(key, "space.bundle.orientation");
        const std::string path = "space.bundle.orientation." + key;
        OrientationData d;
        if (tbl.contains("sq")) d.sq = indexed_table(tbl["sq"], path + ".sq");
        if (tbl.contains("pow")) d.pow = indexed_table(tbl["pow"], path + ".pow");
        if (tbl.contains("beta")) d.beta = raw_class(tbl["beta"], path + ".beta");
        s.orientation.emplace(p, std::move(d));
    }

    if (j.contains("massey")) {
        const json& m = j["massey"];
        s.massey = std::make_pair(raw_class(field(m, "s", "space.massey"), "space.massey.s"),
                                  raw_class(field(m, "t", "space.massey"), "space.massey.t"));
    }
    return s;
}

inline json SpaceSpec::to_json() const {
    using namespace specio;
    json j;
    j["name"] = name;
    if (!description.empty()) j["description"] = description;
    j["primes"] = primes;
    j["truncation"] = truncation;

    json gens = json::array();
    for (const GenDecl& g : generators) {
        json gj;
        gj["name"] = g.name;
        gj["degree"] = g.degree;
        if (g.height == 0) gj["shape"] = "polynomial";
        else if (g.height == 2) gj["shape"] = "exterior";
        else gj["shape"] = json{{"truncated", g.height}};
        gens.push_back(std::move(gj));
    }
    j["base"]["generators"] = std::move(gens);
    for (const auto& [p, t] : base_steenrod) {
        json tj = json::object();
        if (!t.sq.empty()) {
            json sq = json::object();
            for (const auto& [g, tbl] : t.sq) {
                json gt = json::object();
                for (const auto& [i, raw] : tbl) gt[std::to_string(i)] = raw_class_to_json(raw);
                sq[g] = std::move(gt);
            }
            tj["sq"] = std::move(sq);
        }
        if (!t.pow.empty()) {
            json pw = json::object();
            for (const auto& [g, tbl] : t.pow) {
                json gt = json::object();
                for (const auto& [i, raw] : tbl) gt[std::to_string(i)] = raw_class_to_json(raw);
                pw[g] = std::move(gt);
            }
            tj["pow"] = std::move(pw);
        }
        if (!t.beta.empty()) {
            json bt = json::object();
            for (const auto& [g, raw] : t.beta) bt[g] = raw_class_to_json(raw);
            tj["beta"] = std::move(bt);
        }
        j["base"]["steenrod"][std::to_string(p)] = std::move(tj);
    }

    j["bundle"]["fiber_dim"] = fiber_dim;
    j["bundle"]["euler"] = raw_class_to_json(euler);
    json orient = json::object();
    for (const auto& [p, d] : orientation) {
        json dj = json::object();
        if (!d.sq.empty()) {
            json sq = json::object();
            for (const auto& [i, raw] : d.sq) sq[std::to_string(i)] = raw_class_to_json(raw);
            dj["sq"] = std::move(sq);
        }
        if (!d.pow.empty()) {
            json pw = json::object();
            for (const auto& [i, raw] : d.pow) pw[std::to_string(i)] = raw_class_to_json(raw);
            dj["pow"] = std::move(pw);
        }
        if (!d.beta.empty()) dj["beta"] = raw_class_to_json(d.beta);
        orient[std::to_string(p)] = std::move(dj);
    }
    j["bundle"]["orientation"] = std::move(orient);

    if (massey) {
        j["massey"]["s"] = raw_class_to_json(massey->first);
        j["massey"]["t"] = raw_class_to_json(massey->second);
    }
    return j;
}

inline SpaceSpec SpaceSpec::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw schema_error("cannot open space file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw schema_error("space file '" + path + "': " + e.what());
    }
    return from_json(j);
}

inline SpaceSpec::Realized SpaceSpec::realize(std::uint32_t p,
                                              std::optional<int> max_degree) const {
    require_characteristic(p);
    Realized out;
    out.report_degree = max_degree.value_or(truncation);
    if (out.report_degree < 1)
        throw schema_error("max degree must be positive");
    if (fiber_dim < 2)
        throw schema_error("space.bundle.fiber_dim: must be >= 2");

    // internal truncation: every bidegree with total degree <= report_degree
    // has internal degree <= N + N/(n-1); letters then need base degrees
    // up to that bound
    const int n = fiber_dim;
    const int N = out.report_degree;
    const int alg_trunc = N + (N + n - 2) / (n - 1) + 1;

    SteenrodTables tables;
    if (p > 0) {
        auto it = base_steenrod.find(p);
        if (it == base_steenrod.end() && !generators.empty())
            throw schema_error("space.base.steenrod: no table for prime " + std::to_string(p) +
                               " (tables are required per requested prime; an empty object "
                               "declares the action trivial)");
        if (it != base_steenrod.end()) tables = it->second;
    }
    out.alg = std::make_shared<AlgebraPresentation>(p, generators, alg_trunc, tables);

    OrientationData odata;
    if (p > 0) {
        auto it = orientation.find(p);
        if (it == orientation.end())
            throw schema_error("space.bundle.orientation: no table for prime " +
                               std::to_string(p) +
                               " (tables are required per requested prime; an empty object "
                               "declares the action trivial)");
        odata = it->second;
    }
    Class e = Class::from_raw(*out.alg, fiber_dim, euler, "space.bundle.euler");
    out.module = std::make_shared<ThomModule>(*out.alg, fiber_dim, e, odata);

    if (massey) {
        MasseyData m;
        m.s = Class::from_raw(*out.alg, 2 * (n - 1), massey->first, "space.massey.s");
        m.t = Class::from_raw(*out.alg, n - 1, massey->second, "space.massey.t");
        out.massey = std::move(m);
    }
    return out;
}

namespace builtin_detail {

/// Exponent/coefficient shorthand for one-generator bases.
inline RawClass pow1(int e, long long c = 1) { return {{{e}, c}}; }

inline SpaceSpec cpinf_eta_plus_r() {
    SpaceSpec s;
    s.name = "cpinf-eta-plus-r";
    s.description = "Thom space of the universal complex line bundle plus a trivial line; "
                    "a suspension of infinite complex projective space";
    s.primes = {0, 2, 3, 5};
    s.truncation = 24;
    s.generators = {{"x", 2, 0}};
    // the action on the base is forced by instability; tables are trivial
    s.base_steenrod[2] = {};
    s.base_steenrod[3] = {};
    s.base_steenrod[5] = {};
    s.base_steenrod[7] = {};
    s.fiber_dim = 3;
    s.euler = {};
    OrientationData o2;
    o2.sq[2] = pow1(1);  // Sq^2 u = x.u
    s.orientation[2] = o2;
    for (std::uint32_t p : {3u, 5u, 7u}) {
        OrientationData op;
        op.pow[1] = pow1(static_cast<int>(p) - 1);  // P^1 u = x^{p-1}.u
        s.orientation[p] = op;
    }
    s.massey = std::make_pair(RawClass{}, pow1(1));  // v^2 = 0 + x v
    return s;
}

inline SpaceSpec spin2_suspension() {
    SpaceSpec s = cpinf_eta_plus_r();
    s.name = "spin2-suspension";
    s.description = "Suspension of the Thom space of the universal Spin(2) bundle "
                    "(the square of the universal complex line bundle, plus a trivial line)";
    s.orientation[2] = {};  // w_2 of the squared line bundle vanishes
    // at odd p the Wu class is (2x)^{p-1} = x^{p-1}, as for the line bundle
    s.massey = std::make_pair(pow1(2), RawClass{});  // v^2 = x^2 + 0 v
    return s;
}

inline SpaceSpec spin3() {
    SpaceSpec s;
    s.name = "spin3";
    s.description = "Thom space of the universal Spin(3) bundle over infinite "
                    "quaternionic projective space";
    s.primes = {0, 2, 3, 5};
    s.truncation = 24;
    s.generators = {{"y", 4, 0}};
    s.base_steenrod[2] = {};  // Sq^1 y = Sq^2 y = Sq^3 y = 0
    SteenrodTables b3;
    b3.pow["y"][1] = pow1(2, 2);  // P^1 y = 2 y^2
    s.base_steenrod[3] = b3;
    SteenrodTables b5;
    b5.pow["y"][1] = pow1(3, 2);  // P^1 y = 2 y^3
    s.base_steenrod[5] = b5;
    SteenrodTables b7;
    b7.pow["y"][1] = pow1(4, 2);  // P^1 y = 2 y^4
    s.base_steenrod[7] = b7;
    s.fiber_dim = 3;
    s.euler = {};
    s.orientation[2] = {};  // w_2 = 0
    for (std::uint32_t p : {3u, 5u, 7u}) {
        OrientationData op;
        op.pow[1] = pow1((static_cast<int>(p) - 1) / 2);  // W_1 = y^{(p-1)/2}
        s.orientation[p] = op;
    }
    s.massey = std::make_pair(pow1(1), RawClass{});  // v^2 = y + 0 v
    return s;
}

inline SpaceSpec sphere(int n) {
    SpaceSpec s;
    s.name = "sphere-" + std::to_string(n);
    s.description = "Trivial spherical fibration over a point; the Thom space is a sphere";
    s.primes = {0, 2, 3, 5};
    s.truncation = 24;
    s.base_steenrod[2] = {};
    s.base_steenrod[3] = {};
    s.base_steenrod[5] = {};
    s.base_steenrod[7] = {};
    s.fiber_dim = n;
    s.euler = {};
    s.orientation[2] = {};
    s.orientation[3] = {};
    s.orientation[5] = {};
    s.orientation[7] = {};
    s.massey = std::make_pair(RawClass{}, RawClass{});  // v^2 = 0
    return s;
}

inline SpaceSpec cpinf_eta() {
    SpaceSpec s;
    s.name = "cpinf-eta";
    s.description = "Thom space of the universal complex line bundle itself: infinite "
                    "complex projective space, with nonzero Euler class";
    s.primes = {0, 2, 3, 5};
    // honest bar homology: word counts grow fast in the total degree, so the
    // default stays at the scale the dense solver handles in seconds
    s.truncation = 12;
    s.generators = {{"x", 2, 0}};
    s.base_steenrod[2] = {};
    s.base_steenrod[3] = {};
    s.base_steenrod[5] = {};
    s.base_steenrod[7] = {};
    s.fiber_dim = 2;
    s.euler = pow1(1);  // e = x
    s.orientation[2] = {};  // Sq^1 u = 0; Sq^2 u = e.u is forced
    s.orientation[3] = {};
    s.orientation[5] = {};
    s.orientation[7] = {};
    // no massey block: the sphere-bundle relation requires u^2 = 0
    return s;
}

} // namespace builtin_detail

inline std::vector<std::string> SpaceSpec::builtin_names() {
    return {"cpinf-eta-plus-r", "spin3", "spin2-suspension", "sphere-3", "sphere-4",
            "cpinf-eta"};
}

inline SpaceSpec SpaceSpec::builtin(const std::string& name) {
    using namespace builtin_detail;
    if (name == "cpinf-eta-plus-r") return cpinf_eta_plus_r();
    if (name == "spin3") return spin3();
    if (name == "spin2-suspension") return spin2_suspension();
    if (name == "cpinf-eta") return cpinf_eta();
    if (name.rfind("sphere-", 0) == 0) {
        const std::string tail = name.substr(7);
        try {
            std::size_t used = 0;
            int n = std::stoi(tail, &used);
            if (used == tail.size() && n >= 2) return sphere(n);
        } catch (...) {
        }
        throw schema_error("builtin '" + name + "': sphere-<n> requires an integer n >= 2");
    }
    throw schema_error("unknown builtin space '" + name + "'");
}

inline SpaceSpec SpaceSpec::load(const std::string& name_or_path) {
    try {
        return builtin(name_or_path);
    } catch (const schema_error&) {
        std::ifstream probe(name_or_path);
        if (probe) return load_file(name_or_path);
        throw;
    }
}

} // namespace loopcoh
