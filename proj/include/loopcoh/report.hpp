#pragma once

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "loopcoh/spacespec.hpp"

namespace loopcoh {

/// Resolved invocation parameters for one report.
struct RunOptions {
    std::vector<std::uint32_t> primes;
    int max_degree = 24;
    std::set<std::uint32_t> excluded;  // local-global: the inverted primes S
};

namespace reportio {

inline json json_integer(const Integer& v) {
    if (v.fits_slong_p()) return static_cast<long long>(v.get_si());
    return v.get_str();  // decimal string beyond 64 bits
}

inline json class_json(const Class& c) {
    json j;
    j["terms"] = specio::raw_class_to_json(c.to_raw());
    j["text"] = c.str();
    return j;
}

inline json counts_json(const GeneratorCounts& g) {
    json j;
    j["shape"] = shape_name(g.shape);
    json arr = json::array();
    for (const auto& [d, c] : g.counts)
        arr.push_back(json{{"count", json_integer(c)}, {"degree", d}});
    j["by_degree"] = std::move(arr);
    return j;
}

inline json series_json(const PoincareSeries& s) {
    json arr = json::array();
    for (int d = 0; d <= s.truncation(); ++d)
        arr.push_back(json{{"degree", d}, {"dim", json_integer(s.at(d))}});
    return arr;
}

inline json evidence_json(const Evidence& ev) {
    json j;
    j["prime"] = ev.prime;
    j["fiber_dim"] = ev.fiber_dim;
    j["euler_zero"] = ev.euler_zero;
    j["nilpotent_free"] = ev.nilpotent_free;
    j["wu_applicable"] = ev.wu_applicable;
    if (ev.wu_applicable) j["wu_zero"] = ev.wu_zero;
    if (ev.prime == 0) j["reduced_odd_concentrated"] = ev.rational_odd_concentrated;
    return j;
}

inline json header(const std::string& command, const SpaceSpec& spec, const RunOptions& opt) {
    json j;
    j["schema"] = "loopcoh-report/1";
    j["command"] = command;
    j["space"] = spec.name;
    j["max_degree"] = opt.max_degree;
    return j;
}

} // namespace reportio

inline json report_classify(const SpaceSpec& spec, const RunOptions& opt) {
    using namespace reportio;
    json j = header("classify", spec, opt);
    json results = json::array();
    for (std::uint32_t p : opt.primes) {
        auto rs = spec.realize(p, opt.max_degree);
        Classification cls = classify(*rs.module, rs.report_degree);
        json r;
        r["prime"] = p;
        r["verdict"] = verdict_name(cls.verdict);
        r["evidence"] = evidence_json(cls.evidence);
        if (cls.counts) r["generators"] = counts_json(*cls.counts);
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    return j;
}

inline json report_series(const SpaceSpec& spec, const RunOptions& opt) {
    using namespace reportio;
    json j = header("series", spec, opt);
    json results = json::array();
    for (std::uint32_t p : opt.primes) {
        auto rs = spec.realize(p, opt.max_degree);
        json r;
        r["prime"] = p;
        r["series"] = series_json(loop_series(*rs.module, rs.report_degree));
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    return j;
}

inline json report_generators(const SpaceSpec& spec, const RunOptions& opt) {
    using namespace reportio;
    json j = header("generators", spec, opt);
    json results = json::array();
    for (std::uint32_t p : opt.primes) {
        auto rs = spec.realize(p, opt.max_degree);
        Classification cls = classify(*rs.module, rs.report_degree);
        if (!cls.counts)
            throw hypothesis_error("generators: no structure verdict at p = " + std::to_string(p) +
                                   " (the verdict theorems need a zero Euler class and, for a "
                                   "polynomial verdict, a nilpotent-free base)");
        json r;
        r["prime"] = p;
        r["verdict"] = verdict_name(cls.verdict);
        r["generators"] = counts_json(*cls.counts);
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    return j;
}

inline json report_e2(const SpaceSpec& spec, const RunOptions& opt) {
    using namespace reportio;
    json j = header("e2", spec, opt);
    json results = json::array();
    for (std::uint32_t p : opt.primes) {
        auto rs = spec.realize(p, opt.max_degree);
        BarComplex bc(*rs.module);
        E2Page page = e2_page(bc, rs.report_degree);
        json r;
        r["prime"] = p;
        r["collapse"] = page.collapse;
        json bids = json::array();
        for (const auto& [st, d] : page.dims)
            bids.push_back(json{{"dim", d}, {"s", st.first}, {"t", st.second}});
        r["bidegrees"] = std::move(bids);
        json totals = json::array();
        for (int d = 0; d <= rs.report_degree; ++d)
            totals.push_back(json{{"degree", d}, {"dim", page.total(d)}});
        r["totals"] = std::move(totals);
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    return j;
}

inline json report_massey(const SpaceSpec& spec, const RunOptions& opt) {
    using namespace reportio;
    json j = header("massey", spec, opt);
    json results = json::array();
    for (std::uint32_t p : opt.primes) {
        auto rs = spec.realize(p, opt.max_degree);
        if (!rs.massey)
            throw hypothesis_error(
                "massey: space '" + spec.name + "' declares no sphere-bundle relation; the "
                "relation v^2 = s + t v presumes a trivial orientation square (u^2 = 0)");
        const ThomModule& T = *rs.module;
        const MasseyData& M = *rs.massey;
        json r;
        r["prime"] = p;
        r["s"] = class_json(M.s);
        r["t"] = class_json(M.t);
        const bool wu_ok = p == 2 || (p > 2 && T.fiber_dim() % 2 == 1);
        if (wu_ok) {
            Class wu = wu_class(T);
            r["wu_class"] = class_json(wu);
            if (p == 2 && T.fiber_dim() % 2 == 1)
                r["consistent"] = massey_consistency(T, M);
            else
                r["consistent"] = nullptr;
            // only at p = 2 does the Wu class sit in the degree of t
            if (p == 2) {
                MasseyData moved = massey_transform(M, wu, T.fiber_dim() % 2 == 1);
                r["transform_by_wu"] =
                    json{{"s", class_json(moved.s)}, {"t", class_json(moved.t)}};
            }
        } else {
            r["wu_class"] = nullptr;
            r["consistent"] = nullptr;
        }
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    return j;
}

inline json report_split_check(const SpaceSpec& spec, const RunOptions& opt) {
    using namespace reportio;
    json j = header("split-check", spec, opt);
    json results = json::array();
    for (std::uint32_t p : opt.primes) {
        auto rs = spec.realize(p, opt.max_degree);
        json r;
        r["prime"] = p;
        r["holds"] = splitting_check(*rs.module, rs.report_degree);
        r["loop_series"] = series_json(loop_series(*rs.module, rs.report_degree));
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    return j;
}

inline json report_local_global(const SpaceSpec& spec, const RunOptions& opt) {
    using namespace reportio;
    json j = header("local-global", spec, opt);
    std::vector<std::pair<std::uint32_t, Classification>> sampled;
    for (std::uint32_t p : opt.primes) {
        if (opt.excluded.count(p))
            throw std::invalid_argument("local-global: prime " + std::to_string(p) +
                                        " both sampled and excluded");
        auto rs = spec.realize(p, opt.max_degree);
        sampled.emplace_back(p, classify(*rs.module, rs.report_degree));
    }
    LocalGlobalResult lg = local_global(sampled, opt.excluded);
    j["ring"] = lg.ring;
    j["polynomial"] = lg.polynomial;
    if (lg.common) j["generators"] = counts_json(*lg.common);
    if (!lg.detail.empty()) j["detail"] = lg.detail;
    json sampled_json = json::array();
    for (const auto& [p, cls] : sampled)
        sampled_json.push_back(json{{"prime", p}, {"verdict", verdict_name(cls.verdict)}});
    j["sampled"] = std::move(sampled_json);
    json excl = json::array();
    for (std::uint32_t p : opt.excluded) {
        json e;
        e["prime"] = p;
        try {
            auto rs = spec.realize(p, opt.max_degree);
            e["verdict"] = verdict_name(classify(*rs.module, rs.report_degree).verdict);
        } catch (const schema_error&) {
            e["verdict"] = "no data";
        }
        excl.push_back(std::move(e));
    }
    j["excluded"] = std::move(excl);
    return j;
}

inline json run_command(const std::string& command, const SpaceSpec& spec, const RunOptions& opt) {
    if (command == "classify") return report_classify(spec, opt);
    if (command == "e2") return report_e2(spec, opt);
    if (command == "series") return report_series(spec, opt);
    if (command == "generators") return report_generators(spec, opt);
    if (command == "massey") return report_massey(spec, opt);
    if (command == "split-check") return report_split_check(spec, opt);
    if (command == "local-global") return report_local_global(spec, opt);
    throw std::invalid_argument("unknown command '" + command + "'");
}

namespace reportio {

inline std::string pad(const std::string& s, std::size_t w) {
    return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

inline std::string counts_text(const json& g) {
    std::ostringstream out;
    out << "  shape: " << g["shape"].get<std::string>() << "\n";
    out << "  generators by degree:";
    if (g["by_degree"].empty()) out << " (none up to the truncation)";
    for (const auto& e : g["by_degree"])
        out << " " << e["degree"] << ":" << e["count"];
    out << "\n";
    return out.str();
}

inline std::string series_text(const json& arr) {
    std::ostringstream out;
    out << "  degree:";
    for (const auto& e : arr) out << " " << e["degree"].get<int>();
    out << "\n  dim:   ";
    for (const auto& e : arr) out << " " << e["dim"];
    out << "\n";
    return out.str();
}

inline std::string class_text(const json& c) {
    return c.is_null() ? "n/a" : c["text"].get<std::string>();
}

} // namespace reportio

/// Aligned-text rendering of a JSON report.
inline std::string render_text(const json& report) {
    using namespace reportio;
    std::ostringstream out;
    const std::string cmd = report["command"].get<std::string>();
    out << "space: " << report["space"].get<std::string>()
        << "   command: " << cmd
        << "   max degree: " << report["max_degree"].get<int>() << "\n";

    if (cmd == "local-global") {
        out << "ring: " << report["ring"].get<std::string>() << "\n";
        out << "polynomial: " << (report["polynomial"].get<bool>() ? "yes" : "no") << "\n";
        if (report.contains("detail"))
            out << "detail: " << report["detail"].get<std::string>() << "\n";
        out << "sampled:";
        for (const auto& e : report["sampled"])
            out << " p=" << e["prime"] << " -> " << e["verdict"].get<std::string>() << ";";
        out << "\n";
        if (!report["excluded"].empty()) {
            out << "excluded:";
            for (const auto& e : report["excluded"])
                out << " p=" << e["prime"] << " -> " << e["verdict"].get<std::string>() << ";";
            out << "\n";
        }
        if (report.contains("generators")) out << counts_text(report["generators"]);
        return out.str();
    }

    for (const auto& r : report["results"]) {
        out << "p = " << r["prime"] << ":\n";
        if (cmd == "classify") {
            out << "  verdict: " << r["verdict"].get<std::string>() << "\n";
            const json& ev = r["evidence"];
            out << "  euler class zero: " << (ev["euler_zero"].get<bool>() ? "yes" : "no")
                << ", nilpotent-free base: " << (ev["nilpotent_free"].get<bool>() ? "yes" : "no");
            if (ev.contains("wu_zero"))
                out << ", wu class zero: " << (ev["wu_zero"].get<bool>() ? "yes" : "no");
            out << "\n";
            if (r.contains("generators")) out << counts_text(r["generators"]);
        } else if (cmd == "series") {
            out << series_text(r["series"]);
        } else if (cmd == "generators") {
            out << "  verdict: " << r["verdict"].get<std::string>() << "\n";
            out << counts_text(r["generators"]);
        } else if (cmd == "e2") {
            out << "  collapse: " << (r["collapse"].get<bool>() ? "yes" : "no") << "\n";
            out << "  nonzero bidegrees (s, t) -> dim:";
            for (const auto& b : r["bidegrees"])
                out << " (" << b["s"] << "," << b["t"] << ")->" << b["dim"] << ";";
            out << "\n  totals by degree:\n" << series_text(r["totals"]);
        } else if (cmd == "massey") {
            out << "  relation: v^2 = (" << class_text(r["s"]) << ") + (" << class_text(r["t"])
                << ") v\n";
            out << "  wu class: " << class_text(r["wu_class"]) << "\n";
            if (!r["consistent"].is_null())
                out << "  t equals wu class: " << (r["consistent"].get<bool>() ? "yes" : "no")
                    << "\n";
            if (r.contains("transform_by_wu"))
                out << "  after v -> v + wu: s' = " << class_text(r["transform_by_wu"]["s"])
                    << ", t' = " << class_text(r["transform_by_wu"]["t"]) << "\n";
        } else if (cmd == "split-check") {
            out << "  splitting identity holds: " << (r["holds"].get<bool>() ? "yes" : "no")
                << "\n";
            out << series_text(r["loop_series"]);
        }
    }
    return out.str();
}

/// True when any per-prime result reports an unknown verdict (used by the
/// CLI's strict mode).
inline bool report_has_unknown(const json& report) {
    if (!report.contains("results")) return false;
    for (const auto& r : report["results"])
        if (r.contains("verdict") && r["verdict"] == "unknown") return true;
    return false;
}

} // namespace loopcoh
