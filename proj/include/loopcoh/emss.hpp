#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "loopcoh/bar.hpp"
#include "loopcoh/series.hpp"

namespace loopcoh {

enum class Verdict { Polynomial, Exterior, PTruncated, RationalMixed, Unknown };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Polynomial: return "polynomial";
        case Verdict::Exterior: return "exterior";
        case Verdict::PTruncated: return "p-truncated";
        case Verdict::RationalMixed: return "rational-mixed";
        case Verdict::Unknown: return "unknown";
    }
    return "?";
}

/// The facts the decision table consulted, for reporting.
struct Evidence {
    std::uint32_t prime = 2;
    int fiber_dim = 0;
    bool euler_zero = false;
    bool wu_applicable = false;  // p = 2, or p odd with odd fiber dimension
    bool wu_zero = false;        // meaningful only when applicable
    bool nilpotent_free = false;
    bool rational_odd_concentrated = false;  // p = 0 only
};

/// Structure verdict for the loop-space cohomology, with the generator data
/// that rebuilds its dimension series when the verdict is definite.
struct Classification {
    Verdict verdict = Verdict::Unknown;
    Evidence evidence;
    std::optional<GeneratorCounts> counts;
};

/// The second page collapses exactly when the orientation square u^2 = e.u
/// vanishes, i.e. when the Euler class is zero.
inline bool collapse_case(const ThomModule& T) { return T.euler().is_zero(); }

/// Dimension series of the loop-space cohomology in the collapse case: the
/// free algebra on the desuspended reduced module, 1/(1 - t^{n-1} P_B(t)).
inline PoincareSeries loop_series(const ThomModule& T, int truncation) {
    if (!collapse_case(T))
        throw hypothesis_error(
            "loop_series: requires the collapse hypothesis u^2 = 0 (zero Euler class)");
    const int shift = T.fiber_dim() - 1;
    PoincareSeries g(truncation);
    for (int d = shift; d <= truncation; ++d)
        g.set(d, T.base().dim(d - shift));
    return geometric_series(g);
}

/// Decision table over the verdict theorems. Hypothesis failures yield
/// Unknown rather than an extrapolated answer.
inline Classification classify(const ThomModule& T, int truncation) {
    const std::uint32_t p = T.prime();
    const int n = T.fiber_dim();
    Classification out;
    Evidence& ev = out.evidence;
    ev.prime = p;
    ev.fiber_dim = n;
    ev.euler_zero = collapse_case(T);
    ev.nilpotent_free = is_nilpotent_free(T.base());

    if (!ev.euler_zero) {
        out.verdict = Verdict::Unknown;
        return out;
    }

    if (p == 2) {
        ev.wu_applicable = true;
        ev.wu_zero = wu_class(T).is_zero();
        if (!ev.wu_zero && ev.nilpotent_free)
            out.verdict = Verdict::Polynomial;
        else if (ev.wu_zero)
            out.verdict = Verdict::Exterior;
        else
            out.verdict = Verdict::Unknown;
    } else if (p > 2) {
        if (n % 2 == 0) {
            out.verdict = Verdict::Unknown;
            return out;
        }
        ev.wu_applicable = true;
        ev.wu_zero = wu_class(T).is_zero();
        if (!ev.wu_zero && ev.nilpotent_free)
            out.verdict = Verdict::Polynomial;
        else if (ev.wu_zero)
            out.verdict = Verdict::PTruncated;
        else
            out.verdict = Verdict::Unknown;
    } else {
        // rationally the loop cohomology is free graded-commutative; it is
        // purely polynomial when the reduced module sits in odd degrees
        bool odd_only = true;
        for (int d = 0; d <= truncation; ++d)
            if (d % 2 == 0 && T.reduced_dim(d) > 0) odd_only = false;
        ev.rational_odd_concentrated = odd_only;
        out.verdict = odd_only ? Verdict::Polynomial : Verdict::RationalMixed;
    }

    if (out.verdict != Verdict::Unknown) {
        Shape shape = Shape::Polynomial;
        switch (out.verdict) {
            case Verdict::Polynomial: shape = Shape::Polynomial; break;
            case Verdict::Exterior: shape = Shape::Exterior; break;
            case Verdict::PTruncated: shape = Shape::TruncatedHeightP; break;
            case Verdict::RationalMixed: shape = Shape::RationalMixed; break;
            case Verdict::Unknown: break;
        }
        out.counts = invert_generators(loop_series(T, truncation), shape, p);
    }
    return out;
}

/// Second-page dimension table, assembled from bar homology bidegree by
/// bidegree; covers every (s,t) with total degree t - s <= max_total.
struct E2Page {
    std::map<std::pair<int, int>, long> dims;  // (s,t) -> dim, nonzero entries
    bool collapse = false;

    long total(int degree) const {
        long acc = 0;
        for (const auto& [st, d] : dims)
            if (st.second - st.first == degree) acc += d;
        return acc;
    }
};

inline E2Page e2_page(const BarComplex& bc, int max_total) {
    const ThomModule& T = bc.module();
    E2Page page;
    page.collapse = collapse_case(T);
    const int n = T.fiber_dim();
    page.dims[{0, 0}] = 1;  // the unit
    for (int s = 1; s * (n - 1) <= max_total; ++s) {
        for (int t = s * n; t - s <= max_total; ++t) {
            if (t > bc.max_internal_degree()) break;
            long d = bc.tor_dim(s, t);
            if (d > 0) page.dims[{s, t}] = d;
        }
    }
    return page;
}

/// The filtration-one column of the second page. In the collapse case the
/// edge map out of it is a monomorphism (split by the looping of the
/// coboundary), and the column is the reduced cohomology shifted by one.
struct EdgeColumn {
    std::map<int, long> dims;  // internal degree t -> dim at (s,t) = (1,t)
    bool injective = false;
};

inline EdgeColumn edge_column(const BarComplex& bc, int max_internal) {
    EdgeColumn out;
    out.injective = collapse_case(bc.module());
    for (int t = 0; t <= std::min(max_internal, bc.max_internal_degree()); ++t) {
        long d = bc.tor_dim(1, t);
        if (d > 0) out.dims[t] = d;
    }
    return out;
}

/// Graded-dimension form of the stable splitting: the sum over k >= 1 of the
/// k-fold smash power of the reduced module, desuspended k times, must match
/// the positive part of the loop series, which in turn must match the Tor
/// totals computed by homology. The three sides come from disjoint code paths.
inline bool splitting_check(const ThomModule& T, int truncation) {
    if (!collapse_case(T))
        throw hypothesis_error(
            "splitting_check: requires the collapse hypothesis u^2 = 0 (zero Euler class)");
    const int n = T.fiber_dim();
    const int kmax = truncation / (n - 1);
    const int big = truncation + kmax;
    if (big > T.base().truncation() + n)
        throw std::invalid_argument("splitting_check: algebra truncation too small");

    // side A: smash powers, shifted down
    const PoincareSeries reduced = T.reduced_series(big);
    PoincareSeries lhs(truncation);
    PoincareSeries power = PoincareSeries::one(big);
    for (int k = 1; k <= kmax; ++k) {
        power = power * reduced;
        for (int d = 0; d <= truncation; ++d)
            if (d + k <= big) lhs.add_term(d, power.at(d + k));
    }

    // side B: loop series
    const PoincareSeries loops = loop_series(T, truncation);
    PoincareSeries rhs = loops - PoincareSeries::one(truncation);
    if (lhs != rhs) return false;

    // side C: Tor totals by homology
    BarComplex bc(T);
    for (int d = 0; d <= truncation; ++d) {
        Integer total = d == 0 ? 1 : 0;
        for (int s = 1; s * (n - 1) <= d; ++s)
            total += bc.tor_dim(s, d + s);
        if (total != loops.at(d)) return false;
    }
    return true;
}

/// Local-global verdict across residue fields.
struct LocalGlobalResult {
    bool polynomial = false;
    std::set<std::uint32_t> inverted;             // the excluded primes S
    std::optional<GeneratorCounts> common;        // when polynomial
    std::string detail;                           // first failure, if any
    std::string ring;                             // e.g. "Z", "Z[1/2]"
};

inline std::string localized_ring_name(const std::set<std::uint32_t>& S) {
    if (S.empty()) return "Z";
    std::string r = "Z[";
    bool first = true;
    for (std::uint32_t p : S) {
        if (!first) r += ",";
        r += "1/" + std::to_string(p);
        first = false;
    }
    return r + "]";
}

/// Polynomiality over Z[S^{-1}] holds exactly when every sampled residue
/// field yields a polynomial verdict with one common generator-count table.
inline LocalGlobalResult local_global(
    const std::vector<std::pair<std::uint32_t, Classification>>& results,
    const std::set<std::uint32_t>& inverted) {
    for (std::uint32_t p : inverted)
        if (p == 0 || !is_prime(p))
            throw std::invalid_argument("local_global: excluded set must consist of primes");
    LocalGlobalResult out;
    out.inverted = inverted;
    out.ring = localized_ring_name(inverted);
    if (results.empty())
        throw std::invalid_argument("local_global: no residue fields sampled");

    for (const auto& [p, cls] : results) {
        if (inverted.count(p))
            throw std::invalid_argument("local_global: prime " + std::to_string(p) +
                                        " is excluded but appears among the results");
        if (cls.counts) {
            for (const auto& [d, c] : cls.counts->counts)
                if (d % 2 == 1)
                    throw std::invalid_argument(
                        "local_global: series not concentrated in even degrees (generator in degree " +
                        std::to_string(d) + " at p = " + std::to_string(p) + ")");
        }
    }

    const std::map<int, Integer>* table = nullptr;
    for (const auto& [p, cls] : results) {
        if (cls.verdict != Verdict::Polynomial) {
            out.detail = "p = " + std::to_string(p) + ": verdict " + verdict_name(cls.verdict);
            return out;
        }
        if (!table) {
            table = &cls.counts->counts;
        } else if (*table != cls.counts->counts) {
            out.detail = "generator tables disagree at p = " + std::to_string(p);
            return out;
        }
    }
    out.polynomial = true;
    GeneratorCounts common;
    common.shape = Shape::Polynomial;
    common.prime = results.front().first;
    common.counts = *table;
    out.common = std::move(common);
    return out;
}

} // namespace loopcoh
