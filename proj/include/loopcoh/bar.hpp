#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "loopcoh/matrix.hpp"
#include "loopcoh/thom.hpp"

namespace loopcoh {

/// A reduced-cohomology basis element of the Thom module, identified by its
/// internal degree and its index in the base monomial basis of degree d - n.
struct Letter {
    int deg = 0;
    int idx = 0;
    auto operator<=>(const Letter&) const = default;
};

/// Bar word [a_1|...|a_s] of basis letters; bidegree (-s, t) with
/// t the sum of the letter degrees and total degree t - s.
struct BarWord {
    std::vector<Letter> letters;

    int length() const { return static_cast<int>(letters.size()); }
    int internal_degree() const {
        int t = 0;
        for (const Letter& l : letters) t += l.deg;
        return t;
    }
    int total_degree() const { return internal_degree() - length(); }

    auto operator<=>(const BarWord&) const = default;
};

/// Bidegree-homogeneous linear combination of bar words.
class BarElement {
public:
    BarElement() = default;

    void add(const BarWord& w, const Scalar& c) {
        if (c.is_zero()) return;
        if (terms_.empty()) {
            s_ = w.length();
            t_ = w.internal_degree();
        } else if (w.length() != s_ || w.internal_degree() != t_) {
            throw invariant_error("BarElement: mixed bidegrees");
        }
        auto [it, inserted] = terms_.emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    const std::map<BarWord, Scalar>& terms() const& { return terms_; }
    // value form keeps range-for over a temporary element well-defined
    std::map<BarWord, Scalar> terms() && { return std::move(terms_); }
    bool is_zero() const { return terms_.empty(); }
    int length() const { return s_; }
    int internal_degree() const { return t_; }

    BarElement operator+(const BarElement& o) const {
        BarElement r = *this;
        for (const auto& [w, c] : o.terms_) r.add(w, c);
        return r;
    }

    BarElement scaled(const Scalar& f) const {
        BarElement r;
        for (const auto& [w, c] : terms_) r.add(w, c * f);
        return r;
    }

    bool operator==(const BarElement& o) const { return terms_ == o.terms_; }
    bool operator!=(const BarElement& o) const { return !(*this == o); }

private:
    std::map<BarWord, Scalar> terms_;
    int s_ = 0, t_ = 0;
};

/// The Thom class x.u behind a letter.
inline ThomClass letter_class(const ThomModule& T, const Letter& l) {
    return ThomClass(T, Class::basis_element(T.base(), l.deg - T.fiber_dim(), l.idx));
}

/// Expansion of a Thom class over the basis letters of its degree.
inline std::vector<std::pair<Letter, Scalar>> expand_letters(const ThomClass& tc) {
    std::vector<std::pair<Letter, Scalar>> out;
    const int d = tc.degree();
    const int dim = tc.mod->reduced_dim(d);
    for (int i = 0; i < dim; ++i) {
        Scalar c = tc.x.coefficient(i);
        if (!c.is_zero()) out.emplace_back(Letter{d, i}, c);
    }
    return out;
}

/// The reduced normalized bar complex of the Thom module: word bases per
/// bidegree, the differential contracting adjacent letters through the cup
/// product, and Tor dimensions by exact homology. Word tables are interned
/// per bidegree, built once and then read-only.
class BarComplex {
public:
    explicit BarComplex(const ThomModule& T)
        : mod_(&T), max_internal_(T.base().truncation() + T.fiber_dim()) {}

    const ThomModule& module() const { return *mod_; }
    int max_internal_degree() const { return max_internal_; }

    /// All length-s words of reduced basis letters with degree sum t, in
    /// lexicographic order on (letter degree, letter index) sequences.
    const std::vector<BarWord>& basis(int s, int t) const {
        if (t > max_internal_)
            throw std::invalid_argument("bar basis: internal degree " + std::to_string(t) +
                                        " beyond truncation " + std::to_string(max_internal_));
        const auto key = std::make_pair(s, t);
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(key, enumerate(s, t)).first->second;
    }

    long dim(int s, int t) const { return static_cast<long>(basis(s, t).size()); }

    int word_index(int s, int t, const BarWord& w) const {
        const auto& b = basis(s, t);
        auto it = std::lower_bound(b.begin(), b.end(), w);
        if (it == b.end() || *it != w) return -1;
        return static_cast<int>(it - b.begin());
    }

    /// d[a_1|...|a_s] = sum_i (-1)^{eps_i} [a_1|...|a_i a_{i+1}|...|a_s]
    /// with eps_i = sum_{j<=i} (|a_j| - 1) + 1; maps (-s,t) to (-s+1,t).
    BarElement differential(const BarWord& w) const {
        BarElement out;
        const int s = w.length();
        const std::uint32_t p = mod_->prime();
        int shifted_prefix = 0;
        for (int i = 0; i + 1 < s; ++i) {
            shifted_prefix += w.letters[static_cast<std::size_t>(i)].deg - 1;
            const Scalar sign = Scalar::sign(p, shifted_prefix + 1);
            ThomClass prod = thom_product(letter_class(*mod_, w.letters[static_cast<std::size_t>(i)]),
                                          letter_class(*mod_, w.letters[static_cast<std::size_t>(i) + 1]));
            if (prod.is_zero()) continue;
            for (const auto& [letter, coeff] : expand_letters(prod)) {
                BarWord nw;
                nw.letters.reserve(static_cast<std::size_t>(s) - 1);
                for (int q = 0; q < i; ++q) nw.letters.push_back(w.letters[static_cast<std::size_t>(q)]);
                nw.letters.push_back(letter);
                for (int q = i + 2; q < s; ++q) nw.letters.push_back(w.letters[static_cast<std::size_t>(q)]);
                out.add(nw, coeff * sign);
            }
        }
        return out;
    }

    /// Matrix of d from bidegree (s,t) to (s-1,t) over the interned bases.
    Matrix differential_matrix(int s, int t) const {
        const auto& domain = basis(s, t);
        const std::size_t rows = s >= 1 ? basis(s - 1, t).size() : 0;
        Matrix m(mod_->prime(), rows, domain.size());
        for (std::size_t j = 0; j < domain.size(); ++j) {
            BarElement img = differential(domain[j]);
            for (const auto& [w, c] : img.terms()) {
                int r = word_index(s - 1, t, w);
                if (r < 0)
                    throw invariant_error("bar differential left the interned basis");
                m.set(static_cast<std::size_t>(r), j, c);
            }
        }
        return m;
    }

    /// Tor dimension at bidegree (-s,t): homology of the bar complex there.
    long tor_dim(int s, int t) const {
        if (s < 0) return 0;
        try {
            Matrix d_out = differential_matrix(s, t);
            Matrix d_in = differential_matrix(s + 1, t);
            return homology_dim(d_in, d_out);
        } catch (const invariant_error& e) {
            throw invariant_error("bar complex at bidegree (s=" + std::to_string(s) +
                                  ", t=" + std::to_string(t) + "): " + e.what());
        }
    }

private:
    std::vector<BarWord> enumerate(int s, int t) const {
        std::vector<BarWord> out;
        if (s < 0 || t < 0) return out;
        const int n = mod_->fiber_dim();
        std::vector<Letter> cur;
        auto rec = [&](auto&& self, int rem_s, int rem_t) -> void {
            if (rem_s == 0) {
                if (rem_t == 0) out.push_back(BarWord{cur});
                return;
            }
            const int dmax = rem_t - n * (rem_s - 1);
            for (int d = n; d <= dmax; ++d) {
                const int dim = mod_->reduced_dim(d);
                for (int idx = 0; idx < dim; ++idx) {
                    cur.push_back(Letter{d, idx});
                    self(self, rem_s - 1, rem_t - d);
                    cur.pop_back();
                }
            }
        };
        rec(rec, s, t);
        return out;
    }

    const ThomModule* mod_;
    int max_internal_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, std::vector<BarWord>> cache_;
};

/// Deconcatenation coproduct: all splits [a_1|..|a_i] (x) [a_{i+1}|..|a_s].
inline std::vector<std::pair<BarWord, BarWord>> coproduct(const BarWord& w) {
    std::vector<std::pair<BarWord, BarWord>> out;
    const int s = w.length();
    for (int i = 0; i <= s; ++i) {
        BarWord l, r;
        l.letters.assign(w.letters.begin(), w.letters.begin() + i);
        r.letters.assign(w.letters.begin() + i, w.letters.end());
        out.emplace_back(std::move(l), std::move(r));
    }
    return out;
}

/// Shuffle product: signed sum over (r,s)-shuffles of the interleavings,
/// the sign counting inversion pairs weighted by shifted letter degrees.
inline BarElement shuffle(const ThomModule& T, const BarWord& w1, const BarWord& w2) {
    BarElement out;
    const int r = w1.length(), s = w2.length();
    const std::uint32_t p = T.prime();

    // iterate over the positions of w1's letters inside the merged word
    std::vector<int> pos(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) pos[static_cast<std::size_t>(i)] = i;
    const int total = r + s;

    auto emit = [&]() {
        std::vector<bool> taken(static_cast<std::size_t>(total), false);
        BarWord merged;
        merged.letters.assign(static_cast<std::size_t>(total), Letter{});
        for (int i = 0; i < r; ++i) {
            merged.letters[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])] =
                w1.letters[static_cast<std::size_t>(i)];
            taken[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])] = true;
        }
        std::vector<int> pos2;
        for (int q = 0; q < total; ++q)
            if (!taken[static_cast<std::size_t>(q)]) pos2.push_back(q);
        for (int j = 0; j < s; ++j)
            merged.letters[static_cast<std::size_t>(pos2[static_cast<std::size_t>(j)])] =
                w2.letters[static_cast<std::size_t>(j)];
        // inversions: pairs (i, j) with the w1 letter placed after the w2 letter
        int parity = 0;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < s; ++j)
                if (pos[static_cast<std::size_t>(i)] > pos2[static_cast<std::size_t>(j)])
                    parity += (w1.letters[static_cast<std::size_t>(i)].deg - 1) *
                              (w2.letters[static_cast<std::size_t>(j)].deg - 1);
        out.add(merged, Scalar::sign(p, parity));
    };

    if (r == 0 || s == 0) {
        BarWord merged = r == 0 ? w2 : w1;
        out.add(merged, Scalar::one(p));
        return out;
    }

    // enumerate ascending position tuples
    while (true) {
        emit();
        int i = r - 1;
        while (i >= 0 && pos[static_cast<std::size_t>(i)] == total - r + i) --i;
        if (i < 0) break;
        ++pos[static_cast<std::size_t>(i)];
        for (int q = i + 1; q < r; ++q)
            pos[static_cast<std::size_t>(q)] = pos[static_cast<std::size_t>(q) - 1] + 1;
    }
    return out;
}

/// Bilinear extension of the shuffle to elements.
inline BarElement shuffle(const ThomModule& T, const BarElement& e1, const BarElement& e2) {
    BarElement out;
    for (const auto& [w1, c1] : e1.terms())
        for (const auto& [w2, c2] : e2.terms()) {
            BarElement part = shuffle(T, w1, w2).scaled(c1 * c2);
            out = out + part;
        }
    return out;
}

/// Steenrod action on a bar word: the operation distributes over the letters
/// through all compositions of its index,
/// Sq^s[x_1|...|x_k] = sum_{s_1+...+s_k=s} [Sq^{s_1}x_1|...|Sq^{s_k}x_k]
/// (and the P-analogue). Stated on the bar identification of the second
/// page, which requires the collapse hypothesis (zero Euler class).
inline BarElement steenrod_bar(const ThomModule& T, const SteenrodOp& op, const BarWord& w) {
    detail::check_op(op, T.prime());
    if (op.kind == OpKind::Bockstein)
        throw std::invalid_argument("steenrod_bar: only Sq/P act letterwise");
    if (!T.euler().is_zero())
        throw hypothesis_error(
            "steenrod_bar: the letterwise action is only defined on the bar "
            "identification of the second page, which requires u^2 = 0 (zero Euler class)");

    BarElement out;
    const std::uint32_t p = T.prime();
    struct Partial {
        std::vector<Letter> letters;
        Scalar coeff;
        int used;
    };
    std::vector<Partial> states{{{}, Scalar::one(p), 0}};
    for (const Letter& l : w.letters) {
        std::vector<Partial> next;
        for (const Partial& st : states) {
            for (int b = 0; b + st.used <= op.index; ++b) {
                ThomClass tc = steenrod_thom(SteenrodOp{op.kind, b}, letter_class(T, l));
                if (tc.is_zero()) continue;
                for (const auto& [letter, c] : expand_letters(tc)) {
                    Partial ns = st;
                    ns.letters.push_back(letter);
                    ns.coeff = st.coeff * c;
                    ns.used = st.used + b;
                    next.push_back(std::move(ns));
                }
            }
        }
        states = std::move(next);
    }
    for (const Partial& st : states)
        if (st.used == op.index) out.add(BarWord{st.letters}, st.coeff);
    return out;
}

/// Additive extension to elements.
inline BarElement steenrod_bar(const ThomModule& T, const SteenrodOp& op, const BarElement& e) {
    BarElement out;
    for (const auto& [w, c] : e.terms())
        out = out + steenrod_bar(T, op, w).scaled(c);
    return out;
}

} // namespace loopcoh
