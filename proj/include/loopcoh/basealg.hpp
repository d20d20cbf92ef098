#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "loopcoh/errors.hpp"
#include "loopcoh/scalar.hpp"
#include "loopcoh/series.hpp"

namespace loopcoh {

/// One declared algebra generator. height 0 means polynomial;
/// height h >= 2 imposes g^h = 0 (h = 2 is the exterior case).
struct GenDecl {
    std::string name;
    int degree = 1;
    int height = 0;
};

using Monomial = std::vector<int>;  // exponent vector in declaration order

/// Serialized class data: list of (exponent vector, integer coefficient).
using RawClass = std::vector<std::pair<std::vector<int>, long long>>;

/// Generator-level Steenrod data, in serialized form. For p = 2 only `sq` is
/// meaningful; for odd p, `pow` holds the P^i tables and `beta` the Bockstein.
struct SteenrodTables {
    std::map<std::string, std::map<int, RawClass>> sq;
    std::map<std::string, std::map<int, RawClass>> pow;
    std::map<std::string, RawClass> beta;
};

enum class OpKind { Sq, P, Bockstein };

struct SteenrodOp {
    OpKind kind = OpKind::Sq;
    int index = 0;  // ignored for the Bockstein
};

class Class;

/// Finite-type graded-commutative algebra over F_p or Q, presented by
/// generators whose only relations are truncation heights. Monomial bases are
/// built eagerly for every degree up to the truncation, so a constructed
/// presentation is immutable and safe to read concurrently.
class AlgebraPresentation {
public:
    AlgebraPresentation(std::uint32_t p, std::vector<GenDecl> gens, int truncation,
                        const SteenrodTables& tables = {});

    AlgebraPresentation(const AlgebraPresentation&) = delete;
    AlgebraPresentation& operator=(const AlgebraPresentation&) = delete;

    std::uint32_t prime() const { return p_; }
    int truncation() const { return trunc_; }
    const std::vector<GenDecl>& generators() const { return gens_; }

    int generator_index(const std::string& name) const {
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].name == name) return static_cast<int>(i);
        return -1;
    }

    /// All degree-d monomials respecting truncation heights, in descending
    /// graded-lex order on exponent vectors. Empty for d < 0; error for d > N.
    const std::vector<Monomial>& monomial_basis(int d) const {
        static const std::vector<Monomial> empty;
        if (d < 0) return empty;
        if (d > trunc_)
            throw std::invalid_argument("monomial_basis: degree " + std::to_string(d) +
                                        " beyond truncation " + std::to_string(trunc_));
        return basis_[static_cast<std::size_t>(d)];
    }

    int dim(int d) const {
        if (d < 0) return 0;
        return static_cast<int>(monomial_basis(d).size());
    }

    /// Index of a monomial in its degree basis, -1 if it is not a basis
    /// element (an exponent at or above the generator's height).
    int monomial_index(int d, const Monomial& m) const {
        if (d < 0 || d > trunc_) return -1;
        const auto& tbl = index_[static_cast<std::size_t>(d)];
        auto it = tbl.find(m);
        return it == tbl.end() ? -1 : it->second;
    }

    int monomial_degree(const Monomial& m) const {
        int d = 0;
        for (std::size_t i = 0; i < gens_.size(); ++i) d += m[i] * gens_[i].degree;
        return d;
    }

    PoincareSeries poincare_series(int truncation) const {
        if (truncation > trunc_)
            throw std::invalid_argument("poincare_series: beyond algebra truncation");
        PoincareSeries s(truncation);
        for (int d = 0; d <= truncation; ++d) s.set(d, dim(d));
        return s;
    }

    std::string monomial_str(const Monomial& m) const;

    // generator Steenrod data (converted from the raw tables)
    Class sq_on_generator(int gen, int i) const;
    Class pow_on_generator(int gen, int i) const;
    Class beta_on_generator(int gen) const;

private:
    void build_bases();
    void install_tables(const SteenrodTables& tables);

    std::uint32_t p_;
    int trunc_;
    std::vector<GenDecl> gens_;
    std::vector<std::vector<Monomial>> basis_;
    std::vector<std::map<Monomial, int>> index_;
    // per generator: op index -> value class
    std::vector<std::map<int, Class>> sq_tbl_, pow_tbl_;
    std::vector<Class> beta_tbl_;
};

/// Homogeneous element of an AlgebraPresentation, stored densely over the
/// monomial basis of its degree. The zero class is representable in any
/// degree (including degrees with empty basis).
class Class {
public:
    Class() : alg_(nullptr), degree_(0) {}

    Class(const AlgebraPresentation* alg, int degree)
        : alg_(alg), degree_(degree),
          coeff_(alg ? static_cast<std::size_t>(alg->dim(degree)) : 0,
                 Scalar::zero(alg ? alg->prime() : 0)) {}

    static Class zero(const AlgebraPresentation& alg, int degree) {
        return Class(&alg, degree);
    }

    static Class unit(const AlgebraPresentation& alg) {
        Class c(&alg, 0);
        c.coeff_[0] = Scalar::one(alg.prime());
        return c;
    }

    static Class generator(const AlgebraPresentation& alg, int gen_index) {
        const auto& gens = alg.generators();
        Class c(&alg, gens.at(static_cast<std::size_t>(gen_index)).degree);
        Monomial m(gens.size(), 0);
        m[static_cast<std::size_t>(gen_index)] = 1;
        int idx = alg.monomial_index(c.degree_, m);
        c.coeff_.at(static_cast<std::size_t>(idx)) = Scalar::one(alg.prime());
        return c;
    }

    static Class basis_element(const AlgebraPresentation& alg, int degree, int index) {
        Class c(&alg, degree);
        c.coeff_.at(static_cast<std::size_t>(index)) = Scalar::one(alg.prime());
        return c;
    }

    static Class from_raw(const AlgebraPresentation& alg, int degree, const RawClass& raw,
                          const std::string& context);

    const AlgebraPresentation* algebra() const { return alg_; }
    int degree() const { return degree_; }
    const std::vector<Scalar>& coefficients() const { return coeff_; }

    Scalar coefficient(int i) const { return coeff_.at(static_cast<std::size_t>(i)); }

    bool is_zero() const {
        for (const Scalar& s : coeff_)
            if (!s.is_zero()) return false;
        return true;
    }

    Class operator+(const Class& o) const {
        match(o);
        Class r = *this;
        for (std::size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i] += o.coeff_[i];
        return r;
    }

    Class operator-() const {
        Class r = *this;
        for (Scalar& s : r.coeff_) s = -s;
        return r;
    }

    Class operator-(const Class& o) const { return *this + (-o); }

    Class scaled(const Scalar& f) const {
        Class r = *this;
        for (Scalar& s : r.coeff_) s = s * f;
        return r;
    }

    /// Graded-commutative product with Koszul signs and height relations.
    Class operator*(const Class& o) const;

    bool operator==(const Class& o) const {
        match(o);
        return coeff_ == o.coeff_;
    }
    bool operator!=(const Class& o) const { return !(*this == o); }

    RawClass to_raw() const;
    std::string str() const;

private:
    void match(const Class& o) const {
        if (alg_ != o.alg_)
            throw invariant_error("Class: mixed presentations");
        if (degree_ != o.degree_)
            throw invariant_error("Class: degree mismatch " + std::to_string(degree_) +
                                  " vs " + std::to_string(o.degree_));
    }

    const AlgebraPresentation* alg_;
    int degree_;
    std::vector<Scalar> coeff_;
};

namespace detail {

/// Koszul sign of merging exponent vectors a (left) and b (right): each
/// odd-degree generator of b passes the later odd-degree generators of a.
inline int koszul_merge_parity(const std::vector<GenDecl>& gens, const Monomial& a,
                               const Monomial& b) {
    int parity = 0;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].degree % 2 == 0 || b[i] % 2 == 0) continue;
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            if (gens[j].degree % 2 == 1) parity += b[i] * a[j];
    }
    return parity % 2;
}

} // namespace detail

inline Class Class::operator*(const Class& o) const {
    if (alg_ != o.alg_)
        throw invariant_error("Class: product across presentations");
    const AlgebraPresentation& A = *alg_;
    const int d = degree_ + o.degree_;
    if (d > A.truncation())
        throw std::invalid_argument("Class: product degree " + std::to_string(d) +
                                    " beyond truncation");
    Class r(&A, d);
    if (degree_ < 0 || o.degree_ < 0) return r;  // zero factor
    const auto& bl = A.monomial_basis(degree_);
    const auto& br = A.monomial_basis(o.degree_);
    const auto& gens = A.generators();
    for (std::size_t i = 0; i < bl.size(); ++i) {
        if (coeff_[i].is_zero()) continue;
        for (std::size_t j = 0; j < br.size(); ++j) {
            if (o.coeff_[j].is_zero()) continue;
            Monomial m(gens.size());
            bool dead = false;
            for (std::size_t g = 0; g < gens.size(); ++g) {
                m[g] = bl[i][g] + br[j][g];
                if (gens[g].height > 0 && m[g] >= gens[g].height) { dead = true; break; }
            }
            if (dead) continue;
            int idx = A.monomial_index(d, m);
            if (idx < 0)
                throw invariant_error("Class: product monomial missing from basis");
            Scalar term = coeff_[i] * o.coeff_[j];
            if (detail::koszul_merge_parity(gens, bl[i], br[j]) == 1) term = -term;
            r.coeff_[static_cast<std::size_t>(idx)] += term;
        }
    }
    return r;
}

inline Class Class::from_raw(const AlgebraPresentation& alg, int degree, const RawClass& raw,
                             const std::string& context) {
    Class c(&alg, degree);
    for (const auto& [exps, coeff] : raw) {
        if (exps.size() != alg.generators().size())
            throw schema_error(context + ": exponent vector length " +
                               std::to_string(exps.size()) + ", expected " +
                               std::to_string(alg.generators().size()));
        for (int e : exps)
            if (e < 0) throw schema_error(context + ": negative exponent");
        Monomial m(exps.begin(), exps.end());
        int d = alg.monomial_degree(m);
        if (d != degree)
            throw schema_error(context + ": monomial degree " + std::to_string(d) +
                               ", expected " + std::to_string(degree));
        int idx = alg.monomial_index(degree, m);
        if (idx < 0)
            throw schema_error(context + ": monomial is zero by a height relation");
        c.coeff_[static_cast<std::size_t>(idx)] += Scalar::of(alg.prime(), coeff);
    }
    return c;
}

inline RawClass Class::to_raw() const {
    RawClass raw;
    if (!alg_ || degree_ < 0) return raw;
    const auto& basis = alg_->monomial_basis(degree_);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (coeff_[i].is_zero()) continue;
        if (alg_->prime() == 0) {
            // raw form is integral; callers needing exact rationals use str()
            mpq_class q = coeff_[i].rat();
            if (q.get_den() != 1)
                throw invariant_error("Class: non-integral rational in raw serialization");
            raw.emplace_back(std::vector<int>(basis[i].begin(), basis[i].end()),
                             static_cast<long long>(q.get_num().get_si()));
        } else {
            raw.emplace_back(std::vector<int>(basis[i].begin(), basis[i].end()),
                             coeff_[i].residue());
        }
    }
    return raw;
}

inline std::string AlgebraPresentation::monomial_str(const Monomial& m) const {
    std::string s;
    for (std::size_t g = 0; g < gens_.size(); ++g) {
        if (m[g] == 0) continue;
        if (!s.empty()) s += "*";
        s += gens_[g].name;
        if (m[g] > 1) s += "^" + std::to_string(m[g]);
    }
    return s.empty() ? "1" : s;
}

inline std::string Class::str() const {
    if (!alg_ || degree_ < 0 || is_zero()) return "0";
    std::string s;
    const auto& basis = alg_->monomial_basis(degree_);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (coeff_[i].is_zero()) continue;
        if (!s.empty()) s += " + ";
        const bool is_one = coeff_[i] == Scalar::one(alg_->prime());
        const std::string mon = alg_->monomial_str(basis[i]);
        if (is_one && mon != "1")
            s += mon;
        else if (mon == "1")
            s += coeff_[i].str();
        else
            s += coeff_[i].str() + "*" + mon;
    }
    return s;
}

inline AlgebraPresentation::AlgebraPresentation(std::uint32_t p, std::vector<GenDecl> gens,
                                                int truncation, const SteenrodTables& tables)
    : p_(p), trunc_(truncation), gens_(std::move(gens)) {
    require_characteristic(p_);
    if (trunc_ < 0) throw schema_error("truncation must be nonnegative");
    std::map<std::string, int> seen;
    for (const auto& g : gens_) {
        if (g.name.empty()) throw schema_error("generator with empty name");
        if (seen.count(g.name)) throw schema_error("duplicate generator '" + g.name + "'");
        seen[g.name] = 1;
        if (g.degree < 1)
            throw schema_error("generator '" + g.name + "': degree must be positive");
        if (g.height != 0 && g.height < 2)
            throw schema_error("generator '" + g.name + "': height must be 0 or >= 2");
        // graded commutativity away from characteristic 2 forces odd squares to vanish
        if (p_ != 2 && g.degree % 2 == 1 && g.height != 2)
            throw schema_error("generator '" + g.name +
                               "': odd-degree generators must be exterior when p != 2");
    }
    build_bases();
    install_tables(tables);
}

inline void AlgebraPresentation::build_bases() {
    basis_.assign(static_cast<std::size_t>(trunc_) + 1, {});
    index_.assign(static_cast<std::size_t>(trunc_) + 1, {});
    // descending graded-lex enumeration per degree
    Monomial cur(gens_.size(), 0);
    auto rec = [&](auto&& self, std::size_t g, int remaining) -> void {
        if (g == gens_.size()) {
            if (remaining == 0) {
                int d = monomial_degree(cur);
                auto& tbl = index_[static_cast<std::size_t>(d)];
                tbl.emplace(cur, static_cast<int>(basis_[static_cast<std::size_t>(d)].size()));
                basis_[static_cast<std::size_t>(d)].push_back(cur);
            }
            return;
        }
        int cap = remaining / gens_[g].degree;
        if (gens_[g].height > 0) cap = std::min(cap, gens_[g].height - 1);
        for (int e = cap; e >= 0; --e) {
            cur[g] = e;
            self(self, g + 1, remaining - e * gens_[g].degree);
        }
        cur[g] = 0;
    };
    for (int d = 0; d <= trunc_; ++d) rec(rec, 0, d);
}

inline void AlgebraPresentation::install_tables(const SteenrodTables& tables) {
    sq_tbl_.assign(gens_.size(), {});
    pow_tbl_.assign(gens_.size(), {});
    beta_tbl_.assign(gens_.size(), Class());

    auto gen_of = [&](const std::string& name, const char* where) {
        int g = generator_index(name);
        if (g < 0)
            throw schema_error(std::string(where) + ": unknown generator '" + name + "'");
        return g;
    };

    if (!tables.sq.empty() && p_ != 2)
        throw schema_error("base.steenrod: Sq tables require p = 2");
    if ((!tables.pow.empty() || !tables.beta.empty()) && (p_ == 2 || p_ == 0))
        throw schema_error("base.steenrod: P/beta tables require an odd prime");

    for (const auto& [name, tbl] : tables.sq) {
        int g = gen_of(name, "base.steenrod.sq");
        const int dg = gens_[static_cast<std::size_t>(g)].degree;
        for (const auto& [i, raw] : tbl) {
            if (i <= 0 || i >= dg)
                throw schema_error("base.steenrod.sq." + name + ": index " + std::to_string(i) +
                                   " outside 0 < i < " + std::to_string(dg) +
                                   " (the rest is forced by instability)");
            if (dg + i > trunc_) continue;  // beyond truncation: value is unobservable
            sq_tbl_[static_cast<std::size_t>(g)].emplace(
                i, Class::from_raw(*this, dg + i, raw, "base.steenrod.sq." + name));
        }
    }
    for (const auto& [name, tbl] : tables.pow) {
        int g = gen_of(name, "base.steenrod.pow");
        const int dg = gens_[static_cast<std::size_t>(g)].degree;
        for (const auto& [i, raw] : tbl) {
            if (!(i > 0 && 2 * i < dg))
                throw schema_error("base.steenrod.pow." + name + ": index " + std::to_string(i) +
                                   " outside 0 < 2i < " + std::to_string(dg) +
                                   " (the rest is forced by instability)");
            const int target = dg + 2 * i * (static_cast<int>(p_) - 1);
            if (target > trunc_) continue;
            pow_tbl_[static_cast<std::size_t>(g)].emplace(
                i, Class::from_raw(*this, target, raw, "base.steenrod.pow." + name));
        }
    }
    for (const auto& [name, raw] : tables.beta) {
        int g = gen_of(name, "base.steenrod.beta");
        const int dg = gens_[static_cast<std::size_t>(g)].degree;
        if (dg + 1 > trunc_) continue;
        beta_tbl_[static_cast<std::size_t>(g)] =
            Class::from_raw(*this, dg + 1, raw, "base.steenrod.beta." + name);
    }
}

/// Sq^i on a generator: identity at 0, the table for 0 < i < deg, the square
/// at i = deg, zero above (instability).
inline Class AlgebraPresentation::sq_on_generator(int gen, int i) const {
    const GenDecl& g = gens_.at(static_cast<std::size_t>(gen));
    if (i == 0) return Class::generator(*this, gen);
    if (i == g.degree) {
        Class x = Class::generator(*this, gen);
        return x * x;
    }
    if (i < 0 || i > g.degree) return Class(this, g.degree + i);
    auto it = sq_tbl_[static_cast<std::size_t>(gen)].find(i);
    if (it != sq_tbl_[static_cast<std::size_t>(gen)].end()) return it->second;
    return Class(this, g.degree + i);
}

/// P^i on a generator: identity at 0, the table for 2i < deg, the p-th power
/// at 2i = deg, zero for 2i > deg.
inline Class AlgebraPresentation::pow_on_generator(int gen, int i) const {
    const GenDecl& g = gens_.at(static_cast<std::size_t>(gen));
    if (i == 0) return Class::generator(*this, gen);
    const int target = g.degree + 2 * i * (static_cast<int>(p_) - 1);
    if (i < 0 || 2 * i > g.degree) return Class(this, target);
    if (2 * i == g.degree) {
        Class x = Class::generator(*this, gen);
        Class r = x;
        for (std::uint32_t k = 1; k < p_; ++k) r = r * x;
        return r;
    }
    auto it = pow_tbl_[static_cast<std::size_t>(gen)].find(i);
    if (it != pow_tbl_[static_cast<std::size_t>(gen)].end()) return it->second;
    return Class(this, target);
}

inline Class AlgebraPresentation::beta_on_generator(int gen) const {
    const GenDecl& g = gens_.at(static_cast<std::size_t>(gen));
    const Class& c = beta_tbl_.at(static_cast<std::size_t>(gen));
    if (c.algebra() != nullptr) return c;
    return Class(this, g.degree + 1);
}

namespace detail {

inline int op_degree_raise(const SteenrodOp& op, std::uint32_t p) {
    switch (op.kind) {
        case OpKind::Sq: return op.index;
        case OpKind::P: return 2 * op.index * (static_cast<int>(p) - 1);
        case OpKind::Bockstein: return 1;
    }
    return 0;
}

inline void check_op(const SteenrodOp& op, std::uint32_t p) {
    if (op.kind != OpKind::Bockstein && op.index < 0)
        throw std::invalid_argument("steenrod: negative operation index");
    if (op.kind == OpKind::Sq && p != 2)
        throw std::invalid_argument("steenrod: Sq requires p = 2");
    if ((op.kind == OpKind::P || op.kind == OpKind::Bockstein) && (p == 2 || p == 0))
        throw std::invalid_argument("steenrod: P/beta require an odd prime");
}

} // namespace detail

/// Steenrod operation on a class: additive extension over monomials, each
/// monomial expanded letter by letter with the Cartan formula; instability
/// on generators supplies the values the tables do not.
inline Class steenrod(const SteenrodOp& op, const Class& c) {
    const AlgebraPresentation* A = c.algebra();
    if (!A) throw invariant_error("steenrod: null class");
    detail::check_op(op, A->prime());
    const int target = c.degree() + detail::op_degree_raise(op, A->prime());
    if (target > A->truncation())
        throw std::invalid_argument("steenrod: target degree " + std::to_string(target) +
                                    " beyond truncation");
    Class out(A, target);
    if (c.degree() < 0 || c.is_zero()) return out;

    const auto& basis = A->monomial_basis(c.degree());
    const auto& gens = A->generators();
    for (std::size_t mi = 0; mi < basis.size(); ++mi) {
        Scalar coeff = c.coefficient(static_cast<int>(mi));
        if (coeff.is_zero()) continue;
        // flatten the monomial into single-generator letters
        std::vector<int> letters;
        for (std::size_t g = 0; g < gens.size(); ++g)
            for (int e = 0; e < basis[mi][g]; ++e) letters.push_back(static_cast<int>(g));

        if (op.kind == OpKind::Bockstein) {
            // derivation: sum over positions with Koszul sign of the prefix
            Class acc(A, target);
            for (std::size_t pos = 0; pos < letters.size(); ++pos) {
                Class term = A->beta_on_generator(letters[pos]);
                if (term.is_zero()) continue;
                int prefix_deg = 0;
                Class prod = Class::unit(*A);
                for (std::size_t q = 0; q < pos; ++q) {
                    prod = prod * Class::generator(*A, letters[q]);
                    prefix_deg += gens[static_cast<std::size_t>(letters[q])].degree;
                }
                Class rest = term;
                for (std::size_t q = pos + 1; q < letters.size(); ++q)
                    rest = rest * Class::generator(*A, letters[q]);
                Class whole = prod * rest;
                if (prefix_deg % 2 == 1) whole = -whole;
                acc = acc + whole;
            }
            out = out + acc.scaled(coeff);
            continue;
        }

        // iterated Cartan: R[j] = op^j(prefix product)
        const int total = op.index;
        std::vector<Class> R;
        R.reserve(static_cast<std::size_t>(total) + 1);
        int prefix_deg = 0;
        for (int j = 0; j <= total; ++j) {
            SteenrodOp oj{op.kind, j};
            R.emplace_back(A, prefix_deg + detail::op_degree_raise(oj, A->prime()));
        }
        R[0] = Class::unit(*A);
        for (int letter : letters) {
            const int dg = gens[static_cast<std::size_t>(letter)].degree;
            std::vector<Class> next;
            next.reserve(R.size());
            for (int j = 0; j <= total; ++j) {
                SteenrodOp oj{op.kind, j};
                Class acc(A, prefix_deg + dg + detail::op_degree_raise(oj, A->prime()));
                for (int b = 0; b <= j; ++b) {
                    Class og = op.kind == OpKind::Sq ? A->sq_on_generator(letter, b)
                                                     : A->pow_on_generator(letter, b);
                    if (og.is_zero()) continue;
                    if (R[static_cast<std::size_t>(j - b)].is_zero()) continue;
                    acc = acc + R[static_cast<std::size_t>(j - b)] * og;
                }
                next.push_back(std::move(acc));
            }
            prefix_deg += dg;
            R = std::move(next);
        }
        out = out + R[static_cast<std::size_t>(total)].scaled(coeff);
    }
    return out;
}

/// True iff the presentation has no nilpotent elements: every generator is
/// polynomial and, away from p = 2, every generator is even-degree.
inline bool is_nilpotent_free(const AlgebraPresentation& A) {
    for (const auto& g : A.generators()) {
        if (g.height != 0) return false;
        if (A.prime() != 2 && g.degree % 2 == 1) return false;
    }
    return true;
}

} // namespace loopcoh
