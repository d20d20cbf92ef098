#pragma once

#include <map>
#include <string>

#include "loopcoh/basealg.hpp"

namespace loopcoh {

/// Serialized orientation data: the base classes w with op(u) = w.u,
/// keyed by operation index.
struct OrientationData {
    std::map<int, RawClass> sq;   // p = 2: Sq^i u = w_i . u, 0 < i < n
    std::map<int, RawClass> pow;  // p odd: P^i u, 0 < 2i < n
    RawClass beta;                // p odd: beta u
};

/// The reduced cohomology of a Thom space as a free rank-1 module over the
/// base presentation on an orientation class u of degree n, with cup product
/// governed by the Euler class (u^2 = e.u) and Steenrod action governed by
/// the orientation tables. Immutable after construction.
class ThomModule {
public:
    ThomModule(const AlgebraPresentation& base, int n, const Class& euler,
               const OrientationData& data = {})
        : base_(&base), n_(n), euler_(euler) {
        if (n_ < 2)
            throw schema_error("ThomModule: fiber dimension must be >= 2 (simple connectivity)");
        if (euler_.algebra() != base_)
            throw schema_error("ThomModule: Euler class from a different presentation");
        if (euler_.degree() != n_)
            throw schema_error("ThomModule: Euler class degree " + std::to_string(euler_.degree()) +
                               ", expected " + std::to_string(n_));
        // u odd-degree away from p = 2 forces u^2 = 0, hence e = 0
        if (base.prime() != 2 && n_ % 2 == 1 && !euler_.is_zero())
            throw schema_error("ThomModule: odd fiber dimension forces a zero Euler class when p != 2");
        install(data);
    }

    ThomModule(const ThomModule&) = delete;
    ThomModule& operator=(const ThomModule&) = delete;

    const AlgebraPresentation& base() const { return *base_; }
    std::uint32_t prime() const { return base_->prime(); }
    int fiber_dim() const { return n_; }
    const Class& euler() const { return euler_; }

    /// w with Sq^i u = w.u. Handles the forced values: Sq^0 u = u,
    /// Sq^n u = u^2 = e.u, Sq^i u = 0 for i > n.
    Class orientation_sq(int i) const {
        if (i == 0) return Class::unit(*base_);
        if (i == n_) return euler_;
        if (i < 0 || i > n_) return Class(base_, i);
        auto it = sq_u_.find(i);
        return it != sq_u_.end() ? it->second : Class(base_, i);
    }

    /// w with P^i u = w.u (p odd). Forced values: P^0 u = u,
    /// P^{n/2} u = u^p = e^{p-1}.u for n even, zero for 2i > n.
    Class orientation_pow(int i) const {
        if (i == 0) return Class::unit(*base_);
        const int deg = 2 * i * (static_cast<int>(prime()) - 1);
        if (i < 0 || 2 * i > n_) return Class(base_, deg);
        if (2 * i == n_) {
            // u^p = e^{p-1}.u
            Class r = Class::unit(*base_);
            for (std::uint32_t k = 0; k + 1 < prime(); ++k) r = r * euler_;
            return r;
        }
        auto it = pow_u_.find(i);
        return it != pow_u_.end() ? it->second : Class(base_, deg);
    }

    /// c with beta(u) = c.u (p odd).
    Class orientation_beta() const {
        return beta_u_.algebra() ? beta_u_ : Class(base_, 1);
    }

    /// dim of the reduced cohomology in degree d (Thom isomorphism).
    int reduced_dim(int d) const { return base_->dim(d - n_); }

    /// Dimension series of the reduced cohomology, up to the given degree.
    PoincareSeries reduced_series(int truncation) const {
        PoincareSeries s(truncation);
        for (int d = n_; d <= truncation; ++d) s.set(d, reduced_dim(d));
        return s;
    }

private:
    void install(const OrientationData& data) {
        const std::uint32_t p = prime();
        if (!data.sq.empty() && p != 2)
            throw schema_error("orientation: Sq tables require p = 2");
        if ((!data.pow.empty() || !data.beta.empty()) && (p == 2 || p == 0))
            throw schema_error("orientation: P/beta tables require an odd prime");
        for (const auto& [i, raw] : data.sq) {
            if (i <= 0 || i >= n_)
                throw schema_error("orientation.sq: index " + std::to_string(i) +
                                   " outside 0 < i < " + std::to_string(n_) +
                                   " (Sq^0 u = u and Sq^n u = e.u are forced)");
            if (i > base_->truncation()) continue;
            sq_u_.emplace(i, Class::from_raw(*base_, i, raw, "orientation.sq." + std::to_string(i)));
        }
        for (const auto& [i, raw] : data.pow) {
            if (!(i > 0 && 2 * i < n_))
                throw schema_error("orientation.pow: index " + std::to_string(i) +
                                   " outside 0 < 2i < " + std::to_string(n_) +
                                   " (the rest is forced by instability)");
            const int deg = 2 * i * (static_cast<int>(p) - 1);
            if (deg > base_->truncation()) continue;
            pow_u_.emplace(i, Class::from_raw(*base_, deg, raw,
                                              "orientation.pow." + std::to_string(i)));
        }
        if (!data.beta.empty())
            beta_u_ = Class::from_raw(*base_, 1, data.beta, "orientation.beta");
    }

    const AlgebraPresentation* base_;
    int n_;
    Class euler_;
    std::map<int, Class> sq_u_, pow_u_;
    Class beta_u_;
};

/// Element x.u of the reduced cohomology of the Thom space, stored through
/// its base coefficient x. Total degree is |x| + n.
struct ThomClass {
    const ThomModule* mod = nullptr;
    Class x;

    ThomClass() = default;
    ThomClass(const ThomModule& m, Class coeff) : mod(&m), x(std::move(coeff)) {
        if (x.algebra() != &m.base())
            throw invariant_error("ThomClass: coefficient from a different presentation");
    }

    static ThomClass zero(const ThomModule& m, int total_degree) {
        return ThomClass(m, Class(&m.base(), total_degree - m.fiber_dim()));
    }

    /// The orientation class u itself.
    static ThomClass orientation(const ThomModule& m) {
        return ThomClass(m, Class::unit(m.base()));
    }

    int degree() const { return x.degree() + mod->fiber_dim(); }
    bool is_zero() const { return x.is_zero(); }

    ThomClass operator+(const ThomClass& o) const {
        require_same(o);
        return ThomClass(*mod, x + o.x);
    }
    ThomClass operator-() const { return ThomClass(*mod, -x); }
    ThomClass scaled(const Scalar& f) const { return ThomClass(*mod, x.scaled(f)); }
    bool operator==(const ThomClass& o) const {
        require_same(o);
        return x == o.x;
    }
    bool operator!=(const ThomClass& o) const { return !(*this == o); }

    void require_same(const ThomClass& o) const {
        if (mod != o.mod) throw invariant_error("ThomClass: mixed modules");
    }
};

/// Cup product (x.u)(y.u) = (-1)^{|y| n} (x y e).u.
inline ThomClass thom_product(const ThomClass& m1, const ThomClass& m2) {
    m1.require_same(m2);
    const ThomModule& T = *m1.mod;
    Class prod = m1.x * m2.x * T.euler();
    if ((m2.x.degree() * T.fiber_dim()) % 2 == 1) prod = -prod;
    return ThomClass(T, prod);
}

/// Steenrod action through the orientation tables:
/// Sq^i(x.u) = sum_{a+b=i} (Sq^a x).(Sq^b u), similarly for P; the Bockstein
/// acts as a signed derivation.
inline ThomClass steenrod_thom(const SteenrodOp& op, const ThomClass& m) {
    const ThomModule& T = *m.mod;
    const AlgebraPresentation& A = T.base();
    detail::check_op(op, A.prime());

    if (op.kind == OpKind::Bockstein) {
        Class out = steenrod(op, m.x);
        Class cross = m.x * T.orientation_beta();
        if (m.x.degree() % 2 == 1) cross = -cross;
        return ThomClass(T, out + cross);
    }

    const int raise = detail::op_degree_raise(op, A.prime());
    Class acc(&A, m.x.degree() + raise);
    const int bmax = op.kind == OpKind::Sq ? T.fiber_dim() : T.fiber_dim() / 2;
    for (int b = 0; b <= std::min(op.index, bmax); ++b) {
        Class w = op.kind == OpKind::Sq ? T.orientation_sq(b) : T.orientation_pow(b);
        if (w.is_zero()) continue;
        SteenrodOp oa{op.kind, op.index - b};
        Class sx = steenrod(oa, m.x);
        if (sx.is_zero()) continue;
        acc = acc + sx * w;
    }
    return ThomClass(T, acc);
}

/// The Wu class read off the orientation table: w_{n-1} at p = 2, W_m for
/// p odd with n = 2m + 1.
inline Class wu_class(const ThomModule& T) {
    if (T.prime() == 2) return T.orientation_sq(T.fiber_dim() - 1);
    if (T.prime() == 0)
        throw std::invalid_argument("wu_class: not defined rationally");
    if (T.fiber_dim() % 2 == 0)
        throw std::invalid_argument("wu_class: p odd requires odd fiber dimension");
    return T.orientation_pow((T.fiber_dim() - 1) / 2);
}

/// Element a.v + b of the sphere-bundle cohomology H^*(S), which is free
/// over the base on {1, v} with |v| = n - 1.
struct SphereClass {
    const ThomModule* mod = nullptr;
    Class a;  // coefficient of v, degree D - (n-1)
    Class b;  // base part, degree D

    SphereClass() = default;
    SphereClass(const ThomModule& m, Class va, Class vb)
        : mod(&m), a(std::move(va)), b(std::move(vb)) {
        if (a.degree() + m.fiber_dim() - 1 != b.degree())
            throw invariant_error("SphereClass: inconsistent degrees");
    }

    static SphereClass zero(const ThomModule& m, int degree) {
        return SphereClass(m, Class(&m.base(), degree - m.fiber_dim() + 1),
                           Class(&m.base(), degree));
    }

    /// The distinguished generator v (a, b) = (1, 0).
    static SphereClass v(const ThomModule& m) {
        return SphereClass(m, Class::unit(m.base()), Class(&m.base(), m.fiber_dim() - 1));
    }

    /// A pure base class, included along H^*(B) -> H^*(S).
    static SphereClass base_class(const ThomModule& m, Class x) {
        Class va(&m.base(), x.degree() - m.fiber_dim() + 1);
        return SphereClass(m, std::move(va), std::move(x));
    }

    int degree() const { return b.degree(); }
    bool is_zero() const { return a.is_zero() && b.is_zero(); }

    SphereClass operator+(const SphereClass& o) const {
        require_same(o);
        return SphereClass(*mod, a + o.a, b + o.b);
    }
    bool operator==(const SphereClass& o) const {
        require_same(o);
        return a == o.a && b == o.b;
    }
    bool operator!=(const SphereClass& o) const { return !(*this == o); }

    void require_same(const SphereClass& o) const {
        if (mod != o.mod) throw invariant_error("SphereClass: mixed modules");
    }
};

/// The coefficients of the quadratic relation v^2 = s + t v,
/// with |s| = 2n - 2 and |t| = n - 1.
struct MasseyData {
    Class s;
    Class t;
};

/// Product in H^*(B)[v]/(v^2 - t v - s), with Koszul signs from |v| = n - 1.
inline SphereClass sphere_mul(const SphereClass& c1, const SphereClass& c2,
                              const MasseyData& M) {
    c1.require_same(c2);
    const ThomModule& T = *c1.mod;
    const int vdeg = T.fiber_dim() - 1;
    const std::uint32_t p = T.prime();

    const Scalar sa = Scalar::sign(p, vdeg * c2.a.degree());
    const Scalar sb = Scalar::sign(p, vdeg * c2.b.degree());

    Class a1a2 = c1.a * c2.a;
    Class vpart = a1a2.scaled(sa) * M.t + (c1.a * c2.b).scaled(sb) + c1.b * c2.a;
    Class bpart = a1a2.scaled(sa) * M.s + c1.b * c2.b;
    return SphereClass(T, std::move(vpart), std::move(bpart));
}

/// Change of the relation under v' = v + w:
/// s' = s - w t - w^2; t' = t for n even, t + 2w for n odd.
inline MasseyData massey_transform(const MasseyData& M, const Class& w, bool n_odd) {
    if (!w.algebra() || w.algebra() != M.s.algebra() || w.algebra() != M.t.algebra())
        throw invariant_error("massey_transform: mixed presentations");
    if (w.degree() != M.t.degree())
        throw std::invalid_argument("massey_transform: |w| must equal |t| = n - 1");
    if (M.s.degree() != 2 * M.t.degree())
        throw std::invalid_argument("massey_transform: |s| must equal 2(n - 1)");
    MasseyData out;
    out.s = M.s - w * M.t - w * w;
    out.t = n_odd ? M.t + w + w : M.t;
    return out;
}

/// Connecting map H^*(S) -> reduced H^{*+1}(M): a.v + b maps to a.u.
/// Kernel is exactly the image of the base; a module map.
inline ThomClass delta_star(const SphereClass& c) {
    return ThomClass(*c.mod, c.a);
}

/// At p = 2 with n odd, the relation coefficient t must be the Wu class.
inline bool massey_consistency(const ThomModule& T, const MasseyData& M) {
    if (T.prime() != 2 || T.fiber_dim() % 2 == 0)
        throw std::invalid_argument("massey_consistency: stated for p = 2 and odd n");
    return M.t == wu_class(T);
}

} // namespace loopcoh
