#pragma once

#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "loopcoh/errors.hpp"

namespace loopcoh {

using Integer = mpz_class;

/// Truncated integer power series in one variable, exact up to an inclusive
/// truncation degree N. Used as a degree-indexed dimension table; negative
/// coefficients are permitted in intermediate arithmetic such as 1 - g.
class PoincareSeries {
public:
    explicit PoincareSeries(int truncation)
        : trunc_(truncation), c_(static_cast<std::size_t>(truncation) + 1, 0) {
        if (truncation < 0)
            throw std::invalid_argument("PoincareSeries: negative truncation");
    }

    static PoincareSeries one(int truncation) {
        PoincareSeries s(truncation);
        s.c_[0] = 1;
        return s;
    }

    /// t^d (d <= N).
    static PoincareSeries monomial(int d, int truncation) {
        PoincareSeries s(truncation);
        s.set(d, 1);
        return s;
    }

    int truncation() const { return trunc_; }

    const Integer& at(int d) const {
        range_check(d);
        return c_[static_cast<std::size_t>(d)];
    }

    void set(int d, Integer v) {
        range_check(d);
        c_[static_cast<std::size_t>(d)] = std::move(v);
    }

    void add_term(int d, const Integer& v) {
        range_check(d);
        c_[static_cast<std::size_t>(d)] += v;
    }

    PoincareSeries operator+(const PoincareSeries& o) const {
        common_check(o);
        PoincareSeries r(trunc_);
        for (int d = 0; d <= trunc_; ++d) r.c_[d] = c_[d] + o.c_[d];
        return r;
    }

    PoincareSeries operator-(const PoincareSeries& o) const {
        common_check(o);
        PoincareSeries r(trunc_);
        for (int d = 0; d <= trunc_; ++d) r.c_[d] = c_[d] - o.c_[d];
        return r;
    }

    /// Cauchy product truncated at N.
    PoincareSeries operator*(const PoincareSeries& o) const {
        common_check(o);
        PoincareSeries r(trunc_);
        for (int i = 0; i <= trunc_; ++i) {
            if (c_[i] == 0) continue;
            for (int j = 0; i + j <= trunc_; ++j) {
                if (o.c_[j] == 0) continue;
                r.c_[i + j] += c_[i] * o.c_[j];
            }
        }
        return r;
    }

    bool operator==(const PoincareSeries& o) const {
        common_check(o);
        return c_ == o.c_;
    }
    bool operator!=(const PoincareSeries& o) const { return !(*this == o); }

    /// Multiplication by t^k.
    PoincareSeries shifted(int k) const {
        if (k < 0)
            throw std::invalid_argument("PoincareSeries: negative shift");
        PoincareSeries r(trunc_);
        for (int d = 0; d + k <= trunc_; ++d) r.c_[d + k] = c_[d];
        return r;
    }

    /// Prefix copy at a lower truncation degree.
    PoincareSeries truncated_to(int m) const {
        if (m > trunc_)
            throw std::invalid_argument("PoincareSeries: cannot extend truncation");
        PoincareSeries r(m);
        for (int d = 0; d <= m; ++d) r.c_[d] = c_[d];
        return r;
    }

    bool is_zero() const {
        for (const Integer& v : c_) if (v != 0) return false;
        return true;
    }

private:
    void range_check(int d) const {
        if (d < 0 || d > trunc_)
            throw std::out_of_range("PoincareSeries: degree " + std::to_string(d) +
                                    " outside truncation " + std::to_string(trunc_));
    }
    void common_check(const PoincareSeries& o) const {
        if (trunc_ != o.trunc_)
            throw std::invalid_argument("PoincareSeries: truncation mismatch");
    }

    int trunc_;
    std::vector<Integer> c_;
};

/// Sum over k >= 0 of g^k, i.e. the unique h with h * (1 - g) = 1.
/// This is the dimension series of the tensor algebra on a generating
/// module with series g.
inline PoincareSeries geometric_series(const PoincareSeries& g) {
    if (g.at(0) != 0)
        throw std::invalid_argument("geometric_series: nonzero constant term");
    const int n = g.truncation();
    PoincareSeries h(n);
    h.set(0, 1);
    for (int d = 1; d <= n; ++d) {
        Integer acc = 0;
        for (int k = 1; k <= d; ++k)
            if (g.at(k) != 0) acc += g.at(k) * h.at(d - k);
        h.set(d, std::move(acc));
    }
    return h;
}

enum class Shape { Polynomial, Exterior, TruncatedHeightP, RationalMixed };

inline std::string shape_name(Shape s) {
    switch (s) {
        case Shape::Polynomial: return "polynomial";
        case Shape::Exterior: return "exterior";
        case Shape::TruncatedHeightP: return "truncated";
        case Shape::RationalMixed: return "rational-mixed";
    }
    return "?";
}

/// Declared algebra shape is inconsistent with the target series; carries the
/// first degree at which the inversion failed.
class shape_mismatch_error : public std::runtime_error {
public:
    shape_mismatch_error(int degree, const std::string& msg)
        : std::runtime_error(msg), degree_(degree) {}
    int degree() const { return degree_; }

private:
    int degree_;
};

namespace detail {

inline Integer binom(const Integer& n, unsigned long k) {
    Integer r;
    mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

/// Series of the monogenic-factor block contributed by c generators in
/// degree d: (1-t^d)^{-c}, (1+t^d)^c, or ((1-t^{hd})/(1-t^d))^c.
inline PoincareSeries shape_factor(Shape shape, std::uint32_t p, int d, const Integer& c, int n) {
    PoincareSeries f(n);
    Shape eff = shape;
    if (shape == Shape::RationalMixed)
        eff = (d % 2 == 0) ? Shape::Polynomial : Shape::Exterior;
    const int kmax = n / d;
    for (int k = 0; k <= kmax; ++k) {
        Integer coeff;
        switch (eff) {
            case Shape::Polynomial:
                coeff = binom(c + k - 1, static_cast<unsigned long>(k));
                break;
            case Shape::Exterior:
                coeff = binom(c, static_cast<unsigned long>(k));
                break;
            case Shape::TruncatedHeightP: {
                // coefficient of x^k in ((1-x^p)/(1-x))^c
                coeff = 0;
                for (int j = 0; k - static_cast<long>(p) * j >= 0; ++j) {
                    Integer term = binom(c, static_cast<unsigned long>(j)) *
                                   binom(c + (k - static_cast<long>(p) * j) - 1,
                                         static_cast<unsigned long>(k - static_cast<long>(p) * j));
                    coeff += (j % 2 == 0) ? term : -term;
                }
                break;
            }
            case Shape::RationalMixed:
                break;  // unreachable
        }
        f.add_term(k * d, coeff);
    }
    return f;
}

inline void check_shape_prime(Shape shape, std::uint32_t p) {
    if (shape == Shape::RationalMixed && p != 0)
        throw std::invalid_argument("rational-mixed shape requires p = 0");
    if (shape == Shape::TruncatedHeightP && p < 2)
        throw std::invalid_argument("truncated shape requires a positive prime");
}

/// For p odd or p = 0, polynomial and truncated generators live in even
/// degrees and exterior generators in odd degrees; p = 2 has no restriction.
inline bool parity_allowed(Shape shape, std::uint32_t p, int d) {
    if (p == 2) return true;
    switch (shape) {
        case Shape::Polynomial:
        case Shape::TruncatedHeightP:
            return d % 2 == 0;
        case Shape::Exterior:
            return d % 2 == 1;
        case Shape::RationalMixed:
            return true;  // parity selects the factor instead
    }
    return true;
}

} // namespace detail

/// Minimal generator multiplicities of a free graded-commutative algebra of
/// the given shape. Each entry rebuilds the target exactly; see to_series.
struct GeneratorCounts {
    Shape shape = Shape::Polynomial;
    std::uint32_t prime = 2;           // field; also the height for truncated
    std::map<int, Integer> counts;     // degree -> multiplicity, nonzero only

    PoincareSeries to_series(int truncation) const {
        PoincareSeries s = PoincareSeries::one(truncation);
        for (const auto& [d, c] : counts) {
            if (d > truncation) break;
            s = s * detail::shape_factor(shape, prime, d, c, truncation);
        }
        return s;
    }

    bool operator==(const GeneratorCounts& o) const {
        return shape == o.shape && prime == o.prime && counts == o.counts;
    }
};

inline void require_shape_inversion_input(const PoincareSeries& target, Shape shape,
                                          std::uint32_t p) {
    if (target.at(0) != 1)
        throw std::invalid_argument("invert_generators: constant term must be 1");
    detail::check_shape_prime(shape, p);
}

/// Degree-by-degree greedy inversion: at each degree the deficit against the
/// partial product is the forced number of new generators. A negative deficit
/// (or a generator forced into a parity the shape forbids) proves the shape
/// inconsistent with the target.
inline GeneratorCounts invert_generators(const PoincareSeries& target, Shape shape,
                                         std::uint32_t p) {
    require_shape_inversion_input(target, shape, p);
    const int n = target.truncation();
    GeneratorCounts out;
    out.shape = shape;
    out.prime = p;
    PoincareSeries partial = PoincareSeries::one(n);
    for (int d = 1; d <= n; ++d) {
        Integer deficit = target.at(d) - partial.at(d);
        if (deficit < 0)
            throw shape_mismatch_error(
                d, "shape '" + shape_name(shape) + "' inconsistent with series at degree " +
                       std::to_string(d) + " (deficit " + deficit.get_str() + ")");
        if (deficit == 0) continue;
        if (!detail::parity_allowed(shape, p, d))
            throw shape_mismatch_error(
                d, "shape '" + shape_name(shape) + "' forbids generators in degree " +
                       std::to_string(d) + " at p = " + std::to_string(p));
        partial = partial * detail::shape_factor(shape, p, d, deficit, n);
        out.counts.emplace(d, std::move(deficit));
    }
    return out;
}

} // namespace loopcoh
