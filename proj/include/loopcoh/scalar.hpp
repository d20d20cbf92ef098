#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "loopcoh/errors.hpp"

namespace loopcoh {

/// Exact field element. The characteristic is carried by the value:
/// for p > 0 the value is the least nonnegative residue mod p, for p = 0
/// it is an exact rational. No floating point anywhere.
class Scalar {
public:
    Scalar() : p_(0), res_(0) {}

    static Scalar zero(std::uint32_t p) { return of(p, 0); }
    static Scalar one(std::uint32_t p) { return of(p, 1); }

    static Scalar of(std::uint32_t p, long long v) {
        Scalar s;
        s.p_ = p;
        if (p > 0) {
            long long m = static_cast<long long>(p);
            s.res_ = ((v % m) + m) % m;
        } else {
            s.frac_ = mpq_class(static_cast<long>(v));
        }
        return s;
    }

    static Scalar rational(const mpq_class& q) {
        Scalar s;
        s.p_ = 0;
        s.frac_ = q;
        s.frac_.canonicalize();
        return s;
    }

    /// Koszul-style sign factor: (-1)^exp in the given field.
    static Scalar sign(std::uint32_t p, long exp) {
        return of(p, (exp % 2 == 0) ? 1 : -1);
    }

    std::uint32_t characteristic() const { return p_; }

    bool is_zero() const { return p_ > 0 ? res_ == 0 : frac_ == 0; }

    long long residue() const { return res_; }
    const mpq_class& rat() const { return frac_; }

    Scalar operator+(const Scalar& o) const {
        check(o);
        Scalar r;
        r.p_ = p_;
        if (p_ > 0)
            r.res_ = (res_ + o.res_) % p_;
        else
            r.frac_ = frac_ + o.frac_;
        return r;
    }

    Scalar operator-(const Scalar& o) const { return *this + (-o); }

    Scalar operator-() const {
        Scalar r;
        r.p_ = p_;
        if (p_ > 0)
            r.res_ = res_ == 0 ? 0 : static_cast<long long>(p_) - res_;
        else
            r.frac_ = -frac_;
        return r;
    }

    Scalar operator*(const Scalar& o) const {
        check(o);
        Scalar r;
        r.p_ = p_;
        if (p_ > 0)
            r.res_ = (res_ * o.res_) % p_;
        else
            r.frac_ = frac_ * o.frac_;
        return r;
    }

    Scalar inverse() const {
        if (is_zero())
            throw invariant_error("Scalar: inverse of zero");
        Scalar r;
        r.p_ = p_;
        if (p_ > 0) {
            // extended Euclid on (res_, p)
            long long t = 0, nt = 1, m = p_, a = res_;
            while (a != 0) {
                long long q = m / a;
                long long tmp = m - q * a; m = a; a = tmp;
                tmp = t - q * nt; t = nt; nt = tmp;
            }
            r.res_ = ((t % p_) + p_) % p_;
        } else {
            r.frac_ = 1 / frac_;
        }
        return r;
    }

    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const {
        check(o);
        return p_ > 0 ? res_ == o.res_ : frac_ == o.frac_;
    }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    std::string str() const {
        return p_ > 0 ? std::to_string(res_) : frac_.get_str();
    }

private:
    void check(const Scalar& o) const {
        if (p_ != o.p_)
            throw invariant_error("Scalar: mixed characteristics " +
                                  std::to_string(p_) + " and " + std::to_string(o.p_));
    }

    std::uint32_t p_;
    long long res_;   // valid when p_ > 0
    mpq_class frac_;  // valid when p_ == 0
};

inline bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// A characteristic is admissible when it is 0 (rationals) or a prime.
/// Primes are capped so that residue accumulation in dense products stays
/// within 64 bits without per-term reduction.
inline void require_characteristic(std::uint32_t p) {
    if (p != 0 && !is_prime(p))
        throw schema_error("characteristic must be 0 or a prime, got " + std::to_string(p));
    if (p >= 32768)
        throw schema_error("characteristic " + std::to_string(p) + " too large (max 32749)");
}

} // namespace loopcoh
