#pragma once

#include <cstddef>
#include <vector>

#include "loopcoh/scalar.hpp"

namespace loopcoh {

/// Dense matrix over F_p (p > 0) or Q (p = 0). Entries are stored as raw
/// residues / rationals so that elimination and products run without Scalar
/// boxing; the Scalar accessors are the public face.
class Matrix {
public:
    Matrix(std::uint32_t p, std::size_t rows, std::size_t cols)
        : p_(p), rows_(rows), cols_(cols) {
        require_characteristic(p_);
        if (p_ > 0)
            mi_.assign(rows_ * cols_, 0);
        else
            mq_.assign(rows_ * cols_, mpq_class(0));
    }

    std::uint32_t characteristic() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar at(std::size_t r, std::size_t c) const {
        return p_ > 0 ? Scalar::of(p_, mi_[idx(r, c)]) : Scalar::rational(mq_[idx(r, c)]);
    }

    void set(std::size_t r, std::size_t c, const Scalar& v) {
        if (v.characteristic() != p_)
            throw invariant_error("Matrix: entry characteristic mismatch");
        if (p_ > 0)
            mi_[idx(r, c)] = v.residue();
        else
            mq_[idx(r, c)] = v.rat();
    }

    bool is_zero() const {
        if (p_ > 0) {
            for (long long v : mi_) if (v != 0) return false;
        } else {
            for (const mpq_class& v : mq_) if (v != 0) return false;
        }
        return true;
    }

    Matrix transpose() const {
        Matrix t(p_, cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) {
                if (p_ > 0)
                    t.mi_[t.idx(c, r)] = mi_[idx(r, c)];
                else
                    t.mq_[t.idx(c, r)] = mq_[idx(r, c)];
            }
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        if (p_ != o.p_)
            throw invariant_error("Matrix: product characteristic mismatch");
        if (cols_ != o.rows_)
            throw invariant_error("Matrix: product dimension mismatch");
        Matrix r(p_, rows_, o.cols_);
        if (p_ > 0) {
            // residues are < p <= 2^31; accumulate then reduce once per entry
            for (std::size_t i = 0; i < rows_; ++i)
                for (std::size_t k = 0; k < cols_; ++k) {
                    long long a = mi_[idx(i, k)];
                    if (a == 0) continue;
                    for (std::size_t j = 0; j < o.cols_; ++j)
                        r.mi_[r.idx(i, j)] += a * o.mi_[o.idx(k, j)];
                }
            for (long long& v : r.mi_) v %= p_;
        } else {
            for (std::size_t i = 0; i < rows_; ++i)
                for (std::size_t k = 0; k < cols_; ++k) {
                    const mpq_class& a = mq_[idx(i, k)];
                    if (a == 0) continue;
                    for (std::size_t j = 0; j < o.cols_; ++j)
                        r.mq_[r.idx(i, j)] += a * o.mq_[o.idx(k, j)];
                }
        }
        return r;
    }

    friend std::size_t rank(const Matrix& m);

private:
    std::size_t idx(std::size_t r, std::size_t c) const { return r * cols_ + c; }

    std::uint32_t p_;
    std::size_t rows_, cols_;
    std::vector<long long> mi_;
    std::vector<mpq_class> mq_;
};

/// Rank by forward elimination on a working copy.
inline std::size_t rank(const Matrix& m) {
    std::size_t rk = 0;
    if (m.p_ > 0) {
        std::vector<long long> a = m.mi_;
        const long long p = m.p_;
        for (std::size_t c = 0; c < m.cols_ && rk < m.rows_; ++c) {
            std::size_t pr = rk;
            while (pr < m.rows_ && a[pr * m.cols_ + c] == 0) ++pr;
            if (pr == m.rows_) continue;
            if (pr != rk)
                for (std::size_t j = c; j < m.cols_; ++j)
                    std::swap(a[pr * m.cols_ + j], a[rk * m.cols_ + j]);
            const long long inv = Scalar::of(m.p_, a[rk * m.cols_ + c]).inverse().residue();
            for (std::size_t r = rk + 1; r < m.rows_; ++r) {
                long long f = (a[r * m.cols_ + c] * inv) % p;
                if (f == 0) continue;
                for (std::size_t j = c; j < m.cols_; ++j) {
                    long long v = a[r * m.cols_ + j] - f * a[rk * m.cols_ + j] % p;
                    a[r * m.cols_ + j] = (v % p + p) % p;
                }
            }
            ++rk;
        }
    } else {
        std::vector<mpq_class> a = m.mq_;
        for (std::size_t c = 0; c < m.cols_ && rk < m.rows_; ++c) {
            std::size_t pr = rk;
            while (pr < m.rows_ && a[pr * m.cols_ + c] == 0) ++pr;
            if (pr == m.rows_) continue;
            if (pr != rk)
                for (std::size_t j = c; j < m.cols_; ++j)
                    std::swap(a[pr * m.cols_ + j], a[rk * m.cols_ + j]);
            mpq_class piv = a[rk * m.cols_ + c];
            for (std::size_t r = rk + 1; r < m.rows_; ++r) {
                mpq_class f = a[r * m.cols_ + c] / piv;
                if (f == 0) continue;
                for (std::size_t j = c; j < m.cols_; ++j)
                    a[r * m.cols_ + j] -= f * a[rk * m.cols_ + j];
            }
            ++rk;
        }
    }
    return rk;
}

struct RowReduction {
    std::size_t rank = 0;
    std::vector<std::vector<Scalar>> kernel_basis;  // vectors of length cols
    std::vector<std::vector<Scalar>> image_basis;   // vectors of length rows
};

/// Full reduced row echelon form; returns rank, a kernel basis and a basis
/// of the column space (the pivot columns of the original matrix).
inline RowReduction row_reduce(const Matrix& m) {
    const std::size_t R = m.rows(), C = m.cols();
    // work in Scalar space; this path is not performance critical
    std::vector<std::vector<Scalar>> a(R, std::vector<Scalar>(C, Scalar::zero(m.characteristic())));
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) a[r][c] = m.at(r, c);

    std::vector<std::size_t> pivot_cols;
    std::size_t rk = 0;
    for (std::size_t c = 0; c < C && rk < R; ++c) {
        std::size_t pr = rk;
        while (pr < R && a[pr][c].is_zero()) ++pr;
        if (pr == R) continue;
        std::swap(a[pr], a[rk]);
        Scalar inv = a[rk][c].inverse();
        for (std::size_t j = 0; j < C; ++j) a[rk][j] = a[rk][j] * inv;
        for (std::size_t r = 0; r < R; ++r) {
            if (r == rk || a[r][c].is_zero()) continue;
            Scalar f = a[r][c];
            for (std::size_t j = 0; j < C; ++j)
                a[r][j] = a[r][j] - f * a[rk][j];
        }
        pivot_cols.push_back(c);
        ++rk;
    }

    RowReduction out;
    out.rank = rk;

    std::vector<bool> is_pivot(C, false);
    for (std::size_t c : pivot_cols) is_pivot[c] = true;
    for (std::size_t f = 0; f < C; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Scalar> v(C, Scalar::zero(m.characteristic()));
        v[f] = Scalar::one(m.characteristic());
        for (std::size_t i = 0; i < pivot_cols.size(); ++i)
            v[pivot_cols[i]] = -a[i][f];
        out.kernel_basis.push_back(std::move(v));
    }
    for (std::size_t c : pivot_cols) {
        std::vector<Scalar> v(R, Scalar::zero(m.characteristic()));
        for (std::size_t r = 0; r < R; ++r) v[r] = m.at(r, c);
        out.image_basis.push_back(std::move(v));
    }
    return out;
}

/// Dimension of ker(d_out)/im(d_in) for a three-term complex
/// ... --d_in--> V --d_out--> ... ; requires d_out . d_in = 0.
inline long homology_dim(const Matrix& d_in, const Matrix& d_out) {
    if (d_in.characteristic() != d_out.characteristic())
        throw invariant_error("homology_dim: characteristic mismatch");
    if (d_in.rows() != d_out.cols())
        throw invariant_error("homology_dim: middle dimensions disagree");
    if (!(d_out * d_in).is_zero())
        throw invariant_error("homology_dim: composite differential is nonzero");
    const long ker = static_cast<long>(d_out.cols()) - static_cast<long>(rank(d_out));
    return ker - static_cast<long>(rank(d_in));
}

} // namespace loopcoh
