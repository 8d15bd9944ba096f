/*
   Copyright 2026 The kxcn authors

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

/**
 * @file matrix.hpp
 * @brief Exact dense matrix algebra over a FieldScalar.
 *
 * Elimination is exact everywhere. Over Q the row reduction runs a
 * fraction-free (Bareiss) forward pass on integer-scaled rows to keep
 * intermediate coefficients small, followed by an exact rational Jordan
 * pass; over prime fields it is plain Gauss-Jordan. Both paths end in the
 * unique reduced row echelon form, so results never depend on the route.
 *
 * Subspaces are stored with their basis in reduced column echelon form.
 * That form is canonical: two Subspace values describe the same subspace
 * exactly when they are structurally equal.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "kxcn/errors.hpp"
#include "kxcn/poly.hpp"
#include "kxcn/scalars.hpp"

namespace kxcn {

template <FieldScalar K>
class Matrix {
   public:
    Matrix(std::size_t rows, std::size_t cols, const K& fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill), zero_(zero_like(fill)) {}

    static Matrix zeros(std::size_t rows, std::size_t cols, const K& exemplar) {
        return Matrix(rows, cols, zero_like(exemplar));
    }

    static Matrix identity(std::size_t n, const K& exemplar) {
        Matrix m = zeros(n, n, exemplar);
        const K one = one_like(exemplar);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<K>>& rows, const K& exemplar) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows[0].size();
        Matrix m = zeros(r, c, exemplar);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw invalid_input("ragged row list");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    /// Field exemplar (the zero of the entry field); valid even for 0x0 matrices.
    const K& field_zero() const { return zero_; }
    K field_one() const { return one_like(zero_); }

    K& operator()(std::size_t i, std::size_t j) {
        check_bounds(i, j);
        return data_[i * cols_ + j];
    }
    const K& operator()(std::size_t i, std::size_t j) const {
        check_bounds(i, j);
        return data_[i * cols_ + j];
    }

    bool is_zero() const {
        for (const K& e : data_) {
            if (!e.is_zero()) return false;
        }
        return true;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const {
        if (r0 + nrows > rows_ || c0 + ncols > cols_) throw invalid_input("block out of range");
        Matrix out = zeros(nrows, ncols, zero_);
        for (std::size_t i = 0; i < nrows; ++i) {
            for (std::size_t j = 0; j < ncols; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
        }
        return out;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw invalid_input("block out of range");
        for (std::size_t i = 0; i < b.rows_; ++i) {
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
        }
    }

    std::vector<K> column(std::size_t j) const {
        std::vector<K> out;
        out.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
        return out;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        a.check_same_shape(b);
        Matrix out = a;
        for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
        return out;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        a.check_same_shape(b);
        Matrix out = a;
        for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
        return out;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw invalid_input("matrix product dimension mismatch");
        if (!same_field(a.zero_, b.zero_)) throw invalid_input("matrix product over different fields");
        Matrix out = zeros(a.rows_, b.cols_, a.zero_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const K& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    out(i, j) = out(i, j) + aik * b(k, j);
                }
            }
        }
        return out;
    }

    friend Matrix operator*(const K& s, const Matrix& a) {
        Matrix out = a;
        for (K& e : out.data_) e = s * e;
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        if (!same_field(a.zero_, b.zero_)) throw invalid_input("comparing matrices over different fields");
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        for (std::size_t i = 0; i < a.data_.size(); ++i) {
            if (!(a.data_[i] == b.data_[i])) return false;
        }
        return true;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j) out += ' ';
                out += (*this)(i, j).to_string();
            }
            out += '\n';
        }
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m) { return os << m.to_string(); }

   private:
    void check_bounds(std::size_t i, std::size_t j) const {
        if (i >= rows_ || j >= cols_) throw invalid_input("matrix index out of range");
    }
    void check_same_shape(const Matrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw invalid_input("matrix shape mismatch");
        if (!same_field(zero_, b.zero_)) throw invalid_input("matrices over different fields");
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<K> data_;
    K zero_;
};

template <FieldScalar K>
Matrix<K> transpose(const Matrix<K>& a) {
    Matrix<K> out = Matrix<K>::zeros(a.cols(), a.rows(), a.field_zero());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    }
    return out;
}

template <FieldScalar K>
Matrix<K> hstack(const Matrix<K>& a, const Matrix<K>& b) {
    if (a.rows() != b.rows()) throw invalid_input("hstack row mismatch");
    Matrix<K> out = Matrix<K>::zeros(a.rows(), a.cols() + b.cols(), a.field_zero());
    out.set_block(0, 0, a);
    out.set_block(0, a.cols(), b);
    return out;
}

template <FieldScalar K>
struct RrefResult {
    Matrix<K> reduced;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank() const { return pivot_cols.size(); }
};

/// Plain exact Gauss-Jordan over any field. Used directly for prime fields
/// and kept callable over Q as the naive reference route.
template <FieldScalar K>
RrefResult<K> rref_plain(const Matrix<K>& a) {
    Matrix<K> r = a;
    std::vector<std::size_t> pivots;
    std::size_t pr = 0;
    for (std::size_t pc = 0; pc < r.cols() && pr < r.rows(); ++pc) {
        std::size_t piv = pr;
        while (piv < r.rows() && r(piv, pc).is_zero()) ++piv;
        if (piv == r.rows()) continue;
        r.swap_rows(piv, pr);
        const K inv = r(pr, pc).inverse();
        for (std::size_t j = pc; j < r.cols(); ++j) r(pr, j) = inv * r(pr, j);
        for (std::size_t i = 0; i < r.rows(); ++i) {
            if (i == pr || r(i, pc).is_zero()) continue;
            const K factor = r(i, pc);
            for (std::size_t j = pc; j < r.cols(); ++j) {
                r(i, j) = r(i, j) - factor * r(pr, j);
            }
        }
        pivots.push_back(pc);
        ++pr;
    }
    return {std::move(r), std::move(pivots)};
}

namespace detail {

/// Fraction-free forward elimination (Bareiss) on integer-scaled rows,
/// then an exact rational Jordan pass on the surviving pivot rows. Keeps
/// intermediate integers at minor-determinant size instead of letting
/// numerators and denominators compound.
inline RrefResult<Rational> rref_bareiss(const Matrix<Rational>& a) {
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::vector<mpz_class>> m(rows, std::vector<mpz_class>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < cols; ++j) {
            mpz_class den = a(i, j).denominator();
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
        }
        for (std::size_t j = 0; j < cols; ++j) {
            m[i][j] = a(i, j).numerator() * (l / a(i, j).denominator());
        }
    }

    std::vector<std::size_t> pivots;
    std::size_t pr = 0;
    mpz_class prev = 1;
    for (std::size_t pc = 0; pc < cols && pr < rows; ++pc) {
        std::size_t piv = pr;
        while (piv < rows && m[piv][pc] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[pr]);
        for (std::size_t i = pr + 1; i < rows; ++i) {
            for (std::size_t j = pc + 1; j < cols; ++j) {
                mpz_class t = m[pr][pc] * m[i][j] - m[i][pc] * m[pr][j];
                mpz_class q, r;
                mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                if (r != 0) throw internal_inconsistency("fraction-free elimination produced a non-exact division");
                m[i][j] = q;
            }
            m[i][pc] = 0;
        }
        prev = m[pr][pc];
        pivots.push_back(pc);
        ++pr;
    }

    Matrix<Rational> r = Matrix<Rational>::zeros(rows, cols, a.field_zero());
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        const mpz_class& piv = m[i][pivots[i]];
        for (std::size_t j = pivots[i]; j < cols; ++j) {
            if (m[i][j] != 0) r(i, j) = Rational(m[i][j], piv);
        }
    }
    for (std::size_t i = pivots.size(); i-- > 0;) {
        for (std::size_t i2 = 0; i2 < i; ++i2) {
            const Rational factor = r(i2, pivots[i]);
            if (factor.is_zero()) continue;
            for (std::size_t j = pivots[i]; j < cols; ++j) {
                r(i2, j) = r(i2, j) - factor * r(i, j);
            }
        }
    }
    return {std::move(r), std::move(pivots)};
}

}  // namespace detail

/// Reduced row echelon form; fraction-free over Q, plain elimination otherwise.
template <FieldScalar K>
RrefResult<K> rref(const Matrix<K>& a) {
    if constexpr (std::is_same_v<K, Rational>) {
        return detail::rref_bareiss(a);
    } else {
        return rref_plain(a);
    }
}

template <FieldScalar K>
std::size_t rank(const Matrix<K>& a) {
    return rref(a).rank();
}

/// Solves A*X = B columnwise; absent when any column is inconsistent.
/// Free variables are set to zero, so the result is canonical.
template <FieldScalar K>
std::optional<Matrix<K>> solve_multi(const Matrix<K>& a, const Matrix<K>& b) {
    if (a.rows() != b.rows()) throw invalid_input("solve dimension mismatch");
    const auto red = rref(hstack(a, b));
    for (std::size_t p : red.pivot_cols) {
        if (p >= a.cols()) return std::nullopt;
    }
    Matrix<K> x = Matrix<K>::zeros(a.cols(), b.cols(), a.field_zero());
    for (std::size_t r = 0; r < red.pivot_cols.size(); ++r) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            x(red.pivot_cols[r], j) = red.reduced(r, a.cols() + j);
        }
    }
    return x;
}

template <FieldScalar K>
std::optional<std::vector<K>> solve(const Matrix<K>& a, const std::vector<K>& b) {
    if (b.size() != a.rows()) throw invalid_input("solve dimension mismatch");
    Matrix<K> bm = Matrix<K>::zeros(a.rows(), 1, a.field_zero());
    for (std::size_t i = 0; i < b.size(); ++i) bm(i, 0) = b[i];
    auto x = solve_multi(a, bm);
    if (!x) return std::nullopt;
    return x->column(0);
}

/// Absent exactly when the matrix is singular.
template <FieldScalar K>
std::optional<Matrix<K>> inverse(const Matrix<K>& a) {
    if (!a.is_square()) throw invalid_input("inverse of a non-square matrix");
    const auto red = rref(hstack(a, Matrix<K>::identity(a.rows(), a.field_zero())));
    if (red.rank() != a.rows() || (a.rows() > 0 && red.pivot_cols.back() >= a.cols())) return std::nullopt;
    return red.reduced.block(0, a.cols(), a.rows(), a.rows());
}

template <FieldScalar K>
Matrix<K> matpow(const Matrix<K>& a, std::size_t e) {
    if (!a.is_square()) throw invalid_input("power of a non-square matrix");
    Matrix<K> acc = Matrix<K>::identity(a.rows(), a.field_zero());
    Matrix<K> base = a;
    while (e > 0) {
        if (e & 1u) acc = acc * base;
        e >>= 1u;
        if (e > 0) base = base * base;
    }
    return acc;
}

/// Evaluates f at the square matrix A by Horner's rule, with constants
/// acting as multiples of the identity.
template <FieldScalar K>
Matrix<K> poly_at_matrix(const Poly<K>& f, const Matrix<K>& a) {
    if (!a.is_square()) throw invalid_input("polynomial evaluation at a non-square matrix");
    const std::size_t n = a.rows();
    Matrix<K> acc = Matrix<K>::zeros(n, n, a.field_zero());
    if (f.is_zero()) return acc;
    const auto& cs = f.coeffs();
    for (std::size_t i = cs.size(); i-- > 0;) {
        acc = acc * a;
        if (!cs[i].is_zero()) {
            for (std::size_t d = 0; d < n; ++d) acc(d, d) = acc(d, d) + cs[i];
        }
    }
    return acc;
}

/**
 * @brief A linear subspace of k^n with a canonical basis.
 *
 * The basis columns are in reduced column echelon form, so subspace equality
 * is structural equality of the stored data.
 */
template <FieldScalar K>
class Subspace {
   public:
    /// Canonicalizes the span of the given columns.
    static Subspace from_columns(const Matrix<K>& generators) {
        const auto red = rref(transpose(generators));
        Matrix<K> basis = Matrix<K>::zeros(generators.rows(), red.rank(), generators.field_zero());
        for (std::size_t r = 0; r < red.rank(); ++r) {
            for (std::size_t i = 0; i < generators.rows(); ++i) basis(i, r) = red.reduced(r, i);
        }
        return Subspace(generators.rows(), std::move(basis));
    }

    static Subspace zero(std::size_t ambient, const K& exemplar) {
        return Subspace(ambient, Matrix<K>::zeros(ambient, 0, exemplar));
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.cols(); }
    const Matrix<K>& basis() const { return basis_; }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const Subspace& s) {
        return os << "subspace dim " << s.dim() << " of k^" << s.ambient_ << "\n" << s.basis_;
    }

   private:
    Subspace(std::size_t ambient, Matrix<K> basis) : ambient_(ambient), basis_(std::move(basis)) {}

    std::size_t ambient_;
    Matrix<K> basis_;
};

/// Basis of {v : Av = 0}, canonical.
template <FieldScalar K>
Subspace<K> kernel_basis(const Matrix<K>& a) {
    const auto red = rref(a);
    std::vector<std::size_t> free_cols;
    {
        std::size_t p = 0;
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (p < red.pivot_cols.size() && red.pivot_cols[p] == c) {
                ++p;
            } else {
                free_cols.push_back(c);
            }
        }
    }
    Matrix<K> gens = Matrix<K>::zeros(a.cols(), free_cols.size(), a.field_zero());
    const K one = one_like(a.field_zero());
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
        gens(free_cols[j], j) = one;
        for (std::size_t r = 0; r < red.pivot_cols.size(); ++r) {
            gens(red.pivot_cols[r], j) = -red.reduced(r, free_cols[j]);
        }
    }
    return Subspace<K>::from_columns(gens);
}

/// Basis of the column space, canonical.
template <FieldScalar K>
Subspace<K> image_basis(const Matrix<K>& a) {
    return Subspace<K>::from_columns(a);
}

/// True exactly when the two subspaces are complementary in their ambient
/// space: dimensions add up and the joint span has full rank.
template <FieldScalar K>
bool direct_sum_check(const Subspace<K>& u, const Subspace<K>& w) {
    if (u.ambient_dim() != w.ambient_dim()) throw invalid_input("direct sum check in different ambient spaces");
    if (u.dim() + w.dim() != u.ambient_dim()) return false;
    return rank(hstack(u.basis(), w.basis())) == u.ambient_dim();
}

/**
 * Monic least-degree polynomial with f(A) = 0, found as the first linear
 * dependency among the vectorized powers I, A, A^2, ...
 */
template <FieldScalar K>
Poly<K> minimal_polynomial(const Matrix<K>& a) {
    if (!a.is_square()) throw invalid_input("minimal polynomial of a non-square matrix");
    const std::size_t n = a.rows();
    const K one = one_like(a.field_zero());
    Matrix<K> powers = Matrix<K>::zeros(n * n, 0, a.field_zero());  // columns = vec(A^k)
    Matrix<K> cur = Matrix<K>::identity(n, a.field_zero());
    for (std::size_t k = 0;; ++k) {
        Matrix<K> v = Matrix<K>::zeros(n * n, 1, a.field_zero());
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) v(i * n + j, 0) = cur(i, j);
        }
        if (auto dep = solve_multi(powers, v)) {
            std::vector<K> coeffs(k + 1, zero_like(a.field_zero()));
            for (std::size_t i = 0; i < k; ++i) coeffs[i] = -(*dep)(i, 0);
            coeffs[k] = one;
            return Poly<K>(std::move(coeffs));
        }
        if (k == n) throw internal_inconsistency("no dependency among matrix powers up to the dimension bound");
        powers = hstack(powers, v);
        cur = cur * a;
    }
}

}  // namespace kxcn
