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
 * @file cn.hpp
 * @brief Index, core-nilpotent decomposition and Drazin inverse of a square
 *        matrix, by two algorithms that share no code path.
 *
 * Route one (cn_decompose_split) stabilizes the rank chain, splits the space
 * as Ker(A^m) (+) Im(A^m) and inverts A on the image block in an adapted
 * basis. Route two (cn_decompose_poly) works entirely inside k[A]: it splits
 * the minimal polynomial as x^a * g with g(0) != 0, builds the projector
 * from the Bezout identity 1 = u*x^a + v*g, and composes it with a partial
 * inverse of x modulo g. drazin() always runs both and insists on exact
 * agreement; a mismatch is a library bug and aborts the computation.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "kxcn/errors.hpp"
#include "kxcn/matrix.hpp"
#include "kxcn/poly.hpp"
#include "kxcn/scalars.hpp"

namespace kxcn {

/**
 * Index of a square matrix: 0 exactly when it is invertible, otherwise the
 * smallest m >= 1 with rank(A^m) = rank(A^{m+1}). In finite dimension this
 * is equivalent to simultaneous stabilization of the kernel and image
 * chains; the chain formulation is kept as a test oracle.
 */
template <FieldScalar K>
std::size_t index_of(const Matrix<K>& a) {
    if (!a.is_square()) throw invalid_input("index of a non-square matrix");
    const std::size_t n = a.rows();
    Matrix<K> power = Matrix<K>::identity(n, a.field_zero());
    std::size_t rank_prev = n;  // rank of A^0
    for (std::size_t m = 0; m <= n; ++m) {
        power = power * a;
        const std::size_t rank_next = rank(power);
        if (rank_next == rank_prev) return m;
        rank_prev = rank_next;
    }
    throw internal_inconsistency("rank chain failed to stabilize within the dimension bound");
}

template <FieldScalar K>
struct CNDecomposition {
    std::size_t index;
    Matrix<K> core;           // A1, with index <= 1
    Matrix<K> nilpotent;      // A2, with A2^index = 0
    Matrix<K> projector;      // E, projection onto Im(A^m) along Ker(A^m)
    Matrix<K> drazin;         // A^D
    Subspace<K> kernel_part;  // Ker(A^m)
    Subspace<K> image_part;   // Im(A^m)

    friend bool operator==(const CNDecomposition& a, const CNDecomposition& b) {
        return a.index == b.index && a.core == b.core && a.nilpotent == b.nilpotent &&
               a.projector == b.projector && a.drazin == b.drazin && a.kernel_part == b.kernel_part &&
               a.image_part == b.image_part;
    }
    friend bool operator!=(const CNDecomposition& a, const CNDecomposition& b) { return !(a == b); }
};

/// Core-nilpotent data through the subspace splitting Ker(A^m) (+) Im(A^m).
template <FieldScalar K>
CNDecomposition<K> cn_decompose_split(const Matrix<K>& a) {
    if (!a.is_square()) throw invalid_input("decomposition of a non-square matrix");
    const std::size_t n = a.rows();
    const std::size_t m = index_of(a);
    const Matrix<K> am = matpow(a, m);
    Subspace<K> ker = kernel_basis(am);
    Subspace<K> img = image_basis(am);

    // adapted basis, image block first
    const Matrix<K> p = hstack(img.basis(), ker.basis());
    const auto p_inv = inverse(p);
    if (!p_inv) throw internal_inconsistency("kernel and image of A^m do not split the space");

    const std::size_t r = img.dim();
    Matrix<K> e_block = Matrix<K>::zeros(n, n, a.field_zero());
    e_block.set_block(0, 0, Matrix<K>::identity(r, a.field_zero()));
    const Matrix<K> projector = p * e_block * (*p_inv);

    // A in the adapted basis is block diagonal; the image block is invertible.
    const Matrix<K> adapted = (*p_inv) * (a * p);
    const auto core_inv = inverse(adapted.block(0, 0, r, r));
    if (!core_inv) throw internal_inconsistency("restriction of A to Im(A^m) is singular");
    Matrix<K> d_block = Matrix<K>::zeros(n, n, a.field_zero());
    d_block.set_block(0, 0, *core_inv);
    const Matrix<K> drazin = p * d_block * (*p_inv);

    Matrix<K> core = a * projector;
    Matrix<K> nilpotent = a - core;
    return {m, std::move(core), std::move(nilpotent), projector, drazin, std::move(ker), std::move(img)};
}

/// Core-nilpotent data through the minimal polynomial; every output is a
/// polynomial in A.
template <FieldScalar K>
CNDecomposition<K> cn_decompose_poly(const Matrix<K>& a) {
    if (!a.is_square()) throw invalid_input("decomposition of a non-square matrix");
    const K one = one_like(a.field_zero());
    const Poly<K> mu = minimal_polynomial(a);
    const auto [val, unit] = x_adic_valuation(mu);
    const Poly<K> xa = Poly<K>::x_power(val, one);

    const auto bezout = poly_xgcd(xa, unit);
    if (!bezout.gcd.is_one()) throw internal_inconsistency("x^a and the unit part of the minimal polynomial are not coprime");
    const Poly<K> e_poly = (bezout.u * xa) % mu;
    const Matrix<K> projector = poly_at_matrix(e_poly, a);

    // h with x*h = 1 (mod g): write g = g(0) + x*q, then h = -q / g(0).
    const K g0 = unit.coeff_or(0, a.field_zero());
    const Poly<K> q = (unit - Poly<K>::constant(g0)).is_zero()
                          ? Poly<K>()
                          : (unit - Poly<K>::constant(g0)).shift_down(1);
    const Poly<K> h = q * Poly<K>::constant(-(g0.inverse()));
    const Poly<K> d_poly = (h * bezout.u * xa) % mu;
    const Matrix<K> drazin = poly_at_matrix(d_poly, a);

    Matrix<K> core = a * projector;
    Matrix<K> nilpotent = a - core;
    Subspace<K> ker = kernel_basis(projector);
    Subspace<K> img = image_basis(projector);
    return {val, std::move(core), std::move(nilpotent), projector, drazin, std::move(ker), std::move(img)};
}

struct DrazinChecks {
    bool fixed_point;     // X*A*X == X
    bool commutes;        // X*A == A*X
    bool power_identity;  // A^{m+1}*X == A^m

    bool all() const { return fixed_point && commutes && power_identity; }
};

/// Exact verification of the three defining identities against a candidate
/// inverse X at a given index m. Failures are reported, never thrown.
template <FieldScalar K>
DrazinChecks verify_drazin(const Matrix<K>& a, const Matrix<K>& x, std::size_t m) {
    if (!a.is_square() || !x.is_square() || a.rows() != x.rows()) {
        throw invalid_input("verify_drazin requires square matrices of equal size");
    }
    const Matrix<K> xa = x * a;
    const Matrix<K> ax = a * x;
    const Matrix<K> am = matpow(a, m);
    return {x * ax == x, xa == ax, am * ax == am};
}

/**
 * Drazin inverse. Runs both decomposition routes, demands exact structural
 * agreement of every output, and returns the common inverse.
 */
template <FieldScalar K>
Matrix<K> drazin(const Matrix<K>& a) {
    const CNDecomposition<K> split = cn_decompose_split(a);
    const CNDecomposition<K> poly = cn_decompose_poly(a);
    if (!(split == poly)) {
        throw internal_inconsistency("subspace and polynomial decomposition routes disagree");
    }
    return split.drazin;
}

}  // namespace kxcn
