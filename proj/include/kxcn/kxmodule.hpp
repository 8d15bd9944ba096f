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
 * @file kxmodule.hpp
 * @brief Finitely presented k[x]-modules: localization away from x,
 *        pointwise core-nilpotent splitting, and the bridge from matrices
 *        via invariant factors.
 *
 * A presentation k[x]^r (+) sum_i k[x]/(f_i) is stored as the free rank and
 * the list of monic torsion polynomials. Inverting the action of x kills
 * each factor k[x]/(x^a), is the identity on each k[x]/(g) with g(0) != 0,
 * and is never onto a free summand. Consequently the localization map is
 * surjective exactly when r = 0, and for torsion presentations the
 * associated exact sequence always splits; the section data is the list of
 * Chinese-remainder idempotents e with e = 0 (mod x^a) and e = 1 (mod g).
 * A worked justification of the r = 0 criterion is in the project README.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "kxcn/errors.hpp"
#include "kxcn/matrix.hpp"
#include "kxcn/poly.hpp"
#include "kxcn/scalars.hpp"

namespace kxcn {

/// V = k[x]^free_rank (+) sum_i k[x]/(torsion[i]); torsion factors are
/// monic of degree >= 1.
template <FieldScalar K>
struct ModulePresentation {
    std::size_t free_rank = 0;
    std::vector<Poly<K>> torsion;

    friend bool operator==(const ModulePresentation& a, const ModulePresentation& b) {
        return a.free_rank == b.free_rank && a.torsion == b.torsion;
    }
    friend bool operator!=(const ModulePresentation& a, const ModulePresentation& b) { return !(a == b); }
};

template <FieldScalar K>
void validate_presentation(const ModulePresentation<K>& m) {
    for (const auto& f : m.torsion) {
        if (f.is_zero() || f.degree() < 1) throw invalid_input("torsion factor must have degree >= 1");
        if (!f.is_monic()) throw invalid_input("torsion factor must be monic: " + f.to_string());
    }
}

/// Total dimension over k of the torsion part (the free part is infinite
/// dimensional and excluded).
template <FieldScalar K>
std::size_t torsion_dimension(const ModulePresentation<K>& m) {
    std::size_t d = 0;
    for (const auto& f : m.torsion) d += f.degree();
    return d;
}

template <FieldScalar K>
struct LocalizationReport {
    ModulePresentation<K> kernel;     // x-primary part: factors x^{a_i}, a_i > 0
    ModulePresentation<K> localized;  // over k[x]_x: free rank + factors g_i with g_i(0) != 0
    bool surjective = false;
    bool splits = false;
    /// One idempotent per input torsion factor, present exactly when the
    /// sequence splits: e_i = 0 (mod x^{a_i}), e_i = 1 (mod g_i).
    std::optional<std::vector<Poly<K>>> section_idempotents;
};

namespace detail {

/// Idempotent of k[x]/(f) projecting onto the unit-at-zero part:
/// from 1 = u*x^a + v*g, take e = u*x^a mod f.
template <FieldScalar K>
Poly<K> crt_idempotent(const Poly<K>& f) {
    const K one = one_like(f.leading());
    const auto [val, unit] = x_adic_valuation(f);
    const Poly<K> xa = Poly<K>::x_power(val, one);
    const auto bezout = poly_xgcd(xa, unit);
    if (!bezout.gcd.is_one()) throw internal_inconsistency("x^a and unit part are not coprime");
    return (bezout.u * xa) % f;
}

}  // namespace detail

/**
 * Localization of the presentation away from x: splits each torsion factor
 * x-adically, reports the kernel of the localization map (the x-primary
 * part), the localized module, and the splitting data when it exists.
 */
template <FieldScalar K>
LocalizationReport<K> localize(const ModulePresentation<K>& m) {
    validate_presentation(m);
    LocalizationReport<K> report;
    report.localized.free_rank = m.free_rank;
    std::vector<Poly<K>> idempotents;
    idempotents.reserve(m.torsion.size());
    for (const auto& f : m.torsion) {
        const auto [val, unit] = x_adic_valuation(f);
        const K one = one_like(f.leading());
        if (val > 0) report.kernel.torsion.push_back(Poly<K>::x_power(val, one));
        if (!unit.is_zero() && unit.degree() >= 1) report.localized.torsion.push_back(unit);
        idempotents.push_back(detail::crt_idempotent(f));
    }
    report.surjective = (m.free_rank == 0);
    report.splits = report.surjective;
    if (report.splits) report.section_idempotents = std::move(idempotents);
    return report;
}

template <FieldScalar K>
struct PointwiseCNParts {
    ModulePresentation<K> u;      // x-primary part, where x acts pointwise nilpotently
    ModulePresentation<K> w;      // x-regular part, where x acts invertibly
    std::size_t uniform_index;    // max x-adic valuation; finite for every presentation
};

/**
 * Pointwise core-nilpotent splitting of the module. Absent exactly when the
 * localization map is not surjective (free rank > 0). For finitely
 * presented torsion modules the nilpotency is uniformly bounded by the
 * largest x-adic valuation, so the split is genuinely core-nilpotent.
 */
template <FieldScalar K>
std::optional<PointwiseCNParts<K>> pointwise_cn(const ModulePresentation<K>& m) {
    validate_presentation(m);
    if (m.free_rank > 0) return std::nullopt;
    PointwiseCNParts<K> parts{{}, {}, 0};
    for (const auto& f : m.torsion) {
        const auto [val, unit] = x_adic_valuation(f);
        const K one = one_like(f.leading());
        if (val > 0) {
            parts.u.torsion.push_back(Poly<K>::x_power(val, one));
            if (val > parts.uniform_index) parts.uniform_index = val;
        }
        if (!unit.is_zero() && unit.degree() >= 1) parts.w.torsion.push_back(unit);
    }
    return parts;
}

/**
 * Smith normal form of a polynomial matrix by elementary row and column
 * operations with degree-minimal pivoting. Returns the diagonal entries
 * d_1 | d_2 | ..., made monic; zero entries (free rank) come last.
 */
template <FieldScalar K>
std::vector<Poly<K>> smith_invariant_factors(std::vector<std::vector<Poly<K>>> m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows == 0 ? 0 : m[0].size();
    for (const auto& row : m) {
        if (row.size() != cols) throw invalid_input("ragged polynomial matrix");
    }
    std::vector<Poly<K>> diag;
    const std::size_t steps = std::min(rows, cols);

    for (std::size_t t = 0; t < steps; ++t) {
        // degree-minimal nonzero pivot in the trailing submatrix
        bool found = false;
        std::size_t pi = t, pj = t;
        std::size_t best = 0;
        for (std::size_t i = t; i < rows; ++i) {
            for (std::size_t j = t; j < cols; ++j) {
                if (m[i][j].is_zero()) continue;
                if (!found || m[i][j].degree() < best) {
                    found = true;
                    best = m[i][j].degree();
                    pi = i;
                    pj = j;
                }
            }
        }
        if (!found) break;
        std::swap(m[pi], m[t]);
        for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][pj], m[i][t]);

        for (bool settled = false; !settled;) {
            settled = true;
            // clear the pivot column
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (m[i][t].is_zero()) continue;
                const auto [q, r] = poly_divmod(m[i][t], m[t][t]);
                for (std::size_t j = t; j < cols; ++j) m[i][j] = m[i][j] - q * m[t][j];
                if (!r.is_zero()) {
                    std::swap(m[i], m[t]);  // strictly smaller pivot degree
                    settled = false;
                }
            }
            if (!settled) continue;
            // clear the pivot row
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (m[t][j].is_zero()) continue;
                const auto [q, r] = poly_divmod(m[t][j], m[t][t]);
                for (std::size_t i = t; i < rows; ++i) m[i][j] = m[i][j] - q * m[i][t];
                if (!r.is_zero()) {
                    for (std::size_t i = t; i < rows; ++i) std::swap(m[i][j], m[i][t]);
                    settled = false;
                }
            }
            if (!settled) continue;
            // enforce divisibility into the rest of the submatrix
            for (std::size_t i = t + 1; i < rows && settled; ++i) {
                for (std::size_t j = t + 1; j < cols && settled; ++j) {
                    if (m[i][j].is_zero()) continue;
                    if (!poly_divmod(m[i][j], m[t][t]).remainder.is_zero()) {
                        for (std::size_t c = t; c < cols; ++c) m[t][c] = m[t][c] + m[i][c];
                        settled = false;
                    }
                }
            }
        }
        diag.push_back(m[t][t].make_monic());
    }
    while (diag.size() < steps) diag.push_back(Poly<K>());
    return diag;
}

/**
 * The k[x]-module defined by a square matrix acting on k^n: torsion
 * invariant factors of xI - A in divisibility order (free rank is always
 * zero). The product of the factors is the characteristic polynomial and
 * the largest factor is the minimal polynomial.
 */
template <FieldScalar K>
ModulePresentation<K> matrix_to_module(const Matrix<K>& a) {
    if (!a.is_square()) throw invalid_input("module of a non-square matrix");
    const std::size_t n = a.rows();
    const K one = one_like(a.field_zero());
    std::vector<std::vector<Poly<K>>> xi_minus_a(n, std::vector<Poly<K>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            xi_minus_a[i][j] = (i == j) ? Poly<K>::monomial(one, 1) - Poly<K>::constant(a(i, j))
                                        : Poly<K>::constant(-a(i, j));
        }
    }
    ModulePresentation<K> out;
    for (auto& f : smith_invariant_factors(std::move(xi_minus_a))) {
        if (f.is_zero()) throw internal_inconsistency("xI - A has a zero invariant factor");
        if (f.degree() >= 1) out.torsion.push_back(std::move(f));
    }
    return out;
}

/**
 * Rewrites the torsion list in invariant-factor form (f_1 | f_2 | ...),
 * merging and splitting cyclic factors as needed. Lets elementary-divisor
 * style presentations be entered verbatim and then normalized.
 */
template <FieldScalar K>
ModulePresentation<K> normalize_presentation(const ModulePresentation<K>& m) {
    validate_presentation(m);
    if (m.torsion.empty()) return m;
    const std::size_t k = m.torsion.size();
    std::vector<std::vector<Poly<K>>> diag(k, std::vector<Poly<K>>(k));
    for (std::size_t i = 0; i < k; ++i) diag[i][i] = m.torsion[i];
    ModulePresentation<K> out;
    out.free_rank = m.free_rank;
    for (auto& f : smith_invariant_factors(std::move(diag))) {
        if (!f.is_zero() && f.degree() >= 1) out.torsion.push_back(std::move(f));
    }
    return out;
}

}  // namespace kxcn
