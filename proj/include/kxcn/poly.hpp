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
 * @file poly.hpp
 * @brief Dense univariate polynomials over a FieldScalar.
 *
 * Coefficients are stored lowest degree first with no trailing zeros; the
 * zero polynomial is the empty coefficient list. Degrees in this library are
 * bounded by matrix dimensions, so dense storage and schoolbook arithmetic
 * are the right trade-off.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "kxcn/errors.hpp"
#include "kxcn/scalars.hpp"

namespace kxcn {

template <FieldScalar K>
class Poly {
   public:
    /// The zero polynomial.
    Poly() = default;

    explicit Poly(std::vector<K> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static Poly constant(const K& c) {
        if (c.is_zero()) return Poly();
        return Poly(std::vector<K>{c});
    }

    static Poly monomial(const K& c, std::size_t degree) {
        if (c.is_zero()) return Poly();
        std::vector<K> v(degree + 1, zero_like(c));
        v[degree] = c;
        return Poly(std::move(v));
    }

    /// x^a, with the coefficient field taken from `one`.
    static Poly x_power(std::size_t a, const K& one) { return monomial(one_like(one), a); }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_one() const { return coeffs_.size() == 1 && coeffs_[0].is_one(); }

    std::size_t degree() const {
        if (is_zero()) throw invalid_input("degree of the zero polynomial");
        return coeffs_.size() - 1;
    }

    const std::vector<K>& coeffs() const { return coeffs_; }

    const K& leading() const {
        if (is_zero()) throw invalid_input("leading coefficient of the zero polynomial");
        return coeffs_.back();
    }

    bool is_monic() const { return !is_zero() && leading().is_one(); }

    /// Coefficient of x^i, or `zero` when i exceeds the degree.
    K coeff_or(std::size_t i, const K& zero) const { return i < coeffs_.size() ? coeffs_[i] : zero_like(zero); }

    Poly make_monic() const {
        if (is_zero()) throw invalid_input("cannot normalize the zero polynomial");
        return *this * Poly::constant(leading().inverse());
    }

    /// Horner evaluation; the zero polynomial evaluates to 0 in the field of `at`.
    K evaluate(const K& at) const {
        K acc = zero_like(at);
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            acc = acc * at + coeffs_[i];
        }
        return acc;
    }

    /// Divides out x^k (requires x^k | f).
    Poly shift_down(std::size_t k) const {
        if (is_zero()) return Poly();
        if (coeffs_.size() <= k) throw invalid_input("shift_down exceeds degree");
        for (std::size_t i = 0; i < k; ++i) {
            if (!coeffs_[i].is_zero()) throw invalid_input("shift_down of a polynomial not divisible by x^k");
        }
        return Poly(std::vector<K>(coeffs_.begin() + static_cast<std::ptrdiff_t>(k), coeffs_.end()));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const K zero = zero_like(a.coeffs_[0]);
        std::vector<K> out(std::max(a.coeffs_.size(), b.coeffs_.size()), zero);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out[i] = out[i] + a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) out[i] = out[i] + b.coeffs_[i];
        return Poly(std::move(out));
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    Poly operator-() const {
        std::vector<K> out;
        out.reserve(coeffs_.size());
        for (const K& c : coeffs_) out.push_back(-c);
        return Poly(std::move(out));
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        const K zero = zero_like(a.coeffs_[0]);
        std::vector<K> out(a.coeffs_.size() + b.coeffs_.size() - 1, zero);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                out[i + j] = out[i + j] + a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return Poly(std::move(out));
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.coeffs_.size() != b.coeffs_.size()) return false;
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (!(a.coeffs_[i] == b.coeffs_[i])) return false;
        }
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// Canonical text form, e.g. "1 + -2*x + 1*x^2". "0" for the zero
    /// polynomial. Re-parseable by the library parsers.
    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        bool first = true;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i].is_zero()) continue;
            if (!first) out += " + ";
            first = false;
            out += coeffs_[i].to_string();
            if (i == 1) out += "*x";
            else if (i >= 2) out += "*x^" + std::to_string(i);
        }
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }

   private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<K> coeffs_;
};

template <FieldScalar K>
struct PolyDivision {
    Poly<K> quotient;
    Poly<K> remainder;
};

/// Euclidean division; the divisor must be nonzero.
template <FieldScalar K>
PolyDivision<K> poly_divmod(const Poly<K>& f, const Poly<K>& g) {
    if (g.is_zero()) throw invalid_input("polynomial division by zero");
    if (f.is_zero() || f.degree() < g.degree()) return {Poly<K>(), f};
    const K zero = zero_like(g.leading());
    const K lead_inv = g.leading().inverse();
    std::vector<K> rem = f.coeffs();
    std::vector<K> quot(f.degree() - g.degree() + 1, zero);
    const auto& gc = g.coeffs();
    for (std::size_t k = rem.size(); k-- > gc.size() - 1;) {
        const std::size_t shift = k - (gc.size() - 1);
        if (rem[k].is_zero()) continue;
        const K q = rem[k] * lead_inv;
        quot[shift] = q;
        for (std::size_t i = 0; i < gc.size(); ++i) {
            rem[shift + i] = rem[shift + i] - q * gc[i];
        }
    }
    return {Poly<K>(std::move(quot)), Poly<K>(std::move(rem))};
}

template <FieldScalar K>
Poly<K> operator/(const Poly<K>& f, const Poly<K>& g) { return poly_divmod(f, g).quotient; }

template <FieldScalar K>
Poly<K> operator%(const Poly<K>& f, const Poly<K>& g) { return poly_divmod(f, g).remainder; }

template <FieldScalar K>
struct XgcdResult {
    Poly<K> gcd;  // monic
    Poly<K> u;
    Poly<K> v;  // u*f + v*g == gcd
};

/**
 * Extended Euclidean algorithm. The returned gcd is monic and the Bezout
 * pair is the minimal one: deg u < deg g - deg gcd whenever g does not
 * divide f (and symmetrically for v).
 */
template <FieldScalar K>
XgcdResult<K> poly_xgcd(const Poly<K>& f, const Poly<K>& g) {
    if (f.is_zero() && g.is_zero()) throw invalid_input("xgcd(0, 0) is undefined");
    if (g.is_zero()) {
        const K inv = f.leading().inverse();
        return {f.make_monic(), Poly<K>::constant(inv), Poly<K>()};
    }
    if (f.is_zero()) {
        const K inv = g.leading().inverse();
        return {g.make_monic(), Poly<K>(), Poly<K>::constant(inv)};
    }
    const K one = one_like(f.leading());
    Poly<K> r0 = f, r1 = g;
    Poly<K> s0 = Poly<K>::constant(one), s1;
    Poly<K> t0, t1 = Poly<K>::constant(one);
    while (!r1.is_zero()) {
        auto [q, r] = poly_divmod(r0, r1);
        r0 = std::exchange(r1, r);
        s0 = std::exchange(s1, s0 - q * s1);
        t0 = std::exchange(t1, t0 - q * t1);
    }
    const K inv = r0.leading().inverse();
    const Poly<K> scale = Poly<K>::constant(inv);
    return {r0 * scale, s0 * scale, t0 * scale};
}

template <FieldScalar K>
Poly<K> poly_gcd(const Poly<K>& f, const Poly<K>& g) { return poly_xgcd(f, g).gcd; }

template <FieldScalar K>
struct XAdicSplit {
    std::size_t valuation;  // largest a with x^a | f
    Poly<K> unit_part;      // g with f = x^a * g and g(0) != 0
};

/// Splits a nonzero f as x^a * g with g(0) != 0.
template <FieldScalar K>
XAdicSplit<K> x_adic_valuation(const Poly<K>& f) {
    if (f.is_zero()) throw invalid_input("x-adic valuation of the zero polynomial");
    std::size_t a = 0;
    while (f.coeffs()[a].is_zero()) ++a;
    return {a, f.shift_down(a)};
}

}  // namespace kxcn
