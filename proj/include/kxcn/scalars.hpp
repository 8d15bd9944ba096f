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
 * @file scalars.hpp
 * @brief Exact field scalars: arbitrary-precision rationals and prime fields.
 *
 * Every algorithm in this library is generic over a FieldScalar. Two models
 * are provided:
 *
 *  - Rational: an element of Q, GMP-backed, always reduced with positive
 *    denominator, so equality is structural.
 *  - PrimeField: an element of F_p for a prime p < 2^32. Each value carries
 *    its modulus; combining values with different moduli throws.
 *
 * PrimeField has no default constructor on purpose: a residue without a
 * modulus is meaningless. Generic code obtains constants through the
 * exemplar-based helpers zero_like / one_like / from_integer.
 */

#pragma once

#include <gmpxx.h>

#include <atomic>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include "kxcn/errors.hpp"

namespace kxcn {

/// Deterministic primality test by trial division. Sufficient for the
/// supported 32-bit modulus range (divisors stay below 2^16).
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull}) {
        if (n % d == 0) return n == d;
    }
    for (std::uint64_t d = 11; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

/// Validates a prime-field modulus. Caches the most recently accepted
/// modulus so that the per-value constructor stays cheap.
inline void ensure_valid_modulus(std::uint64_t p) {
    static std::atomic<std::uint64_t> last_accepted{0};
    if (last_accepted.load(std::memory_order_relaxed) == p) return;
    if (p > 0xFFFFFFFFull) {
        throw invalid_input("prime-field modulus exceeds the supported 32-bit range: " + std::to_string(p));
    }
    if (!is_prime_u64(p)) {
        throw invalid_input("prime-field modulus is not prime: " + std::to_string(p));
    }
    last_accepted.store(p, std::memory_order_relaxed);
}

/**
 * @brief An element of Q with structural equality.
 *
 * Invariant: the wrapped value is in lowest terms with positive denominator
 * (GMP canonical form), re-established after every mutating operation.
 */
class Rational {
   public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor): mirrors integer literals
    explicit Rational(const mpz_class& n) : v_(n) {}
    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw invalid_input("rational with zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }

    Rational inverse() const {
        if (is_zero()) throw invalid_input("inverse of zero");
        Rational r;
        r.v_ = 1 / v_;
        return r;
    }

    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    /// Canonical text form: "a" when the denominator is 1, else "a/b".
    std::string to_string() const { return v_.get_str(); }

    friend Rational operator+(const Rational& a, const Rational& b) { return wrap(a.v_ + b.v_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return wrap(a.v_ - b.v_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return wrap(a.v_ * b.v_); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw invalid_input("division by zero");
        return wrap(a.v_ / b.v_);
    }
    Rational operator-() const { return wrap(-v_); }

    Rational& operator+=(const Rational& b) { v_ += b.v_; return *this; }
    Rational& operator-=(const Rational& b) { v_ -= b.v_; return *this; }
    Rational& operator*=(const Rational& b) { v_ *= b.v_; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

   private:
    static Rational wrap(mpq_class q) {
        Rational r;
        r.v_ = std::move(q);
        return r;
    }

    mpq_class v_;  // kept canonical by mpq arithmetic
};

inline Rational zero_like(const Rational&) { return Rational(); }
inline Rational one_like(const Rational&) { return Rational(1); }
inline Rational from_integer(const Rational&, std::int64_t n) { return Rational(mpz_class(static_cast<long>(n))); }
inline std::uint64_t field_characteristic(const Rational&) { return 0; }
inline bool same_field(const Rational&, const Rational&) { return true; }

/**
 * @brief An element of F_p, p prime, p < 2^32.
 *
 * The residue satisfies 0 <= value < p. The modulus travels with the value;
 * any binary operation on values with different moduli throws invalid_input.
 */
class PrimeField {
   public:
    PrimeField(std::uint64_t value, std::uint64_t p) : p_(p) {
        ensure_valid_modulus(p);
        v_ = value % p;
    }

    static PrimeField from_int(std::int64_t value, std::uint64_t p) {
        ensure_valid_modulus(p);
        std::int64_t r = value % static_cast<std::int64_t>(p);
        if (r < 0) r += static_cast<std::int64_t>(p);
        return PrimeField(static_cast<std::uint64_t>(r), p);
    }

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return p_; }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1 % p_; }

    PrimeField inverse() const {
        if (v_ == 0) throw invalid_input("inverse of zero");
        // extended Euclid; all quantities fit in int64 because p < 2^32
        std::int64_t t0 = 0, t1 = 1;
        std::int64_t r0 = static_cast<std::int64_t>(p_), r1 = static_cast<std::int64_t>(v_);
        while (r1 != 0) {
            std::int64_t q = r0 / r1;
            std::int64_t t2 = t0 - q * t1;
            t0 = t1; t1 = t2;
            std::int64_t r2 = r0 - q * r1;
            r0 = r1; r1 = r2;
        }
        if (t0 < 0) t0 += static_cast<std::int64_t>(p_);
        return PrimeField(static_cast<std::uint64_t>(t0), p_);
    }

    std::string to_string() const { return std::to_string(v_) + " mod " + std::to_string(p_); }

    friend PrimeField operator+(const PrimeField& a, const PrimeField& b) {
        a.check_same(b);
        std::uint64_t s = a.v_ + b.v_;
        if (s >= a.p_) s -= a.p_;
        return PrimeField(s, a.p_);
    }
    friend PrimeField operator-(const PrimeField& a, const PrimeField& b) {
        a.check_same(b);
        return PrimeField(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.p_ - b.v_, a.p_);
    }
    friend PrimeField operator*(const PrimeField& a, const PrimeField& b) {
        a.check_same(b);
        return PrimeField((a.v_ * b.v_) % a.p_, a.p_);  // p < 2^32, no overflow
    }
    friend PrimeField operator/(const PrimeField& a, const PrimeField& b) { return a * b.inverse(); }
    PrimeField operator-() const { return PrimeField(v_ == 0 ? 0 : p_ - v_, p_); }

    PrimeField& operator+=(const PrimeField& b) { return *this = *this + b; }
    PrimeField& operator-=(const PrimeField& b) { return *this = *this - b; }
    PrimeField& operator*=(const PrimeField& b) { return *this = *this * b; }

    friend bool operator==(const PrimeField& a, const PrimeField& b) {
        a.check_same(b);
        return a.v_ == b.v_;
    }
    friend bool operator!=(const PrimeField& a, const PrimeField& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const PrimeField& r) { return os << r.to_string(); }

   private:
    void check_same(const PrimeField& b) const {
        if (p_ != b.p_) {
            throw invalid_input("mixed prime-field moduli: " + std::to_string(p_) + " vs " + std::to_string(b.p_));
        }
    }

    std::uint64_t v_;
    std::uint64_t p_;
};

inline PrimeField zero_like(const PrimeField& a) { return PrimeField(0, a.modulus()); }
inline PrimeField one_like(const PrimeField& a) { return PrimeField(1, a.modulus()); }
inline PrimeField from_integer(const PrimeField& a, std::int64_t n) { return PrimeField::from_int(n, a.modulus()); }
inline std::uint64_t field_characteristic(const PrimeField& a) { return a.modulus(); }
inline bool same_field(const PrimeField& a, const PrimeField& b) { return a.modulus() == b.modulus(); }

/// The scalar interface every generic algorithm in this library relies on.
template <class K>
concept FieldScalar = std::copy_constructible<K> && requires(const K& a, const K& b) {
    { a + b } -> std::same_as<K>;
    { a - b } -> std::same_as<K>;
    { a * b } -> std::same_as<K>;
    { a / b } -> std::same_as<K>;
    { -a } -> std::same_as<K>;
    { a == b } -> std::convertible_to<bool>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.is_one() } -> std::convertible_to<bool>;
    { a.inverse() } -> std::same_as<K>;
    { a.to_string() } -> std::convertible_to<std::string>;
    { zero_like(a) } -> std::same_as<K>;
    { one_like(a) } -> std::same_as<K>;
    { from_integer(a, std::int64_t{}) } -> std::same_as<K>;
    { same_field(a, b) } -> std::convertible_to<bool>;
    { field_characteristic(a) } -> std::convertible_to<std::uint64_t>;
};

static_assert(FieldScalar<Rational>);
static_assert(FieldScalar<PrimeField>);

}  // namespace kxcn
