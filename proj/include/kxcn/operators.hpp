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
 * @file operators.hpp
 * @brief Rule-based endomorphisms of countable-basis spaces and their
 *        per-vector queries.
 *
 * Infinite-dimensional spaces are represented intensionally: an operator is
 * a rule sending each basis index to a finitely supported image, extended
 * by linearity. Per-vector questions (does some power kill this vector? is
 * its m-th image reachable from one power higher?) are semi-decidable by
 * iteration, so every search takes an explicit budget and every negative
 * answer is labeled budget-relative. The only definitive negatives come
 * from an operator's registered kernel predicate.
 *
 * Preimage searches solve exact linear systems on a finite index window.
 * The window is derived from the operator's band bound (images move an
 * index by at most `band`), and overflowing the truncation policy is a
 * distinct outcome, never a silent "no".
 */

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kxcn/errors.hpp"
#include "kxcn/matrix.hpp"
#include "kxcn/scalars.hpp"

namespace kxcn {

/// Index into a countable basis: either a plain index e<i> or a graded pair
/// e<n,j> for spaces assembled from summands.
struct BasisIndex {
    std::uint64_t primary = 0;
    std::optional<std::uint64_t> secondary{};

    friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;

    std::string to_string() const {
        if (secondary) return "e<" + std::to_string(primary) + "," + std::to_string(*secondary) + ">";
        return "e<" + std::to_string(primary) + ">";
    }
    friend std::ostream& operator<<(std::ostream& os, const BasisIndex& b) { return os << b.to_string(); }
};

inline BasisIndex mono_index(std::uint64_t i) { return {i, std::nullopt}; }
inline BasisIndex graded_index(std::uint64_t n, std::uint64_t j) { return {n, j}; }

/// Finitely supported vector; stored coefficients are nonzero and the empty
/// map is the zero vector.
template <FieldScalar K>
class SparseVector {
   public:
    SparseVector() = default;

    static SparseVector unit(const BasisIndex& b, const K& one) {
        SparseVector v;
        v.add_term(b, one_like(one));
        return v;
    }

    void add_term(const BasisIndex& b, const K& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(b);
        if (it == terms_.end()) {
            terms_.emplace(b, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t support_size() const { return terms_.size(); }
    const std::map<BasisIndex, K>& terms() const { return terms_; }

    SparseVector scaled(const K& c) const {
        SparseVector out;
        for (const auto& [b, v] : terms_) out.add_term(b, c * v);
        return out;
    }

    friend SparseVector operator+(const SparseVector& a, const SparseVector& b) {
        SparseVector out = a;
        for (const auto& [idx, c] : b.terms_) out.add_term(idx, c);
        return out;
    }

    friend SparseVector operator-(const SparseVector& a, const SparseVector& b) {
        SparseVector out = a;
        for (const auto& [idx, c] : b.terms_) out.add_term(idx, -c);
        return out;
    }

    friend bool operator==(const SparseVector& a, const SparseVector& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        auto ita = a.terms_.begin();
        auto itb = b.terms_.begin();
        for (; ita != a.terms_.end(); ++ita, ++itb) {
            if (ita->first != itb->first || !(ita->second == itb->second)) return false;
        }
        return true;
    }
    friend bool operator!=(const SparseVector& a, const SparseVector& b) { return !(a == b); }

    /// Canonical text form: "c1*e<i1> + c2*e<i2> + ...", or "0".
    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [b, c] : terms_) {
            if (!first) out += " + ";
            first = false;
            out += c.to_string() + "*" + b.to_string();
        }
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const SparseVector& v) { return os << v.to_string(); }

   private:
    std::map<BasisIndex, K> terms_;
};

template <FieldScalar K>
using LinearRule = std::function<SparseVector<K>(const BasisIndex&)>;

/// Bounds for preimage searches on truncated spaces.
struct TruncationPolicy {
    std::uint64_t max_index = 4096;    // largest admissible index component
    std::uint64_t max_window = 4096;   // largest admissible solve dimension
};

template <FieldScalar K>
struct BasisOperator {
    explicit BasisOperator(const K& exemplar) : one(one_like(exemplar)) {}

    std::string name;
    std::function<bool(const BasisIndex&)> valid_index;
    LinearRule<K> image_of;
    /// Closed-form pointwise inverse rule; empty when none is known.
    LinearRule<K> drazin_image_of;
    /// Definitive membership test for the union of the kernels of all
    /// powers; empty when no certification is available.
    std::function<bool(const SparseVector<K>&)> kernel_predicate;
    bool degree_lowering = false;
    std::uint64_t band = 1;  // |image index - source index| <= band, per component
    TruncationPolicy truncation{};
    K one;  // field exemplar

    bool has_drazin_rule() const { return static_cast<bool>(drazin_image_of); }
};

/// Linear extension of an arbitrary basis rule (domain-checked against the
/// operator's declared index set).
template <FieldScalar K>
SparseVector<K> apply_rule(const BasisOperator<K>& op, const LinearRule<K>& rule, const SparseVector<K>& v) {
    SparseVector<K> out;
    for (const auto& [b, c] : v.terms()) {
        if (!op.valid_index(b)) {
            throw invalid_input("basis index outside the declared set of operator " + op.name + ": " + b.to_string());
        }
        const SparseVector<K> image = rule(b);
        for (const auto& [ib, ic] : image.terms()) out.add_term(ib, c * ic);
    }
    return out;
}

template <FieldScalar K>
SparseVector<K> apply(const BasisOperator<K>& op, const SparseVector<K>& v) {
    return apply_rule(op, op.image_of, v);
}

template <FieldScalar K>
SparseVector<K> apply_power(const BasisOperator<K>& op, const SparseVector<K>& v, std::uint64_t n) {
    SparseVector<K> out = v;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (out.is_zero()) break;
        out = apply(op, out);
    }
    return out;
}

/// Applies the operator's registered pointwise inverse rule.
template <FieldScalar K>
SparseVector<K> pointwise_drazin_apply(const BasisOperator<K>& op, const SparseVector<K>& v) {
    if (!op.has_drazin_rule()) {
        throw unsupported_operator("operator " + op.name + " has no registered pointwise Drazin rule");
    }
    return apply_rule(op, op.drazin_image_of, v);
}

/**
 * Smallest n <= budget with op^n(v) = 0. Absent means "no witness within
 * the budget", not a disproof.
 */
template <FieldScalar K>
std::optional<std::uint64_t> pointwise_nilpotency_witness(const BasisOperator<K>& op, const SparseVector<K>& v,
                                                          std::uint64_t budget) {
    if (budget < 1) throw invalid_input("budget must be at least 1");
    SparseVector<K> cur = v;
    if (cur.is_zero()) return 0;
    for (std::uint64_t n = 1; n <= budget; ++n) {
        cur = apply(op, cur);
        if (cur.is_zero()) return n;
    }
    return std::nullopt;
}

/**
 * Definitive kernel-of-localization membership when the operator certifies
 * it; otherwise budget-relative: true when a vanishing power is found,
 * absent when the budget runs out.
 */
template <FieldScalar K>
std::optional<bool> kernel_membership(const BasisOperator<K>& op, const SparseVector<K>& v, std::uint64_t budget) {
    if (op.kernel_predicate) return op.kernel_predicate(v);
    if (pointwise_nilpotency_witness(op, v, budget)) return true;
    return std::nullopt;
}

template <FieldScalar K>
struct SurjectivitySearch {
    enum class Status {
        found,             // witness below
        no_witness,        // searched every m in [1, budget] without success
        window_exhausted,  // a solve exceeded the truncation policy
    };
    Status status;
    std::uint64_t m = 0;
    SparseVector<K> witness;  // w with op^{m+1}(w) = op^m(v)

    bool found() const { return status == Status::found; }
};

namespace detail {

/// Candidate source indices whose images under op^{steps} can overlap the
/// support of `target`: everything within `steps * band` of the support,
/// filtered by the declared index set.
template <FieldScalar K>
std::optional<std::vector<BasisIndex>> preimage_window(const BasisOperator<K>& op, const SparseVector<K>& target,
                                                       std::uint64_t steps) {
    const std::uint64_t radius = op.band * steps;
    std::set<BasisIndex> window;
    for (const auto& [t, c] : target.terms()) {
        if (t.primary + radius > op.truncation.max_index) return std::nullopt;
        const std::uint64_t plo = t.primary > radius ? t.primary - radius : 0;
        const std::uint64_t phi = t.primary + radius;
        if (t.secondary) {
            const std::uint64_t slo = *t.secondary > radius ? *t.secondary - radius : 0;
            const std::uint64_t shi = *t.secondary + radius;
            for (std::uint64_t p = plo; p <= phi; ++p) {
                for (std::uint64_t s = slo; s <= shi; ++s) {
                    const BasisIndex b{p, s};
                    if (op.valid_index(b)) window.insert(b);
                }
            }
        } else {
            for (std::uint64_t p = plo; p <= phi; ++p) {
                const BasisIndex b{p, std::nullopt};
                if (op.valid_index(b)) window.insert(b);
            }
        }
        if (window.size() > op.truncation.max_window) return std::nullopt;
    }
    return std::vector<BasisIndex>(window.begin(), window.end());
}

/// Exact solve of op^{steps}(w) = target over the window; the returned
/// witness is canonical (free coordinates zero).
template <FieldScalar K>
std::optional<SparseVector<K>> solve_preimage(const BasisOperator<K>& op, const SparseVector<K>& target,
                                              std::uint64_t steps, const std::vector<BasisIndex>& window) {
    std::vector<SparseVector<K>> images;
    images.reserve(window.size());
    std::set<BasisIndex> row_set;
    for (const auto& [t, c] : target.terms()) row_set.insert(t);
    for (const auto& b : window) {
        images.push_back(apply_power(op, SparseVector<K>::unit(b, op.one), steps));
        for (const auto& [ib, ic] : images.back().terms()) row_set.insert(ib);
    }
    std::vector<BasisIndex> row_list(row_set.begin(), row_set.end());
    std::map<BasisIndex, std::size_t> row_of;
    for (std::size_t i = 0; i < row_list.size(); ++i) row_of.emplace(row_list[i], i);

    const K zero = zero_like(op.one);
    Matrix<K> system = Matrix<K>::zeros(row_list.size(), window.size(), zero);
    for (std::size_t j = 0; j < window.size(); ++j) {
        for (const auto& [ib, ic] : images[j].terms()) system(row_of.at(ib), j) = ic;
    }
    std::vector<K> rhs(row_list.size(), zero);
    for (const auto& [t, c] : target.terms()) rhs[row_of.at(t)] = c;

    const auto x = kxcn::solve(system, rhs);
    if (!x) return std::nullopt;
    SparseVector<K> w;
    for (std::size_t j = 0; j < window.size(); ++j) w.add_term(window[j], (*x)[j]);
    return w;
}

}  // namespace detail

/**
 * Searches m = 1, 2, ..., budget for a w with op^{m+gap}(w) = op^m(v).
 * Answers are per-gap only; a found witness says nothing about larger gaps.
 */
template <FieldScalar K>
SurjectivitySearch<K> surjectivity_witness_gap(const BasisOperator<K>& op, const SparseVector<K>& v,
                                               std::uint64_t budget, std::uint64_t gap) {
    if (budget < 1) throw invalid_input("budget must be at least 1");
    if (gap < 1) throw invalid_input("gap must be at least 1");
    using Status = typename SurjectivitySearch<K>::Status;
    SparseVector<K> target = v;
    for (std::uint64_t m = 1; m <= budget; ++m) {
        target = apply(op, target);  // op^m(v)
        if (target.is_zero()) return {Status::found, m, SparseVector<K>{}};
        const auto window = detail::preimage_window(op, target, m + gap);
        if (!window) return {Status::window_exhausted, m, SparseVector<K>{}};
        if (auto w = detail::solve_preimage(op, target, m + gap, *window)) {
            return {Status::found, m, std::move(*w)};
        }
    }
    return {Status::no_witness, 0, SparseVector<K>{}};
}

/// The one-step reachability instance; iterate surjectivity_witness_gap to
/// cover larger gaps.
template <FieldScalar K>
SurjectivitySearch<K> surjectivity_witness(const BasisOperator<K>& op, const SparseVector<K>& v,
                                           std::uint64_t budget) {
    return surjectivity_witness_gap(op, v, budget, 1);
}

template <FieldScalar K>
struct PointwiseAxiomEntry {
    SparseVector<K> sample;
    bool fixed_point;                       // (a o phi o a)(v) == a(v)
    bool commutes;                          // (a o phi)(v) == (phi o a)(v)
    std::optional<std::uint64_t> power_m;   // smallest m <= budget with a(phi^{m+1} v) == phi^m v

    bool passes() const { return fixed_point && commutes && power_m.has_value(); }
};

template <FieldScalar K>
struct PointwiseAxiomReport {
    std::vector<PointwiseAxiomEntry<K>> entries;

    bool all_pass() const {
        for (const auto& e : entries) {
            if (!e.passes()) return false;
        }
        return true;
    }
};

/**
 * Exact per-vector verification of the pointwise inverse identities for a
 * candidate rule `alpha`. Failures become report entries, never errors.
 */
template <FieldScalar K>
PointwiseAxiomReport<K> verify_pointwise_axioms(const BasisOperator<K>& op, const LinearRule<K>& alpha,
                                                const std::vector<SparseVector<K>>& samples, std::uint64_t budget) {
    PointwiseAxiomReport<K> report;
    report.entries.reserve(samples.size());
    for (const auto& v : samples) {
        const SparseVector<K> av = apply_rule(op, alpha, v);
        const bool fixed_point = apply_rule(op, alpha, apply(op, av)) == av;
        const bool commutes = apply_rule(op, alpha, apply(op, v)) == apply(op, av);
        std::optional<std::uint64_t> power_m;
        SparseVector<K> phim = v;  // op^m(v)
        for (std::uint64_t m = 0; m <= budget; ++m) {
            if (apply_rule(op, alpha, apply(op, phim)) == phim) {
                power_m = m;
                break;
            }
            phim = apply(op, phim);
        }
        report.entries.push_back({v, fixed_point, commutes, power_m});
    }
    return report;
}

/// Convenience overload using the operator's own registered rule.
template <FieldScalar K>
PointwiseAxiomReport<K> verify_pointwise_axioms(const BasisOperator<K>& op,
                                                const std::vector<SparseVector<K>>& samples, std::uint64_t budget) {
    if (!op.has_drazin_rule()) {
        throw unsupported_operator("operator " + op.name + " has no registered pointwise Drazin rule");
    }
    return verify_pointwise_axioms(op, op.drazin_image_of, samples, budget);
}

/// Finite matrix of the operator on an explicit index window; the window
/// must be invariant (no image may escape it).
template <FieldScalar K>
Matrix<K> materialize_on(const BasisOperator<K>& op, const std::vector<BasisIndex>& window) {
    std::map<BasisIndex, std::size_t> pos;
    for (std::size_t i = 0; i < window.size(); ++i) pos.emplace(window[i], i);
    Matrix<K> out = Matrix<K>::zeros(window.size(), window.size(), zero_like(op.one));
    for (std::size_t j = 0; j < window.size(); ++j) {
        const auto img = apply(op, SparseVector<K>::unit(window[j], op.one));
        for (const auto& [b, c] : img.terms()) {
            auto it = pos.find(b);
            if (it == pos.end()) {
                throw invalid_input("operator image leaves the truncation window at " + b.to_string());
            }
            out(it->second, j) = c;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// built-in operators

/// Shift e_1 -> 0, e_i -> e_{i-1} on indices i >= 1.
template <FieldScalar K>
BasisOperator<K> make_left_shift(const K& one) {
    BasisOperator<K> op(one);
    op.name = "left_shift";
    op.valid_index = [](const BasisIndex& b) { return !b.secondary && b.primary >= 1; };
    const K unit = one_like(one);
    op.image_of = [unit](const BasisIndex& b) {
        SparseVector<K> out;
        if (b.primary >= 2) out.add_term(mono_index(b.primary - 1), unit);
        return out;
    };
    // every basis vector is killed by enough shifts
    op.kernel_predicate = [](const SparseVector<K>&) { return true; };
    op.degree_lowering = true;
    op.band = 1;
    return op;
}

/// Multiplication by x on the sum over n >= 1 of k[x]/(x^n); basis
/// e<n,j> with j < n is the class of x^j in the n-th summand.
template <FieldScalar K>
BasisOperator<K> make_homothecy_hx(const K& one) {
    BasisOperator<K> op(one);
    op.name = "homothecy_hx";
    op.valid_index = [](const BasisIndex& b) { return b.secondary && b.primary >= 1 && *b.secondary < b.primary; };
    const K unit = one_like(one);
    op.image_of = [unit](const BasisIndex& b) {
        SparseVector<K> out;
        if (*b.secondary + 1 < b.primary) out.add_term(graded_index(b.primary, *b.secondary + 1), unit);
        return out;
    };
    // x^n kills the n-th summand, so every vector dies in finitely many steps
    op.kernel_predicate = [](const SparseVector<K>&) { return true; };
    op.band = 1;
    return op;
}

/// Formal derivative on k[x]; basis e<i> is the monomial x^i.
template <FieldScalar K>
BasisOperator<K> make_poly_derivative(const K& one) {
    BasisOperator<K> op(one);
    op.name = "poly_derivative";
    op.valid_index = [](const BasisIndex& b) { return !b.secondary; };
    const K exemplar = one_like(one);
    op.image_of = [exemplar](const BasisIndex& b) {
        SparseVector<K> out;
        if (b.primary >= 1) {
            out.add_term(mono_index(b.primary - 1), from_integer(exemplar, static_cast<std::int64_t>(b.primary)));
        }
        return out;
    };
    // repeated differentiation annihilates every polynomial, in any characteristic
    op.kernel_predicate = [](const SparseVector<K>&) { return true; };
    op.degree_lowering = true;
    op.band = 1;
    return op;
}

/**
 * The even/odd operator on k[x]: even monomials shift down two degrees,
 * odd monomials x^j are scaled by j+1. Over a field of characteristic zero
 * it carries its closed-form pointwise inverse (kill the even part, divide
 * odd coefficients by j+1) and the kernel certificate "support is purely
 * even". Over a prime field the operator itself is available but no inverse
 * rule is registered, since the scalars j+1 need not be invertible.
 */
template <FieldScalar K>
BasisOperator<K> make_even_odd(const K& one) {
    BasisOperator<K> op(one);
    op.name = "even_odd";
    op.valid_index = [](const BasisIndex& b) { return !b.secondary; };
    const K exemplar = one_like(one);
    op.image_of = [exemplar](const BasisIndex& b) {
        SparseVector<K> out;
        const std::uint64_t j = b.primary;
        if (j % 2 == 1) {
            out.add_term(b, from_integer(exemplar, static_cast<std::int64_t>(j + 1)));
        } else if (j >= 2) {
            out.add_term(mono_index(j - 2), exemplar);
        }
        return out;
    };
    if (field_characteristic(one) == 0) {
        op.drazin_image_of = [exemplar](const BasisIndex& b) {
            SparseVector<K> out;
            if (b.primary % 2 == 1) {
                out.add_term(b, from_integer(exemplar, static_cast<std::int64_t>(b.primary + 1)).inverse());
            }
            return out;
        };
        op.kernel_predicate = [](const SparseVector<K>& v) {
            for (const auto& [b, c] : v.terms()) {
                if (b.primary % 2 == 1) return false;
            }
            return true;
        };
    }
    op.band = 2;
    return op;
}

}  // namespace kxcn
