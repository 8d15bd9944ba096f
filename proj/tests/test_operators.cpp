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

#include <catch2/catch.hpp>

#include "kxcn/cn.hpp"
#include "kxcn/kxmodule.hpp"
#include "kxcn/operators.hpp"
#include "test_support.hpp"

using namespace kxcn;
using namespace kxcn::testsupport;

namespace {

const Rational q0(0);
const Rational q1(1);

SparseVector<Rational> monomial_vec(std::uint64_t degree, const Rational& c = Rational(1)) {
    SparseVector<Rational> v;
    v.add_term(mono_index(degree), c);
    return v;
}

/// Random polynomial as a sparse vector over the monomial basis e<i> = x^i.
SparseVector<Rational> random_poly_vector(Rng& rng, std::uint64_t max_degree, bool even_only = false) {
    std::uniform_int_distribution<std::uint64_t> deg(0, max_degree);
    SparseVector<Rational> v;
    const std::uint64_t d = deg(rng);
    for (std::uint64_t i = 0; i <= d; ++i) {
        if (even_only && i % 2 == 1) continue;
        v.add_term(mono_index(i), random_scalar(rng, q0));
    }
    return v;
}

}  // namespace

TEST_CASE("built-in rules on the worked examples", "[operators]") {
    const auto shift = make_left_shift(q1);
    CHECK(apply(shift, SparseVector<Rational>::unit(mono_index(3), q1)) ==
          SparseVector<Rational>::unit(mono_index(2), q1));
    CHECK(apply(shift, SparseVector<Rational>::unit(mono_index(1), q1)).is_zero());

    const auto deriv = make_poly_derivative(q1);
    CHECK(apply(deriv, monomial_vec(2)) == monomial_vec(1, Rational(2)));

    const auto evod = make_even_odd(q1);
    CHECK(apply(evod, monomial_vec(1)) == monomial_vec(1, Rational(2)));
    CHECK(apply(evod, monomial_vec(2)) == monomial_vec(0));
    CHECK(apply(evod, monomial_vec(0)).is_zero());

    const auto hx = make_homothecy_hx(q1);
    CHECK(apply(hx, SparseVector<Rational>::unit(graded_index(3, 0), q1)) ==
          SparseVector<Rational>::unit(graded_index(3, 1), q1));
    CHECK(apply(hx, SparseVector<Rational>::unit(graded_index(3, 2), q1)).is_zero());

    CHECK(apply_power(shift, SparseVector<Rational>::unit(mono_index(5), q1), 0) ==
          SparseVector<Rational>::unit(mono_index(5), q1));
}

TEST_CASE("indices outside the declared set are rejected", "[operators]") {
    const auto shift = make_left_shift(q1);
    CHECK_THROWS_AS(apply(shift, SparseVector<Rational>::unit(mono_index(0), q1)), invalid_input);
    CHECK_THROWS_AS(apply(shift, SparseVector<Rational>::unit(graded_index(2, 0), q1)), invalid_input);
    const auto hx = make_homothecy_hx(q1);
    CHECK_THROWS_AS(apply(hx, SparseVector<Rational>::unit(graded_index(2, 2), q1)), invalid_input);
}

TEST_CASE("linearity of the extension", "[operators][property]") {
    auto rng = make_rng(0x11ea5);
    const auto evod = make_even_odd(q1);
    for (int i = 0; i < 100; ++i) {
        const auto u = random_poly_vector(rng, 20);
        const auto v = random_poly_vector(rng, 20);
        const Rational a = random_scalar(rng, q0);
        const Rational b = random_scalar(rng, q0);
        CHECK(apply(evod, u.scaled(a) + v.scaled(b)) == apply(evod, u).scaled(a) + apply(evod, v).scaled(b));
    }
}

TEST_CASE("pointwise nilpotency witnesses", "[operators]") {
    const auto deriv = make_poly_derivative(q1);
    auto rng = make_rng(0x9e1);
    for (std::uint64_t d = 0; d <= 10; ++d) {
        SparseVector<Rational> v;  // degree exactly d
        for (std::uint64_t i = 0; i < d; ++i) v.add_term(mono_index(i), random_scalar(rng, q0));
        v.add_term(mono_index(d), Rational(1));
        const auto witness = pointwise_nilpotency_witness(deriv, v, 64);
        REQUIRE(witness);
        CHECK(*witness == d + 1);  // repeated differentiation kills degree d after d+1 steps
        CHECK(!apply_power(deriv, v, *witness - 1).is_zero());
    }

    const auto shift = make_left_shift(q1);
    const auto e5 = SparseVector<Rational>::unit(mono_index(5), q1);
    CHECK(pointwise_nilpotency_witness(shift, e5, 64) == std::optional<std::uint64_t>{5});

    // the odd part of x never dies: iterating keeps a nonzero odd coefficient
    const auto evod = make_even_odd(q1);
    CHECK(!pointwise_nilpotency_witness(evod, monomial_vec(1), 100));

    CHECK(pointwise_nilpotency_witness(shift, SparseVector<Rational>(), 8) == std::optional<std::uint64_t>{0});
    CHECK_THROWS_AS(pointwise_nilpotency_witness(shift, e5, 0), invalid_input);
}

TEST_CASE("surjectivity witnesses", "[operators]") {
    SECTION("left shift at e1: both sides vanish at m = 1") {
        const auto shift = make_left_shift(q1);
        const auto e1 = SparseVector<Rational>::unit(mono_index(1), q1);
        const auto r = surjectivity_witness(shift, e1, 8);
        REQUIRE(r.found());
        CHECK(r.m == 1);
        CHECK(apply_power(shift, r.witness, r.m + 1) == apply_power(shift, e1, r.m));
        CHECK(apply_power(shift, e1, r.m).is_zero());
    }
    SECTION("homothecy kills the n = 2 summand after two steps") {
        const auto hx = make_homothecy_hx(q1);
        const auto v = SparseVector<Rational>::unit(graded_index(2, 0), q1);
        const auto r = surjectivity_witness(hx, v, 8);
        REQUIRE(r.found());
        CHECK(r.m == 2);
        CHECK(r.witness.is_zero());
        CHECK(apply_power(hx, v, 2).is_zero());
    }
    SECTION("even/odd operator always finds a witness of small index") {
        const auto evod = make_even_odd(q1);
        auto rng = make_rng(0x5117);
        for (std::uint64_t d = 1; d <= 6; ++d) {
            SparseVector<Rational> v;
            for (std::uint64_t i = 0; i <= d; ++i) v.add_term(mono_index(i), random_scalar(rng, q0));
            v.add_term(mono_index(d), Rational(1));
            const auto r = surjectivity_witness(evod, v, 16);
            REQUIRE(r.found());
            CHECK(r.m <= d);
            CHECK(apply_power(evod, r.witness, r.m + 1) == apply_power(evod, v, r.m));
        }
    }
    SECTION("a strictly raising operator has no witness") {
        // e<i> -> e<i+1> on 0 <= i <= 40: nothing reaches back down
        BasisOperator<Rational> raise(q1);
        raise.name = "raise";
        raise.valid_index = [](const BasisIndex& b) { return !b.secondary && b.primary <= 40; };
        raise.image_of = [](const BasisIndex& b) {
            SparseVector<Rational> out;
            if (b.primary + 1 <= 40) out.add_term(mono_index(b.primary + 1), Rational(1));
            return out;
        };
        raise.band = 1;
        const auto r = surjectivity_witness(raise, SparseVector<Rational>::unit(mono_index(0), q1), 3);
        CHECK(r.status == SurjectivitySearch<Rational>::Status::no_witness);
    }
    SECTION("larger gaps through the iterated query") {
        const auto evod = make_even_odd(q1);
        auto rng = make_rng(0x6a9);
        for (std::uint64_t gap = 2; gap <= 4; ++gap) {
            const auto v = random_poly_vector(rng, 6);
            if (v.is_zero()) continue;
            const auto r = surjectivity_witness_gap(evod, v, 16, gap);
            REQUIRE(r.found());
            CHECK(apply_power(evod, r.witness, r.m + gap) == apply_power(evod, v, r.m));
        }
        const auto hx = make_homothecy_hx(q1);
        const auto r = surjectivity_witness_gap(hx, SparseVector<Rational>::unit(graded_index(3, 0), q1), 8, 2);
        REQUIRE(r.found());
        CHECK(r.m == 3);  // phi^3 kills the n = 3 summand; nothing shorter reaches back by two
        CHECK(r.witness.is_zero());
        CHECK_THROWS_AS(surjectivity_witness_gap(hx, SparseVector<Rational>::unit(graded_index(3, 0), q1), 8, 0),
                        invalid_input);
    }
    SECTION("window overflow is reported as such") {
        BasisOperator<Rational> wide(q1);
        wide.name = "wide";
        wide.valid_index = [](const BasisIndex& b) { return !b.secondary; };
        wide.image_of = [](const BasisIndex& b) {
            SparseVector<Rational> out;
            out.add_term(mono_index(b.primary + 2), Rational(1));
            return out;
        };
        wide.band = 2;
        wide.truncation.max_index = 10;
        const auto r = surjectivity_witness(wide, SparseVector<Rational>::unit(mono_index(9), q1), 8);
        CHECK(r.status == SurjectivitySearch<Rational>::Status::window_exhausted);
    }
}

TEST_CASE("pointwise Drazin application", "[operators]") {
    const auto evod = make_even_odd(q1);
    CHECK(pointwise_drazin_apply(evod, monomial_vec(1)) == monomial_vec(1, Rational(1, 2)));
    CHECK(pointwise_drazin_apply(evod, monomial_vec(2)).is_zero());
    CHECK(pointwise_drazin_apply(evod, SparseVector<Rational>()).is_zero());

    const auto shift = make_left_shift(q1);
    CHECK_THROWS_AS(pointwise_drazin_apply(shift, monomial_vec(1)), unsupported_operator);

    // over a prime field the operator exists but refuses the inverse rule
    const auto evod_p = make_even_odd(PrimeField(1, 7));
    CHECK(apply(evod_p, SparseVector<PrimeField>::unit(mono_index(1), PrimeField(1, 7))) ==
          SparseVector<PrimeField>::unit(mono_index(1), PrimeField(1, 7)).scaled(PrimeField(2, 7)));
    CHECK_THROWS_AS(pointwise_drazin_apply(evod_p, SparseVector<PrimeField>::unit(mono_index(1), PrimeField(1, 7))),
                    unsupported_operator);
    CHECK(!evod_p.kernel_predicate);
}

TEST_CASE("even/odd round-trip on odd monomials", "[operators][property]") {
    const auto evod = make_even_odd(q1);
    for (std::uint64_t i = 0; i <= 25; ++i) {
        const auto odd = monomial_vec(2 * i + 1);
        CHECK(pointwise_drazin_apply(evod, apply(evod, odd)) == odd);
    }
}

TEST_CASE("pointwise axiom verification", "[operators]") {
    const auto evod = make_even_odd(q1);
    SECTION("the registered rule passes on random polynomials") {
        auto rng = make_rng(0xa1a);
        std::vector<SparseVector<Rational>> samples;
        for (int i = 0; i < 25; ++i) samples.push_back(random_poly_vector(rng, 50));
        const auto report = verify_pointwise_axioms(evod, samples, 64);
        CHECK(report.all_pass());
    }
    SECTION("the zero rule against the left shift") {
        const auto shift = make_left_shift(q1);
        const LinearRule<Rational> zero_rule = [](const BasisIndex&) { return SparseVector<Rational>(); };
        const auto report =
            verify_pointwise_axioms(shift, zero_rule, {SparseVector<Rational>::unit(mono_index(1), q1)}, 8);
        REQUIRE(report.entries.size() == 1);
        CHECK(report.entries[0].fixed_point);
        CHECK(report.entries[0].commutes);
        CHECK(report.entries[0].power_m == std::optional<std::uint64_t>{1});
    }
    SECTION("a perturbed rule fails the fixed-point identity") {
        // add x -> x on top of the true inverse rule; on the sample {x} the
        // first identity degrades: a(x) = 3/2 x, a(phi(a(x))) = 9/2 x
        const LinearRule<Rational> perturbed = [&](const BasisIndex& b) {
            auto out = evod.drazin_image_of(b);
            if (b == mono_index(1)) out.add_term(mono_index(1), Rational(1));
            return out;
        };
        const auto report = verify_pointwise_axioms(evod, perturbed, {monomial_vec(1)}, 8);
        REQUIRE(report.entries.size() == 1);
        CHECK(!report.entries[0].fixed_point);
    }
}

TEST_CASE("kernel membership answers", "[operators]") {
    const auto evod = make_even_odd(q1);
    SparseVector<Rational> even;
    even.add_term(mono_index(0), Rational(1));
    even.add_term(mono_index(2), Rational(1));
    CHECK(kernel_membership(evod, even, 64) == std::optional<bool>{true});
    CHECK(kernel_membership(evod, monomial_vec(1), 64) == std::optional<bool>{false});

    const auto deriv = make_poly_derivative(q1);
    auto rng = make_rng(0xfeed5);
    for (int i = 0; i < 20; ++i) {
        CHECK(kernel_membership(deriv, random_poly_vector(rng, 30), 64) == std::optional<bool>{true});
    }

    // no predicate and no witness within budget: indeterminate
    BasisOperator<Rational> raise(q1);
    raise.name = "raise";
    raise.valid_index = [](const BasisIndex& b) { return !b.secondary && b.primary <= 100; };
    raise.image_of = [](const BasisIndex& b) {
        SparseVector<Rational> out;
        if (b.primary + 1 <= 100) out.add_term(mono_index(b.primary + 1), Rational(1));
        return out;
    };
    CHECK(!kernel_membership(raise, SparseVector<Rational>::unit(mono_index(0), q1), 4));
}

TEST_CASE("truncated homothecy families are nilpotent of index exactly N", "[operators][property]") {
    for (std::uint64_t n_max = 1; n_max <= 12; ++n_max) {
        const auto hx = make_homothecy_hx(q1);
        std::vector<BasisIndex> window;
        for (std::uint64_t n = 1; n <= n_max; ++n) {
            for (std::uint64_t j = 0; j < n; ++j) window.push_back(graded_index(n, j));
        }
        const auto a = materialize_on(hx, window);
        CHECK(index_of(a) == n_max);
        CHECK(matpow(a, n_max) == Matrix<Rational>::zeros(window.size(), window.size(), q0));
        if (n_max >= 1) {
            CHECK(matpow(a, n_max - 1) != Matrix<Rational>::zeros(window.size(), window.size(), q0));
        }
    }
}

TEST_CASE("truncated homothecy agrees with the module-side kernel", "[operators][property]") {
    const std::uint64_t n_max = 6;
    const auto hx = make_homothecy_hx(q1);
    // module picture: torsion x, x^2, ..., x^N; localizing kills everything
    ModulePresentation<Rational> m;
    std::size_t expected_dim = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        m.torsion.push_back(Poly<Rational>::x_power(n, q1));
        expected_dim += n;
    }
    const auto report = localize(m);
    CHECK(report.surjective);
    CHECK(report.localized.torsion.empty());
    CHECK(torsion_dimension(report.kernel) == expected_dim);

    // operator picture: every basis vector of the truncated family dies
    std::size_t counted = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        for (std::uint64_t j = 0; j < n; ++j) {
            const auto witness =
                pointwise_nilpotency_witness(hx, SparseVector<Rational>::unit(graded_index(n, j), q1), 16);
            REQUIRE(witness);
            CHECK(*witness == n - j);
            ++counted;
        }
    }
    CHECK(counted == expected_dim);
}

TEST_CASE("derivative truncations have unbounded index", "[operators][property]") {
    // On polynomials of degree <= N the derivative is nilpotent of index
    // exactly N+1, so the family admits no uniform bound. This is the
    // finite shadow of the derivative on power series, whose localization
    // sequence is exact but has no truncation-stable section; the full
    // space is outside the finite-support representation on purpose.
    const auto deriv = make_poly_derivative(q1);
    for (std::uint64_t n = 0; n <= 10; ++n) {
        std::vector<BasisIndex> window;
        for (std::uint64_t i = 0; i <= n; ++i) window.push_back(mono_index(i));
        const auto a = materialize_on(deriv, window);
        CHECK(index_of(a) == n + 1);
    }
}

TEST_CASE("banded operators solve preimages through exact linear systems", "[operators]") {
    // two-cycle on e<0>, e<1> with a tail feeding in from e<2>
    BasisOperator<Rational> op(q1);
    op.name = "banded";
    op.valid_index = [](const BasisIndex& b) { return !b.secondary && b.primary <= 2; };
    op.image_of = [](const BasisIndex& b) {
        SparseVector<Rational> out;
        if (b.primary == 0) out.add_term(mono_index(1), Rational(1));
        if (b.primary == 1) out.add_term(mono_index(0), Rational(1));
        if (b.primary == 2) out.add_term(mono_index(1), Rational(1));
        return out;
    };
    op.band = 2;
    const auto v = SparseVector<Rational>::unit(mono_index(0), q1);
    const auto r = surjectivity_witness(op, v, 4);
    REQUIRE(r.found());
    CHECK(apply_power(op, r.witness, r.m + 1) == apply_power(op, v, r.m));
}
