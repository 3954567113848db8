#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pgfold/galois.hpp"

#include <cstdint>
#include <numeric>
#include <vector>

using namespace pgfold;

namespace {

// Test-side oracle: multiplicative order of x modulo a monic polynomial over
// GF(p), computed with plain coefficient-vector arithmetic. Independent of the
// packed-table implementation under test.
uint64_t oracle_order_of_x(uint64_t p, const std::vector<uint32_t>& poly) {
    const uint32_t e = uint32_t(poly.size() - 1);
    std::vector<uint32_t> cur(e, 0);
    cur[0] = 1;  // the constant 1
    uint64_t bound = 1;
    for (uint32_t i = 0; i < e; ++i) bound *= p;
    for (uint64_t step = 1; step <= bound; ++step) {
        // multiply by x
        std::vector<uint32_t> next(e, 0);
        for (uint32_t i = 0; i + 1 < e; ++i) next[i + 1] = cur[i];
        const uint32_t top = cur[e - 1];
        for (uint32_t i = 0; i < e; ++i) {
            next[i] = uint32_t((next[i] + top * (p - poly[i])) % p);
        }
        cur = next;
        bool is_one = (cur[0] == 1);
        for (uint32_t i = 1; i < e; ++i) is_one = is_one && cur[i] == 0;
        if (is_one) return step;
    }
    return 0;
}

FiniteField gf8() {
    return FiniteField::build({2, 3, {1, 1, 0, 1}});  // x^3 + x + 1
}

FiniteField gf64() {
    return FiniteField::build({2, 6, {1, 1, 0, 0, 0, 0, 1}});  // x^6 + x + 1
}

}  // namespace

TEST_CASE("GF(2^3) exp table matches the classic alpha powers") {
    auto f = gf8();
    CHECK(f.order() == 8);
    // alpha^0=1, alpha^1=alpha, alpha^2, alpha^3=alpha+1, alpha^4=alpha^2+alpha,
    // alpha^5=alpha^2+alpha+1, alpha^6=alpha^2+1 (packed bit i = x^i coord)
    const std::vector<uint64_t> expected = {0b001, 0b010, 0b100, 0b011, 0b110, 0b111, 0b101};
    CHECK(f.exp_table() == expected);
    CHECK(f.coeffs(f.from_log(3)) == std::vector<uint32_t>{1, 1, 0});
    CHECK(f.coeffs(f.from_log(6)) == std::vector<uint32_t>{1, 0, 1});
}

TEST_CASE("prime field GF(2) is the two-element field") {
    auto f = FiniteField::build({2, 1, {1, 1}});  // x + 1
    CHECK(f.order() == 2);
    CHECK(f.exp_table() == std::vector<uint64_t>{1});
    CHECK(f.add(f.one(), f.one()).is_zero());
}

TEST_CASE("GF(2^6): alpha has order 63") {
    CHECK(oracle_order_of_x(2, {1, 1, 0, 0, 0, 0, 1}) == 63);
    auto f = gf64();
    CHECK(f.group_order() == 63);
    // x^(p^e - 1) = 1 for every nonzero x
    for (uint64_t i = 0; i < f.group_order(); ++i) {
        CHECK(f.pow(f.from_log(int64_t(i)), int64_t(f.group_order())) == f.one());
    }
}

TEST_CASE("build_field rejects bad specs") {
    CHECK_THROWS_AS(FiniteField::build({4, 2, {1, 0, 1}}), std::invalid_argument);  // p not prime
    CHECK_THROWS_AS(FiniteField::build({2, 2, {1, 0, 1}}), std::invalid_argument);  // (x+1)^2
    CHECK_THROWS_AS(FiniteField::build({2, 4, {1, 1, 1, 1, 1}}), std::invalid_argument);
    // x^4+x^3+x^2+x+1 is irreducible but x has order 5, not 15
    CHECK_THROWS_WITH(FiniteField::build({2, 4, {1, 1, 1, 1, 1}}),
                      doctest::Contains("order 5"));
    CHECK_THROWS_AS(FiniteField::build({2, 25, default_primitive_poly(2, 3)}),
                    std::invalid_argument);  // coefficient count mismatch
    CHECK_THROWS_AS(FiniteField::build({2, 30, std::vector<uint32_t>(31, 1)}, 1 << 20),
                    std::invalid_argument);  // size bound
}

TEST_CASE("default primitive polynomials") {
    CHECK(default_primitive_poly(2, 3) == PolyCoeffs{1, 1, 0, 1});  // x^3 + x + 1
    CHECK(default_primitive_poly(2, 1) == PolyCoeffs{1, 1});        // x + 1
    CHECK(default_primitive_poly(2, 6) == PolyCoeffs{1, 1, 0, 0, 0, 0, 1});

    // Oracle: brute-force the smallest primitive monic quadratic over GF(3),
    // ordering candidates by (a1, a0).
    PolyCoeffs smallest;
    for (uint32_t a1 = 0; a1 < 3 && smallest.empty(); ++a1) {
        for (uint32_t a0 = 0; a0 < 3 && smallest.empty(); ++a0) {
            PolyCoeffs cand = {a0, a1, 1};
            if (oracle_order_of_x(3, cand) == 8) smallest = cand;
        }
    }
    CHECK(smallest == PolyCoeffs{2, 1, 1});  // x^2 + x + 2
    CHECK(default_primitive_poly(3, 2) == smallest);
}

TEST_CASE("field arithmetic identities") {
    auto f = gf8();
    // alpha + alpha^2 = alpha^4
    CHECK(f.add(f.from_log(1), f.from_log(2)) == f.from_log(4));
    // characteristic 2: a + a = 0
    for (uint64_t i = 0; i < f.group_order(); ++i) {
        CHECK(f.add(f.from_log(int64_t(i)), f.from_log(int64_t(i))).is_zero());
    }
    CHECK_THROWS_AS(f.inv(f.zero()), std::domain_error);
    CHECK(f.mul(f.from_log(5), f.inv(f.from_log(5))) == f.one());

    auto f64 = gf64();
    for (int64_t k : {0, 7, 30, 62}) {
        CHECK(f64.mul(f64.from_log(k), f64.from_log(21)) == f64.from_log((k + 21) % 63));
    }

    // exp/log round trip
    for (uint64_t v = 1; v < f.order(); ++v) {
        CHECK(f.packed(f.from_packed(v)) == v);
    }
}

TEST_CASE("odd characteristic arithmetic") {
    auto f = FiniteField::build({3, 2, {2, 1, 1}});  // x^2 + x + 2
    CHECK(f.order() == 9);
    for (uint64_t i = 0; i < 8; ++i) {
        auto a = f.from_log(int64_t(i));
        CHECK(f.add(a, f.neg(a)).is_zero());
        CHECK(f.sub(a, a).is_zero());
    }
    // distributivity spot check over all triples
    for (uint64_t a = 0; a < 9; ++a) {
        for (uint64_t b = 0; b < 9; ++b) {
            for (uint64_t c = 0; c < 9; ++c) {
                auto ea = f.from_packed(a), eb = f.from_packed(b), ec = f.from_packed(c);
                CHECK(f.mul(ea, f.add(eb, ec)) == f.add(f.mul(ea, eb), f.mul(ea, ec)));
            }
        }
    }
}

TEST_CASE("relative trace GF(2^6) -> GF(2)") {
    auto f = gf64();
    CHECK(f.relative_trace(f.zero(), 1).is_zero());
    uint64_t trace_one = 0;
    for (uint64_t i = 0; i < 63; ++i) {
        auto t = f.relative_trace(f.from_log(int64_t(i)), 1);
        if (t == f.one()) ++trace_one;
        else CHECK(t.is_zero());
    }
    // 32 of the 64 field elements have trace 1; zero has trace 0
    CHECK(trace_one == 32);

    // additivity, exhaustive
    for (uint64_t i = 0; i < 63; ++i) {
        for (uint64_t j = 0; j < 63; ++j) {
            auto x = f.from_log(int64_t(i)), y = f.from_log(int64_t(j));
            CHECK(f.relative_trace(f.add(x, y), 1) ==
                  f.add(f.relative_trace(x, 1), f.relative_trace(y, 1)));
        }
    }
    CHECK_THROWS_AS(f.relative_trace(f.one(), 4), std::domain_error);
}

TEST_CASE("relative trace lands in the subfield and is subfield-linear") {
    auto f = gf64();
    for (uint32_t sub : {1u, 2u, 3u}) {
        const uint64_t stride = subgroup_stride(63, (uint64_t(1) << sub) - 1);
        for (uint64_t i = 0; i < 63; ++i) {
            auto t = f.relative_trace(f.from_log(int64_t(i)), sub);
            if (!t.is_zero()) CHECK(uint64_t(t.log()) % stride == 0);
        }
        // linearity over subfield scalars
        for (uint64_t j = 0; j * stride < 63; ++j) {
            auto lambda = f.from_log(int64_t(j * stride));
            for (uint64_t i = 0; i < 63; i += 5) {
                auto x = f.from_log(int64_t(i));
                CHECK(f.relative_trace(f.mul(lambda, x), sub) ==
                      f.mul(lambda, f.relative_trace(x, sub)));
            }
        }
    }
}

TEST_CASE("subfield is closed under add and mul") {
    auto f = gf64();
    for (uint64_t sub_order : {7ull, 3ull, 63ull}) {
        const uint64_t stride = subgroup_stride(63, sub_order);
        std::vector<FieldElement> sub = {f.zero()};
        for (uint64_t j = 0; j < sub_order; ++j) sub.push_back(f.from_log(int64_t(j * stride)));
        auto member = [&](FieldElement v) {
            return v.is_zero() || uint64_t(v.log()) % stride == 0;
        };
        for (auto a : sub) {
            for (auto b : sub) {
                CHECK(member(f.add(a, b)));
                CHECK(member(f.mul(a, b)));
            }
        }
    }
}

TEST_CASE("subgroup_stride") {
    CHECK(subgroup_stride(63, 7) == 9);
    CHECK(subgroup_stride(63, 3) == 21);
    CHECK(subgroup_stride(10, 10) == 1);
    CHECK_THROWS_AS(subgroup_stride(63, 5), std::domain_error);
}
