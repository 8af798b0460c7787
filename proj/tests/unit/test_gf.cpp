#include "doctest.h"

#include <random>

#include "qcode/errors.hpp"
#include "qcode/gf.hpp"
#include "support/oracles.hpp"

using namespace qcode;

TEST_CASE("field axioms for q = 5") {
    const Field f(5);
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
            const auto x = static_cast<std::uint8_t>(a), y = static_cast<std::uint8_t>(b);
            CHECK(f.add(x, y) == (a + b) % 5);
            CHECK(f.mul(x, y) == (a * b) % 5);
            CHECK(f.add(f.sub(x, y), y) == x);
            if (a != 0) CHECK(f.mul(x, f.inv(x)) == 1);
        }
    // 2 generates the multiplicative group.
    std::uint8_t g = 1;
    std::set<int> seen;
    for (int i = 0; i < 4; ++i) {
        seen.insert(g);
        g = f.mul(g, f.primitive_root());
    }
    CHECK(seen.size() == 4);
}

TEST_CASE("non-prime field sizes are rejected") {
    CHECK_THROWS_AS(Field(4), UsageError);
    CHECK_THROWS_AS(Field(1), UsageError);
}

TEST_CASE("packed vector arithmetic matches digit loops") {
    const Field f(5);
    std::mt19937_64 rng(7);
    for (std::size_t n : {1, 15, 16, 17, 33, 64}) {
        for (int trial = 0; trial < 50; ++trial) {
            const auto a = testing::random_vec(f, n, rng);
            const auto b = testing::random_vec(f, n, rng);
            const auto lambda = static_cast<std::uint8_t>(rng() % 5);
            const auto s = add_scaled(a, b, lambda);
            int wt = 0, agree = 0;
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(s[i] == (a[i] + lambda * b[i]) % 5);
                wt += a[i] != 0;
                agree += a[i] == b[i];
            }
            CHECK(weight(a) == wt);
            CHECK(agreements(a, b) == agree);
        }
    }
}

TEST_CASE("digit string round trip") {
    const Field f(5);
    const auto v = GFVec::parse(f, "0123401234012340123");
    CHECK(v.size() == 19);
    CHECK(v.to_string() == "0123401234012340123");
    CHECK_THROWS_AS(GFVec::parse(f, "0125"), UsageError);
    CHECK_THROWS_AS(GFVec::parse(f, "01a"), UsageError);
}

TEST_CASE("scalar multiples of a nonzero vector") {
    const Field f(5);
    const auto v = GFVec::parse(f, "1203");
    const auto m = scalar_multiples(v);
    CHECK(m.size() == 4);
    std::set<std::string> s;
    for (const auto& x : m) s.insert(x.to_string());
    CHECK(s.size() == 4);
    CHECK(s.count("1203") == 1);
    CHECK(s.count("2401") == 1);
}
