#include "doctest.h"

#include <random>

#include "qcode/covrad.hpp"
#include "qcode/errors.hpp"
#include "support/oracles.hpp"

using namespace qcode;

TEST_CASE("small codes with known radius") {
    const Field f(5);
    // [2,1] repetition code: (a, b) is within 1 of (a, a).
    const LinearCode rep2(GeneratorMatrix::from_rows(f, {"11"}));
    CHECK(covering_radius(rep2) == 1);
    // The whole space.
    const LinearCode full(GeneratorMatrix::from_rows(f, {"100", "010", "001"}));
    CHECK(covering_radius(full) == 0);
    // Repetition code of length 5 over F_5: a word using every symbol once
    // agrees with each codeword in one place.
    const LinearCode rep5(GeneratorMatrix::from_rows(f, {"11111"}));
    CHECK(covering_radius(rep5) == 4);
    CHECK(testing::brute_covering_radius_full(rep5) == 4);
}

TEST_CASE("systematic oracle agrees with the definition") {
    const Field f(5);
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 15; ++trial) {
        const auto c = testing::random_code(f, 5 + rng() % 2, 2, rng);
        const auto s = LinearCode(systematize(c.generator()).matrix);
        CHECK(testing::brute_covering_radius_systematic(s) == testing::brute_covering_radius_full(c));
    }
}

TEST_CASE("search, sweep and exhaustive oracle agree") {
    const Field f(5);
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t k = 1 + rng() % 3;
        const std::size_t n = k + 1 + rng() % 5;
        const auto c = testing::random_code(f, n, k, rng);
        const auto s = LinearCode(systematize(c.generator()).matrix);
        const int want = testing::brute_covering_radius_systematic(s);
        CovradOptions dfs_only;
        dfs_only.coset_budget = 0;
        CovradOptions plain = dfs_only;
        plain.reduce_symmetry = false;
        CHECK(covering_radius(c, dfs_only) == want);
        CHECK(covering_radius(c, plain) == want);
        CHECK(covering_radius_sweep(c) == want);
        const auto detail = covering_radius_detail(c);
        CHECK(detail.radius == want);
        CHECK(detail.by_dfs);
        CHECK(detail.by_sweep);
        for (int t = 0; t <= static_cast<int>(n) + 1; ++t) CHECK(covers_at_least(c, t) == (t <= want));
    }
}

TEST_CASE("witnesses are as far as claimed") {
    const Field f(5);
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 30; ++trial) {
        const auto c = testing::random_code(f, 8, 3, rng);
        const auto s = LinearCode(systematize(c.generator()).matrix);
        const int r = covering_radius(c);
        const auto z = far_word(c, r);
        REQUIRE(z.has_value());
        std::vector<std::uint8_t> x(3, 0);
        x.insert(x.end(), z->begin(), z->end());
        CHECK(distance_to_code(s, GFVec::from_digits(f, x)) == r);
        CHECK(!far_word(c, r + 1).has_value());
    }
}

TEST_CASE("radius bounds") {
    const Field f(5);
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 30; ++trial) {
        const auto c = testing::random_code_min_weight(f, 9, 3, 3, rng);
        const int r = covering_radius(c);
        // Redundancy bound.
        CHECK(r <= 6);
        // Puncturing lowers the radius by at most one.
        for (std::size_t j = 0; j < 9; ++j) {
            const int rp = covering_radius(puncture(c, j));
            CHECK(rp <= r);
            CHECK(rp >= r - 1);
        }
        // Appending a zero coordinate adds one.
        const LinearCode padded(insert_column(c.generator(), 9, {0, 0, 0}));
        CHECK(covering_radius(padded) == r + 1);
    }
}

TEST_CASE("sweep respects its budget") {
    const Field f(5);
    const LinearCode rep(GeneratorMatrix::from_rows(f, {"1111111111"}));
    CHECK(!covering_radius_sweep(rep, 1000).has_value());
    CHECK(covering_radius_sweep(rep).value() == 8);
    CHECK(covering_radius(rep) == 8);
}
