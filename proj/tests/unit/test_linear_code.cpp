#include "doctest.h"

#include <random>

#include "qcode/errors.hpp"
#include "qcode/linear_code.hpp"
#include "support/oracles.hpp"

using namespace qcode;

TEST_CASE("weight enumerator and min weight agree with brute force") {
    const Field f(5);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const auto n = 2 + rng() % 10;
        const auto k = 1 + rng() % std::min<std::size_t>(n, 4);
        const auto c = testing::random_code(f, n, k, rng);
        const auto words = testing::brute_codewords(c);
        WeightEnumerator we(n + 1, 0);
        for (const auto& w : words) ++we[static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](auto x) { return x != 0; }))];
        CHECK(c.weight_enumerator() == we);
        CHECK(c.min_weight() == testing::brute_min_weight(c));
        CHECK(c.min_weight_naive() == c.min_weight());
        CHECK(c.size() == words.size());
    }
}

TEST_CASE("rank, rref and systematic form") {
    const Field f(5);
    const auto g = GeneratorMatrix::from_rows(f, {"1111", "0123"});
    CHECK(g.k() == 2);
    CHECK(rank(f, 4, g.rows()) == 2);
    CHECK_THROWS_AS(GeneratorMatrix::from_rows(f, {"1234", "2413"}), UsageError);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const auto c = testing::random_code(f, 8, 3, rng);
        const auto r = rref(c.generator());
        CHECK(rref(r) == r);
        const auto s = systematize(c.generator());
        CHECK(is_systematic(s.matrix));
        // Undoing the column permutation gives back the same row space.
        Monomial back;
        back.perm = s.perm;
        back.scale.assign(8, 1);
        std::vector<GFVec> rows;
        for (const auto& row : s.matrix.rows()) rows.push_back(back.apply(row));
        CHECK(rref(GeneratorMatrix(f, 8, rows)) == r);
    }
}

TEST_CASE("monomial maps compose and invert") {
    const Field f(5);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = testing::random_monomial(9, 5, rng);
        const auto b = testing::random_monomial(9, 5, rng);
        const auto v = testing::random_vec(f, 9, rng);
        CHECK(a.then(b, f).apply(v) == b.apply(a.apply(v)));
        CHECK(a.then(a.inverse(f), f).is_identity());
    }
}

TEST_CASE("monomial images keep the weight enumerator") {
    const Field f(5);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const auto c = testing::random_code(f, 10, 3, rng);
        const auto t = c.transformed(testing::random_monomial(10, 5, rng));
        CHECK(t.weight_enumerator() == c.weight_enumerator());
    }
}

TEST_CASE("shortening and puncturing") {
    const Field f(5);
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const auto c = testing::random_code_min_weight(f, 9, 3, 4, rng);
        for (std::size_t j = 0; j < 9; ++j) {
            const auto p = puncture(c, j);
            CHECK(p.n() == 8);
            CHECK(p.k() == 3);
            CHECK(p.min_weight() >= c.min_weight() - 1);
            const auto s = shorten(c, j);
            CHECK(s.n() == 8);
            CHECK(s.min_weight() >= c.min_weight());
            // Codewords vanishing at j, counted directly.
            std::uint64_t zeros = 0;
            c.for_each_codeword([&](const GFVec& w) { zeros += w[j] == 0; });
            CHECK(s.size() == zeros);
        }
    }
}

TEST_CASE("generator matrix text round trip") {
    const auto g = GeneratorMatrix::parse("q=5 n=6 k=2\n111110\n012341\n");
    CHECK(g.n() == 6);
    CHECK(GeneratorMatrix::parse(g.to_text()) == g);
    CHECK_THROWS_AS(GeneratorMatrix::parse("q=5 n=6 k=2\n111110\n"), UsageError);
}
