#include "doctest.h"

#include <random>
#include <set>

#include "qcode/canon.hpp"
#include "qcode/errors.hpp"
#include "qcode/extend.hpp"
#include "support/oracles.hpp"

using namespace qcode;

namespace {

using Digits = std::vector<std::uint8_t>;

Digits b_of(const LinearCode& child) {
    const auto k = child.k();
    Digits b;
    for (std::size_t j = k; j < child.n(); ++j) b.push_back(child.generator().at(k - 1, j));
    return b;
}

std::set<Digits> emitted_rows(const ExtensionTask& task, std::span<const std::uint8_t> prefix = {}) {
    std::set<Digits> out;
    for_each_child(task, prefix, [&](const LinearCode& c) { CHECK(out.insert(b_of(c)).second); });
    return out;
}

}  // namespace

TEST_CASE("unreduced search finds exactly the rows of the naive scan") {
    const Field f(5);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t k = 2 + rng() % 3;
        const std::size_t n = k + 2 + rng() % 4;
        const int d = 2 + static_cast<int>(rng() % 3);
        const auto parent = testing::random_code(f, n - 1, k - 1, rng);
        if (parent.min_weight() < d) continue;
        const ExtensionTask task(parent, d, false);
        const auto naive = naive_extension_rows(task);
        const auto found = emitted_rows(task);
        CHECK(found == std::set<Digits>(naive.begin(), naive.end()));
    }
}

TEST_CASE("reduced search returns one row per orbit of the naive rows") {
    const Field f(5);
    std::mt19937_64 rng(37);
    int checked = 0;
    while (checked < 40) {
        const std::size_t k = 2 + rng() % 2;
        const std::size_t n = k + 3 + rng() % 4;
        const int d = 2 + static_cast<int>(rng() % 3);
        const auto parent = testing::random_code(f, n - 1, k - 1, rng);
        if (parent.min_weight() < d) continue;
        ++checked;
        const ExtensionTask task(parent, d, true);
        std::set<Digits> orbits;
        for (const auto& b : naive_extension_rows(task)) orbits.insert(normalize_b(task.parent, b));
        CHECK(emitted_rows(task) == orbits);
    }
}

TEST_CASE("normalize_b is an idempotent orbit map") {
    const Field f(5);
    // Proportional columns so the class structure is nontrivial.
    const LinearCode parent(GeneratorMatrix::from_rows(f, {"10112243", "01224413"}));
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        Digits b(6);
        for (auto& x : b) x = static_cast<std::uint8_t>(rng() % 5);
        const auto nb = normalize_b(parent, b);
        CHECK(normalize_b(parent, nb) == nb);
        // Scaling b stays in the orbit.
        Digits sb(b);
        for (auto& x : sb) x = f.mul(x, 3);
        CHECK(normalize_b(parent, sb) == nb);
        // Children from b and its representative are equivalent.
        CHECK(equivalent(extend_matrix(parent, b), extend_matrix(parent, nb)));
    }
}

TEST_CASE("extension classifies [5,3,3]_5 like a brute-force scan") {
    const Field f(5);
    std::vector<LinearCode> brute, parents;
    testing::for_each_systematic(f, 5, 3, [&](const LinearCode& c) {
        if (c.min_weight() >= 3) brute.push_back(c);
    });
    testing::for_each_systematic(f, 4, 2, [&](const LinearCode& c) {
        if (c.min_weight() >= 3) parents.push_back(c);
    });
    const auto want = dedup_certified(brute);
    std::vector<LinearCode> children;
    for (const auto& p : dedup(parents)) {
        const auto kids = enumerate_children(ExtensionTask(p, 3));
        children.insert(children.end(), kids.begin(), kids.end());
    }
    const auto got = dedup_certified(children);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].cert == want[i].cert);
}

TEST_CASE("shard prefixes partition the search") {
    const Field f(5);
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const auto parent = testing::random_code_min_weight(f, 8, 2, 5, rng);
        const ExtensionTask task(parent, 4);
        const auto all = emitted_rows(task);
        for (std::size_t depth : {1, 2, 3}) {
            const auto prefixes = shard_prefixes(task, depth);
            CHECK(prefixes.size() == static_cast<std::size_t>(depth == 1 ? 5 : depth == 2 ? 25 : 125));
            std::set<Digits> joined;
            std::size_t total = 0;
            for (const auto& p : prefixes) {
                const auto part = emitted_rows(task, p);
                total += part.size();
                joined.insert(part.begin(), part.end());
            }
            CHECK(total == all.size());
            CHECK(joined == all);
        }
    }
}

TEST_CASE("children have the target minimum weight and shorten to the parent") {
    const Field f(5);
    std::mt19937_64 rng(47);
    const auto parent = testing::random_code_min_weight(f, 9, 2, 6, rng);
    const ExtensionTask task(parent, 5);
    for_each_child(task, {}, [&](const LinearCode& c) {
        CHECK(c.n() == 10);
        CHECK(c.k() == 3);
        CHECK(c.min_weight() >= 5);
        CHECK(equivalent(shorten(c, task.parent.k()), task.parent));
    });
    CHECK_THROWS_AS(ExtensionTask(parent, parent.min_weight() + 1), UsageError);
}
