#include "doctest.h"

#include <algorithm>
#include <random>

#include "qcode/bounds.hpp"
#include "qcode/errors.hpp"

using namespace qcode;

namespace {

BoundsFact fact(BoundsFact::Kind kind, int n, int k, int d, bool prior, std::string source = "test") {
    BoundsFact f;
    f.kind = kind;
    f.params = {5, n, k, d};
    f.prior = prior;
    f.source = std::move(source);
    f.rule = "axiom";
    return f;
}

constexpr auto kNot = BoundsFact::Kind::not_exists;
constexpr auto kYes = BoundsFact::Kind::exists;

}  // namespace

TEST_CASE("Griesmer threshold") {
    // n >= sum_{i<k} ceil(d / q^i).
    CHECK(griesmer_excluded_d(5, 18, 2) == 16);  // 15 + 3 = 18
    CHECK(griesmer_excluded_d(5, 6, 3) == 5);    // 4 + 1 + 1 = 6
    CHECK(griesmer_excluded_d(5, 5, 1) == 6);
}

TEST_CASE("one new axiom propagates along all three rules") {
    const BoundsWindow w{5, 40, 6};
    const auto base = derive_bounds({}, w);
    // A nonexistence claim stronger than Griesmer at (20,4).
    const auto b = derive_bounds({fact(kNot, 20, 4, 14, false)}, w);
    CHECK(b.excluded(20, 4) == 14);
    CHECK(base.excluded(20, 4) > 14);
    // Puncturing contrapositive: no [21,4,15].
    CHECK(b.excluded(21, 4) <= 15);
    // Shortening contrapositive: no [21,5,14].
    CHECK(b.excluded(21, 5) <= 14);
    CHECK(!b.new_nonexistence.empty());
    // Every reported fact has a derivation that ends at axioms.
    for (std::size_t i : b.new_nonexistence) CHECK(b.explain(i).find("new: test") != std::string::npos);
}

TEST_CASE("contradictory axioms are rejected") {
    const BoundsWindow w{5, 30, 5};
    CHECK_THROWS_AS(derive_bounds({fact(kYes, 10, 2, 9, true)}, w), InvariantError);
    CHECK_THROWS_AS(derive_bounds({fact(kYes, 21, 5, 14, true), fact(kNot, 20, 4, 14, false)}, w), InvariantError);
}

TEST_CASE("result does not depend on axiom order") {
    const auto cfg = BoundsConfig::load(QCODE_SOURCE_DIR "/data/known_bounds.txt");
    auto axioms = cfg.axioms;
    axioms.push_back(fact(kNot, 21, 5, 14, false, "classification"));
    const auto want = derive_bounds(axioms, cfg.window).report();
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(axioms.begin(), axioms.end(), rng);
        CHECK(derive_bounds(axioms, cfg.window).report() == want);
    }
}

TEST_CASE("configuration parsing") {
    const auto cfg = BoundsConfig::parse(
        "# comment\n"
        "window q=5 nmax=50 kmax=6\n"
        "not_exists q=5 n=18 k=2 d=16 source=table\n"
        "exists q=5 n=21 k=5 d=13 new source=a new code\n");
    CHECK(cfg.window.nmax == 50);
    REQUIRE(cfg.axioms.size() == 2);
    CHECK(cfg.axioms[0].prior);
    CHECK(!cfg.axioms[1].prior);
    CHECK(cfg.axioms[1].source == "a new code");
    CHECK_THROWS_AS(BoundsConfig::parse("maybe q=5 n=1 k=1 d=1\n"), UsageError);
    CHECK(max_possible_d(cfg, 18, 2) == 15);
}
