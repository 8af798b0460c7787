#pragma once

// Existence bounds for linear codes. A fact exists[n,k,d] means some
// [n,k,>=d]_q code exists; not_exists[n,k,d] means none does, so per cell
// (n,k) the nonexistence facts reduce to the smallest excluded d.
//
// derive_bounds closes a set of axioms under three implications and their
// contrapositives:
//   puncture:  exists[n,k,d]  =>  exists[n-1,k,d-1]        (d >= 2)
//   residual:  exists[n,k,d]  =>  exists[n-d,k-1,ceil(d/q)]
//   shorten:   exists[n,k,d]  =>  exists[n-1,k-1,d]
// inside a finite window of cells. Axioms marked prior describe what was
// known before; facts that the remaining axioms add on top of the prior
// closure are reported as new.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcode/codedb.hpp"

namespace qcode {

struct BoundsFact {
    enum class Kind { exists, not_exists };
    Kind kind = Kind::exists;
    CodeParams params;
    bool prior = true;
    std::string source;                    // axiom label, empty for derived facts
    std::string rule;                      // "axiom", "griesmer", "puncture", "residual", "shorten"
    std::vector<std::size_t> antecedents;  // indices into DerivedBounds::facts

    std::string to_string() const;  // "not_exists [22,5,15]_5"
};

struct BoundsWindow {
    int q = 5;
    int nmax = 100;
    int kmax = 10;
};

struct BoundsConfig {
    BoundsWindow window;
    std::vector<BoundsFact> axioms;

    // Lines: "window q=5 nmax=100 kmax=10" and
    // "<exists|not_exists> q=.. n=.. k=.. d=.. [new] source=<text to end of line>".
    // '#' starts a comment line.
    static BoundsConfig parse(std::string_view text);
    static BoundsConfig load(const std::filesystem::path& path);
};

// Smallest d that the Griesmer bound excludes for length n, dimension k.
int griesmer_excluded_d(int q, int n, int k);

class DerivedBounds {
public:
    BoundsWindow window;
    std::vector<BoundsFact> facts;

    // Smallest excluded d and largest known existing d per cell, with the
    // fact indices that establish them.
    int excluded(int n, int k) const;
    int existing(int n, int k) const;  // 0 when nothing is known
    std::optional<std::size_t> excluded_fact(int n, int k) const;
    int prior_excluded(int n, int k) const;

    // Minimal new nonexistence facts, one per improved cell.
    std::vector<std::size_t> new_nonexistence;

    struct Determined {
        int n, k, d;
        std::size_t fact;
    };
    // New cells reached from a new axiom by shortening only, whose value is
    // pinned by a matching existence fact: d_q(n,k) = d.
    std::vector<Determined> determined_d;
    // For the same cells, n_q(k, d + 1) = n + 1 when exists[n+1,k,d+1] is
    // known (shorter lengths are excluded because appending a zero
    // coordinate preserves existence).
    std::vector<Determined> determined_n;  // fields: n_q(k, d) = n
    // New nonexistence facts outside the shortening family.
    std::vector<std::size_t> consequences;

    // Derivation chain of a fact, one line per step, antecedents indented.
    std::string explain(std::size_t fact) const;
    std::string report() const;

private:
    friend DerivedBounds derive_bounds(const std::vector<BoundsFact>&, const BoundsWindow&);
    std::size_t cell(int n, int k) const;
    bool in_window(int n, int k) const noexcept { return n >= 1 && n <= window.nmax && k >= 1 && k <= window.kmax && k <= n; }

    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<int> ne_, ex_, prior_ne_;
    std::vector<std::size_t> ne_fact_, ex_fact_;
};

// Throws InvariantError when the axioms contradict each other.
DerivedBounds derive_bounds(const std::vector<BoundsFact>& axioms, const BoundsWindow& window = {});

// Largest d not excluded by the prior axioms and Griesmer for (n,k): the
// upper end of the parent range needed by an extension step.
int max_possible_d(const BoundsConfig& cfg, int n, int k);

}  // namespace qcode
