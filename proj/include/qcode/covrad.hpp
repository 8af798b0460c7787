#pragma once

// Covering radius: the smallest R such that every vector of F_q^n lies
// within distance R of the code. For a systematic code every vector is a
// translate of some x = (0, z), so witnesses are searched over z only.

#include <cstdint>
#include <optional>
#include <vector>

#include "qcode/linear_code.hpp"

namespace qcode {

inline constexpr std::uint64_t kDefaultCosetBudget = 1ULL << 31;

struct CovradOptions {
    std::uint64_t coset_budget = kDefaultCosetBudget;  // max q^(n-k) for the syndrome sweep
    std::uint64_t node_limit = 0;                      // per DFS decision, 0 = unlimited
    bool use_dfs = true;
    bool reduce_symmetry = true;
};

// True iff some x has d(x, C) >= t.
bool covers_at_least(const LinearCode& c, int t, const CovradOptions& opt = {});

// A z with d((0, z), C) >= t for the systematic form of c, if one exists.
std::optional<std::vector<std::uint8_t>> far_word(const LinearCode& c, int t, const CovradOptions& opt = {});

// d(x, C) by scanning all codewords.
int distance_to_code(const LinearCode& c, const GFVec& x);

// Exact covering radius by breadth-first search over syndromes (coset
// leader weights). Returns nothing when q^(n-k) exceeds the budget.
std::optional<int> covering_radius_sweep(const LinearCode& c, std::uint64_t coset_budget = kDefaultCosetBudget);

struct CovradResult {
    int radius = 0;
    bool by_dfs = false;
    bool by_sweep = false;
};

// Exact covering radius. Runs the DFS decisions and, when the syndrome
// table fits the budget, the sweep as well; disagreement throws
// InvariantError, both paths over budget throws ResourceError.
CovradResult covering_radius_detail(const LinearCode& c, const CovradOptions& opt = {});
int covering_radius(const LinearCode& c, const CovradOptions& opt = {});

}  // namespace qcode
