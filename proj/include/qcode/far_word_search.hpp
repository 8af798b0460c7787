#pragma once

// Depth-first search for words far from a systematic code.
//
// Let C be generated by (I_k | A) with redundancy m = n - k and write
// r_u = uA for each message u. For z in F_q^m the vector x = (0, z) has
//
//     d(x, C) = min_u  wt(u) + m - agree(z, r_u),
//
// so d(x, C) >= t iff agree(z, r_u) <= m - t + wt(u) for every u. The same
// condition with t = d - 1 says that appending the row (0, 1, z) to C gives a
// code of minimum weight >= d, so covering-radius decisions and extension
// enumeration share this search.
//
// The search assigns z coordinate by coordinate and keeps, per message, the
// number of agreements so far as bit-sliced counters: level L_j holds the
// messages whose count (plus a per-message offset that equalizes budgets)
// has reached j. A branch dies as soon as the top level becomes nonempty.
//
// Symmetry reduction. Redundancy columns of A that agree up to a nonzero
// scalar form a class; permuting coordinates inside a class (compensating
// the scalars) and scaling z by a nonzero constant both map solutions to
// equivalent solutions. With reduction on, only the orbit representative is
// reported: the lexicographically smallest digit string, digits read in
// search order.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qcode/linear_code.hpp"

namespace qcode {

struct FarWordStats {
    std::uint64_t nodes = 0;
    std::uint64_t solutions = 0;
    bool truncated = false;  // node limit reached before the search finished
};

class FarWordSearch {
public:
    // `code` must be systematic. Reports z with d((0, z), code) >= threshold.
    FarWordSearch(const LinearCode& code, int threshold, bool reduce_symmetry = true);

    std::size_t redundancy() const noexcept { return m_; }
    bool reduces_symmetry() const noexcept { return reduce_; }
    bool infeasible() const noexcept { return infeasible_; }

    // Coordinates (0-based within z) in the order the search assigns them:
    // column classes by decreasing size, ties by first coordinate.
    const std::vector<int>& search_order() const noexcept { return order_; }
    const std::vector<int>& column_class() const noexcept { return class_of_; }

    // Visits solutions (z in natural coordinate order) whose first
    // prefix.size() search-order digits equal `prefix`. The visitor returns
    // false to stop early. A nonzero node_limit bounds the work.
    using Visitor = std::function<bool(const std::vector<std::uint8_t>&)>;
    FarWordStats run(std::span<const std::uint8_t> prefix, const Visitor& visit, std::uint64_t node_limit = 0) const;
    FarWordStats run(const Visitor& visit) const { return run({}, visit); }

    // Some solution, if any. Throws ResourceError past a nonzero node limit.
    std::optional<std::vector<std::uint8_t>> find_one(std::uint64_t node_limit = 0) const;
    bool exists() const { return find_one().has_value(); }

    // Constraint check without any pruning state.
    bool satisfies(std::span<const std::uint8_t> z) const;

    // Smallest element of z's orbit under class permutations and global
    // scaling (identity when reduction is off).
    std::vector<std::uint8_t> canonical(std::span<const std::uint8_t> z) const;

private:
    struct Frame;
    bool descend(std::size_t depth, Frame& f, std::span<const std::uint8_t> prefix, const Visitor& visit,
                 std::uint64_t node_limit, FarWordStats& stats) const;
    bool value_allowed(std::size_t depth, std::uint8_t v, const std::vector<std::uint8_t>& assigned, bool seen_nonzero) const;

    Field field_;
    std::size_t m_ = 0;
    bool reduce_ = true;
    bool infeasible_ = false;

    std::size_t words_ = 0;   // 64-bit words per message bitset
    int top_ = 0;             // counters die at level top_ + 1
    std::vector<std::uint64_t> initial_levels_;  // (top_ + 1) x words_, level 0 = all
    std::vector<std::uint64_t> masks_;           // [depth][value] -> messages agreeing there

    std::vector<int> order_;
    std::vector<int> class_of_;                 // per coordinate
    std::vector<std::uint8_t> scale_;           // column = scale * class representative
    std::vector<std::vector<int>> class_prev_;  // per depth: search depths of earlier class members

    // Kept for satisfies(): agreement targets and budgets per message.
    std::vector<std::vector<std::uint8_t>> targets_;
    std::vector<int> budgets_;
};

}  // namespace qcode
