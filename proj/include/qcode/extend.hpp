#pragma once

// Extension by inverse shortening. A systematic parent (I_{k-1} | A) and a
// row b of length n - k give the child
//
//     I_{k-1}  0  A
//     0 ... 0  1  b
//
// whose shortening at the new pivot column is the parent again. A child
// codeword u*G + lambda*(0, 1, b) with lambda != 0 has weight
// wt(u) + 1 + wt(uA + lambda*b), so the child has minimum weight >= d iff
// d' >= d for the parent and b agrees with every uA in at most
// (n - k) - (d - 1) + wt(u) positions. That is the far-word condition with
// threshold d - 1, and the search is the shared kernel.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qcode/far_word_search.hpp"
#include "qcode/linear_code.hpp"

namespace qcode {

struct ExtensionTask {
    LinearCode parent;  // brought to systematic form by the constructor
    int target_d = 0;
    bool reduce_symmetry = true;

    ExtensionTask(const LinearCode& parent_code, int d, bool reduce = true);
};

// Child generator matrix for a systematic parent.
LinearCode extend_matrix(const LinearCode& parent, std::span<const std::uint8_t> b);

// Orbit representative of b under global scaling and permutations inside
// classes of proportional parent columns.
std::vector<std::uint8_t> normalize_b(const LinearCode& parent, std::span<const std::uint8_t> b);

struct ExtensionStats {
    std::uint64_t nodes = 0;
    std::uint64_t children = 0;
};

// Calls `emit` for every child (one per normalized b) of the subtree fixed
// by `prefix` (digits in search order). Every child is checked to have
// minimum weight >= target_d; a violation throws InvariantError.
ExtensionStats for_each_child(const ExtensionTask& task, std::span<const std::uint8_t> prefix,
                              const std::function<void(const LinearCode&)>& emit);

std::vector<LinearCode> enumerate_children(const ExtensionTask& task, ExtensionStats* stats = nullptr);

// Reference enumeration: tries all q^(n-k) vectors b and keeps those whose
// child has minimum weight >= target_d. No pruning, no normalization.
std::vector<std::vector<std::uint8_t>> naive_extension_rows(const ExtensionTask& task);

// Shard prefixes: all q^depth digit strings (depth capped at the
// redundancy). Their subtrees partition the search.
std::vector<std::vector<std::uint8_t>> shard_prefixes(const ExtensionTask& task, std::size_t depth = 2);

}  // namespace qcode
