#pragma once

// Canonical labeling of vertex-colored digraphs by individualization and
// refinement: equitable partition refinement, target cell = first smallest
// non-singleton cell, pruning by refinement-trace invariants and by
// automorphisms discovered at equivalent leaves.

#include <cstdint>
#include <vector>

namespace qcode {

struct ColoredDigraph {
    int num_vertices = 0;
    std::vector<int> color;  // initial cells are the color classes, ascending
    std::vector<int> out_offsets, out_targets;
    std::vector<int> in_offsets, in_targets;

    // Builds CSR adjacency from an arc list.
    static ColoredDigraph from_arcs(int num_vertices, std::vector<int> color,
                                    const std::vector<std::pair<int, int>>& arcs);

    std::size_t num_arcs() const noexcept { return out_targets.size(); }
};

using Permutation = std::vector<int>;  // vertex -> image

struct LabelingStats {
    std::uint64_t nodes = 0;
    std::uint64_t leaves = 0;
};

struct CanonicalLabeling {
    // labeling[i] is the vertex placed at canonical position i.
    std::vector<int> labeling;
    // Encoded relabeled graph: per position, color, out-degree and sorted
    // out-neighbor positions. Equal for isomorphic inputs.
    std::vector<std::uint16_t> certificate;
    std::vector<Permutation> generators;
    LabelingStats stats;
};

CanonicalLabeling canonical_labeling(const ColoredDigraph& g);

// The certificate of g under an arbitrary labeling.
std::vector<std::uint16_t> labeled_certificate(const ColoredDigraph& g, const std::vector<int>& labeling);

bool is_automorphism(const ColoredDigraph& g, const Permutation& p);

}  // namespace qcode
