#pragma once

// Monomial equivalence of linear codes through the code digraph: one vertex
// per codeword, one per (coordinate, nonzero value); a codeword is joined in
// both directions to (j, c_j) whenever c_j != 0, and the values of each
// coordinate form a directed cycle (j, y) -> (j, g*y) for the fixed
// multiplicative generator g. Two codes are equivalent iff their digraphs are
// isomorphic, so a canonical labeling of the digraph yields a certificate.

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "qcode/graph_canon.hpp"
#include "qcode/linear_code.hpp"

namespace qcode {

inline constexpr std::size_t kDefaultVertexBudget = 4096;

struct CodeDigraph {
    Field field;
    std::size_t n = 0;
    std::size_t k = 0;
    std::uint8_t multiplier = 1;
    std::size_t num_codewords = 0;
    std::vector<GFVec> generator_rows;
    std::vector<GFVec> codewords;  // vertex i < num_codewords
    ColoredDigraph graph;
    std::size_t type1_arcs = 0;
    std::size_t type2_arcs = 0;

    std::size_t num_vertices() const noexcept { return static_cast<std::size_t>(graph.num_vertices); }
    // Vertex id of (j, y), y != 0.
    int value_vertex(std::size_t j, std::uint8_t y) const noexcept {
        return static_cast<int>(num_codewords + j * static_cast<std::size_t>(field.q() - 1) + (y - 1U));
    }
};

CodeDigraph build_digraph(const LinearCode& c, std::size_t vertex_budget = kDefaultVertexBudget);

struct CanonicalCert {
    std::string bytes;
    std::string hex() const;
    friend auto operator<=>(const CanonicalCert&, const CanonicalCert&) = default;
};

struct CanonResult {
    CanonicalCert cert;
    // Generator matrix (in reduced row echelon form) of the code read back
    // from the canonically labeled digraph; equal for equivalent codes.
    GeneratorMatrix canonical_form;
    // Monomial automorphisms of the code generating its automorphism group.
    std::vector<Monomial> automorphisms;
    LabelingStats stats;
};

CanonResult canonical_cert(const CodeDigraph& g);
CanonResult canonize(const LinearCode& c, std::size_t vertex_budget = kDefaultVertexBudget);

// False (not an error) when n, k or q differ.
bool equivalent(const LinearCode& a, const LinearCode& b);

// One representative per equivalence class, sorted by certificate. The
// representative is the canonical form, so the result depends only on the
// set of classes present in the input.
std::vector<LinearCode> dedup(const std::vector<LinearCode>& codes);

struct CertifiedCode {
    CanonicalCert cert;
    LinearCode code;
};
std::vector<CertifiedCode> dedup_certified(const std::vector<LinearCode>& codes);

}  // namespace qcode
