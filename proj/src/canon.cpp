#include "qcode/canon.hpp"

#include <algorithm>
#include <map>

#include "qcode/errors.hpp"

namespace qcode {

CodeDigraph build_digraph(const LinearCode& c, std::size_t vertex_budget) {
    const auto& f = c.field();
    const auto q = static_cast<std::size_t>(f.q());
    const std::size_t words = c.size();
    const std::size_t vertices = words + c.n() * (q - 1);
    if (vertices > vertex_budget)
        throw ResourceError("code digraph needs " + std::to_string(vertices) + " vertices, budget is " +
                            std::to_string(vertex_budget));

    CodeDigraph g{f, c.n(), c.k(), f.primitive_root(), words, c.generator().rows(), c.codewords(), {}, 0, 0};
    std::vector<int> color(vertices, 1);
    std::fill(color.begin(), color.begin() + static_cast<std::ptrdiff_t>(words), 0);
    std::vector<std::pair<int, int>> arcs;
    for (std::size_t i = 0; i < words; ++i) {
        const auto& cw = g.codewords[i];
        for (std::size_t j = 0; j < c.n(); ++j) {
            const auto y = cw[j];
            if (y == 0) continue;
            const int v = g.value_vertex(j, y);
            arcs.emplace_back(static_cast<int>(i), v);
            arcs.emplace_back(v, static_cast<int>(i));
        }
    }
    g.type1_arcs = arcs.size();
    for (std::size_t j = 0; j < c.n(); ++j)
        for (std::uint8_t y = 1; y < q; ++y)
            arcs.emplace_back(g.value_vertex(j, y), g.value_vertex(j, f.mul(y, g.multiplier)));
    g.type2_arcs = arcs.size() - g.type1_arcs;
    g.graph = ColoredDigraph::from_arcs(static_cast<int>(vertices), std::move(color), arcs);
    return g;
}

std::string CanonicalCert::hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (unsigned char b : bytes) {
        s.push_back(kDigits[b >> 4]);
        s.push_back(kDigits[b & 0xF]);
    }
    return s;
}

namespace {

// Decodes a vertex permutation of the code digraph into the monomial map
// it induces on coordinates: (j, 1) -> (perm[j], scale[j]).
Monomial to_monomial(const CodeDigraph& g, const Permutation& gamma) {
    const auto qm1 = static_cast<std::size_t>(g.field.q() - 1);
    Monomial m;
    m.perm.resize(g.n);
    m.scale.resize(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        const auto image = static_cast<std::size_t>(gamma[static_cast<std::size_t>(g.value_vertex(j, 1))]) - g.num_codewords;
        m.perm[j] = static_cast<int>(image / qm1);
        m.scale[j] = static_cast<std::uint8_t>(image % qm1 + 1);
    }
    return m;
}

}  // namespace

CanonResult canonical_cert(const CodeDigraph& g) {
    auto lab = canonical_labeling(g.graph);

    // Read the code back from the canonical labeling: coordinates are ordered
    // by the smallest position among their value vertices, and that vertex
    // gets value 1.
    const auto qm1 = static_cast<std::size_t>(g.field.q() - 1);
    std::vector<int> first_pos(g.n, -1);
    std::vector<std::uint8_t> first_val(g.n, 0);
    for (std::size_t pos = 0; pos < lab.labeling.size(); ++pos) {
        const auto v = static_cast<std::size_t>(lab.labeling[pos]);
        if (v < g.num_codewords) continue;
        const std::size_t j = (v - g.num_codewords) / qm1;
        if (first_pos[j] < 0) {
            first_pos[j] = static_cast<int>(pos);
            first_val[j] = static_cast<std::uint8_t>((v - g.num_codewords) % qm1 + 1);
        }
    }
    std::vector<std::size_t> order(g.n);
    for (std::size_t j = 0; j < g.n; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return first_pos[a] < first_pos[b]; });
    Monomial to_canon;
    to_canon.perm.resize(g.n);
    to_canon.scale.resize(g.n);
    for (std::size_t r = 0; r < g.n; ++r) {
        to_canon.perm[order[r]] = static_cast<int>(r);
        to_canon.scale[order[r]] = g.field.inv(first_val[order[r]]);
    }
    std::vector<GFVec> rows;
    for (const auto& r : g.generator_rows) rows.push_back(to_canon.apply(r));
    GeneratorMatrix canonical = rref(GeneratorMatrix(g.field, g.n, std::move(rows)));

    CanonResult out{{}, std::move(canonical), {}, lab.stats};
    auto& bytes = out.cert.bytes;
    bytes.push_back(static_cast<char>(g.field.q()));
    bytes.push_back(static_cast<char>(g.multiplier));
    bytes.push_back(static_cast<char>(g.n));
    bytes.push_back(static_cast<char>(g.k));
    bytes.reserve(4 + 2 * lab.certificate.size());
    for (auto x : lab.certificate) {
        bytes.push_back(static_cast<char>(x >> 8));
        bytes.push_back(static_cast<char>(x & 0xFF));
    }
    for (const auto& gamma : lab.generators) out.automorphisms.push_back(to_monomial(g, gamma));
    return out;
}

CanonResult canonize(const LinearCode& c, std::size_t vertex_budget) {
    return canonical_cert(build_digraph(c, vertex_budget));
}

bool equivalent(const LinearCode& a, const LinearCode& b) {
    if (a.n() != b.n() || a.k() != b.k() || a.q() != b.q()) return false;
    return canonize(a).cert == canonize(b).cert;
}

std::vector<CertifiedCode> dedup_certified(const std::vector<LinearCode>& codes) {
    std::map<CanonicalCert, LinearCode> classes;
    for (const auto& c : codes) {
        auto r = canonize(c);
        classes.try_emplace(std::move(r.cert), LinearCode(std::move(r.canonical_form)));
    }
    std::vector<CertifiedCode> out;
    out.reserve(classes.size());
    for (auto& [cert, code] : classes) out.push_back({cert, code});
    return out;
}

std::vector<LinearCode> dedup(const std::vector<LinearCode>& codes) {
    std::vector<LinearCode> out;
    for (auto& cc : dedup_certified(codes)) out.push_back(std::move(cc.code));
    return out;
}

}  // namespace qcode
