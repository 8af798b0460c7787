#include "qcode/covrad.hpp"

#include <algorithm>

#include "qcode/errors.hpp"
#include "qcode/far_word_search.hpp"

namespace qcode {

namespace {

LinearCode systematic(const LinearCode& c) {
    if (is_systematic(c.generator())) return c;
    return LinearCode(systematize(c.generator()).matrix);
}

GFVec embed(const LinearCode& s, const std::vector<std::uint8_t>& z) {
    std::vector<std::uint8_t> x(s.n(), 0);
    std::copy(z.begin(), z.end(), x.begin() + static_cast<std::ptrdiff_t>(s.k()));
    return GFVec::from_digits(s.field(), x);
}

}  // namespace

int distance_to_code(const LinearCode& c, const GFVec& x) {
    int best = static_cast<int>(c.n());
    c.for_each_codeword([&](const GFVec& cw) { best = std::min(best, weight(add_scaled(x, cw, c.field().neg(1)))); });
    return best;
}

std::optional<std::vector<std::uint8_t>> far_word(const LinearCode& c, int t, const CovradOptions& opt) {
    if (t <= 0) return std::vector<std::uint8_t>(c.n() - c.k(), 0);
    FarWordSearch search(systematic(c), t, opt.reduce_symmetry);
    return search.find_one(opt.node_limit);
}

bool covers_at_least(const LinearCode& c, int t, const CovradOptions& opt) { return far_word(c, t, opt).has_value(); }

std::optional<int> covering_radius_sweep(const LinearCode& c, std::uint64_t coset_budget) {
    const auto s = systematic(c);
    const std::size_t k = s.k();
    const std::size_t m = s.n() - k;
    const auto q = static_cast<std::uint64_t>(s.q());
    std::uint64_t cosets = 1;
    for (std::size_t i = 0; i < m; ++i) {
        cosets *= q;
        if (cosets > coset_budget) return std::nullopt;
    }
    // Syndrome of e is e_R - e_I A; coordinate j contributes the column
    // h_j = -A_j (information) or the unit vector (redundancy). Syndromes
    // are base-q integers, digit i of redundancy coordinate i.
    const auto& f = s.field();
    std::vector<std::uint64_t> pow(m, 1);
    for (std::size_t i = m; i-- > 1;) pow[i - 1] = pow[i] * q;
    std::vector<std::vector<std::uint8_t>> cols;
    for (std::size_t j = 0; j < s.n(); ++j) {
        std::vector<std::uint8_t> h(m, 0);
        if (j < k)
            for (std::size_t i = 0; i < m; ++i) h[i] = f.neg(s.generator().at(j, k + i));
        else
            h[j - k] = 1;
        if (std::any_of(h.begin(), h.end(), [](auto x) { return x != 0; })) cols.push_back(std::move(h));
    }
    std::vector<std::uint8_t> dist(cosets, 0xFF);
    std::vector<std::uint64_t> frontier{0}, next;
    dist[0] = 0;
    int level = 0;
    std::vector<std::uint8_t> digits(m);
    while (!frontier.empty()) {
        next.clear();
        for (auto syn : frontier) {
            auto x = syn;
            for (std::size_t i = 0; i < m; ++i) {
                digits[i] = static_cast<std::uint8_t>(x / pow[i]);
                x %= pow[i];
            }
            for (const auto& h : cols)
                for (std::uint8_t a = 1; a < q; ++a) {
                    std::uint64_t target = 0;
                    for (std::size_t i = 0; i < m; ++i) target += f.add(digits[i], f.mul(a, h[i])) * pow[i];
                    if (dist[target] == 0xFF) {
                        dist[target] = static_cast<std::uint8_t>(level + 1);
                        next.push_back(target);
                    }
                }
        }
        if (next.empty()) break;
        ++level;
        frontier.swap(next);
    }
    return level;
}

CovradResult covering_radius_detail(const LinearCode& c, const CovradOptions& opt) {
    const int m = static_cast<int>(c.n() - c.k());
    CovradResult out;
    std::optional<int> dfs;
    if (opt.use_dfs) {
        try {
            const auto s = systematic(c);
            // Climb: each witness found at threshold t certifies its exact
            // distance, so the next decision starts above it.
            int lower = 0;
            for (;;) {
                FarWordSearch search(s, lower + 1, opt.reduce_symmetry);
                auto z = search.find_one(opt.node_limit);
                if (!z) break;
                const int dz = distance_to_code(s, embed(s, *z));
                if (dz <= lower) throw InvariantError("far-word search returned a word closer than its threshold");
                lower = dz;
            }
            dfs = lower;
        } catch (const ResourceError&) {
            dfs.reset();
        }
    }
    auto sweep = covering_radius_sweep(c, opt.coset_budget);
    if (!dfs && !sweep)
        throw ResourceError("covering radius over budget: DFS node limit " + std::to_string(opt.node_limit) +
                            " and coset budget " + std::to_string(opt.coset_budget));
    if (dfs && sweep && *dfs != *sweep)
        throw InvariantError("covering radius paths disagree: DFS " + std::to_string(*dfs) + ", sweep " +
                             std::to_string(*sweep));
    out.radius = dfs ? *dfs : *sweep;
    out.by_dfs = dfs.has_value();
    out.by_sweep = sweep.has_value();
    if (out.radius > m) throw InvariantError("covering radius exceeds the redundancy");
    return out;
}

int covering_radius(const LinearCode& c, const CovradOptions& opt) { return covering_radius_detail(c, opt).radius; }

}  // namespace qcode
