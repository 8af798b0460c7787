#include "qcode/extend.hpp"

#include "qcode/errors.hpp"

namespace qcode {

namespace {

LinearCode systematic(const LinearCode& c) {
    if (is_systematic(c.generator())) return c;
    return LinearCode(systematize(c.generator()).matrix);
}

}  // namespace

ExtensionTask::ExtensionTask(const LinearCode& parent_code, int d, bool reduce)
    : parent(systematic(parent_code)), target_d(d), reduce_symmetry(reduce) {
    if (d < 1) throw UsageError("target minimum weight must be positive");
    if (parent.k() > 0 && parent.min_weight() < d)
        throw UsageError("parent minimum weight " + std::to_string(parent.min_weight()) + " is below target " +
                         std::to_string(d));
}

LinearCode extend_matrix(const LinearCode& parent, std::span<const std::uint8_t> b) {
    const auto& g = parent.generator();
    if (!is_systematic(g)) throw UsageError("extend_matrix needs a systematic parent");
    const std::size_t k = g.k();
    const std::size_t n = g.n();
    if (b.size() != n - k)
        throw UsageError("row b has length " + std::to_string(b.size()) + ", expected " + std::to_string(n - k));
    std::vector<GFVec> rows;
    rows.reserve(k + 1);
    std::vector<std::uint8_t> digits(n + 1);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) digits[j] = g.at(i, j);
        digits[k] = 0;
        for (std::size_t j = k; j < n; ++j) digits[j + 1] = g.at(i, j);
        rows.push_back(GFVec::from_digits(g.field(), digits));
    }
    std::fill(digits.begin(), digits.end(), 0);
    digits[k] = 1;
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (b[j] >= g.field().q()) throw UsageError("digit out of range in row b");
        digits[k + 1 + j] = b[j];
    }
    rows.push_back(GFVec::from_digits(g.field(), digits));
    return LinearCode(GeneratorMatrix(g.field(), n + 1, std::move(rows)));
}

std::vector<std::uint8_t> normalize_b(const LinearCode& parent, std::span<const std::uint8_t> b) {
    FarWordSearch search(systematic(parent), 0, true);
    if (b.size() != search.redundancy()) throw UsageError("row b has the wrong length");
    return search.canonical(b);
}

ExtensionStats for_each_child(const ExtensionTask& task, std::span<const std::uint8_t> prefix,
                              const std::function<void(const LinearCode&)>& emit) {
    FarWordSearch search(task.parent, task.target_d - 1, task.reduce_symmetry);
    ExtensionStats out;
    auto st = search.run(prefix, [&](const std::vector<std::uint8_t>& b) {
        LinearCode child = extend_matrix(task.parent, b);
        if (child.min_weight() < task.target_d)
            throw InvariantError("extension produced a child of minimum weight " + std::to_string(child.min_weight()) +
                                 " below " + std::to_string(task.target_d));
        emit(child);
        return true;
    });
    out.nodes = st.nodes;
    out.children = st.solutions;
    return out;
}

std::vector<LinearCode> enumerate_children(const ExtensionTask& task, ExtensionStats* stats) {
    std::vector<LinearCode> children;
    auto st = for_each_child(task, {}, [&](const LinearCode& c) { children.push_back(c); });
    if (stats) *stats = st;
    return children;
}

std::vector<std::vector<std::uint8_t>> naive_extension_rows(const ExtensionTask& task) {
    const std::size_t m = task.parent.n() - task.parent.k();
    const int q = task.parent.q();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < m; ++i) {
        total *= static_cast<std::uint64_t>(q);
        if (total > kEnumerationBudget) throw ResourceError("naive extension enumeration exceeds budget");
    }
    std::vector<std::vector<std::uint8_t>> out;
    std::vector<std::uint8_t> b(m, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        auto x = idx;
        for (std::size_t i = m; i-- > 0;) {
            b[i] = static_cast<std::uint8_t>(x % static_cast<std::uint64_t>(q));
            x /= static_cast<std::uint64_t>(q);
        }
        if (extend_matrix(task.parent, b).min_weight() >= task.target_d) out.push_back(b);
    }
    return out;
}

std::vector<std::vector<std::uint8_t>> shard_prefixes(const ExtensionTask& task, std::size_t depth) {
    const std::size_t m = task.parent.n() - task.parent.k();
    depth = std::min(depth, m);
    const auto q = static_cast<std::uint8_t>(task.parent.q());
    std::vector<std::vector<std::uint8_t>> out{{}};
    for (std::size_t level = 0; level < depth; ++level) {
        std::vector<std::vector<std::uint8_t>> next;
        for (const auto& p : out)
            for (std::uint8_t v = 0; v < q; ++v) {
                next.push_back(p);
                next.back().push_back(v);
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace qcode
