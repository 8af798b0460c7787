#include "qcode/far_word_search.hpp"

#include <algorithm>
#include <map>

#include "qcode/errors.hpp"

namespace qcode {

struct FarWordSearch::Frame {
    std::vector<std::uint64_t> levels;  // per depth: (top_ + 1) x words_
    std::vector<std::uint8_t> z;
};

FarWordSearch::FarWordSearch(const LinearCode& code, int threshold, bool reduce_symmetry)
    : field_(code.field()), reduce_(reduce_symmetry) {
    const auto& g = code.generator();
    if (!is_systematic(g)) throw UsageError("far-word search needs a systematic generator matrix");
    const std::size_t k = code.k();
    const std::size_t n = code.n();
    m_ = n - k;

    // Column classes of the redundancy part.
    class_of_.assign(m_, -1);
    scale_.assign(m_, 1);
    std::map<std::vector<std::uint8_t>, int> class_index;
    std::vector<std::vector<int>> members;
    for (std::size_t i = 0; i < m_; ++i) {
        auto col = g.column(k + i);
        std::uint8_t lead = 0;
        for (auto x : col)
            if (x != 0) {
                lead = x;
                break;
            }
        if (lead != 0) {
            const auto inv = field_.inv(lead);
            for (auto& x : col) x = field_.mul(x, inv);
            scale_[i] = lead;
        }
        auto [it, fresh] = class_index.try_emplace(col, static_cast<int>(members.size()));
        if (fresh) members.emplace_back();
        members[static_cast<std::size_t>(it->second)].push_back(static_cast<int>(i));
        class_of_[i] = it->second;
    }
    std::stable_sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    for (const auto& cls : members) order_.insert(order_.end(), cls.begin(), cls.end());
    class_prev_.assign(m_, {});
    for (std::size_t d = 0; d < m_; ++d)
        for (std::size_t e = 0; e < d; ++e)
            if (class_of_[static_cast<std::size_t>(order_[e])] == class_of_[static_cast<std::size_t>(order_[d])])
                class_prev_[d].push_back(static_cast<int>(e));

    // Binding constraints.
    std::vector<std::vector<std::uint8_t>> targets;
    std::vector<int> budgets;
    code.for_each_codeword([&](const GFVec& cw) {
        int wu = 0;
        for (std::size_t i = 0; i < k; ++i) wu += cw[i] != 0;
        const int budget = static_cast<int>(m_) - threshold + wu;
        if (budget < 0) infeasible_ = true;
        if (budget >= static_cast<int>(m_)) return;
        std::vector<std::uint8_t> r(m_);
        for (std::size_t i = 0; i < m_; ++i) r[i] = cw[k + i];
        targets.push_back(std::move(r));
        budgets.push_back(budget);
    });
    targets_ = targets;
    budgets_ = budgets;

    const std::size_t count = targets.size();
    words_ = std::max<std::size_t>(1, (count + 63) / 64);
    top_ = budgets.empty() ? 0 : *std::max_element(budgets.begin(), budgets.end());
    const auto levels = static_cast<std::size_t>(top_) + 1;
    initial_levels_.assign(levels * words_, 0);
    for (std::size_t u = 0; u < count; ++u) {
        const auto credit = static_cast<std::size_t>(top_ - budgets[u]);
        for (std::size_t j = 0; j <= credit && j < levels; ++j) initial_levels_[j * words_ + u / 64] |= 1ULL << (u % 64);
    }
    const auto q = static_cast<std::size_t>(field_.q());
    masks_.assign(m_ * q * words_, 0);
    for (std::size_t d = 0; d < m_; ++d) {
        const auto coord = static_cast<std::size_t>(order_[d]);
        for (std::size_t u = 0; u < count; ++u)
            masks_[(d * q + targets[u][coord]) * words_ + u / 64] |= 1ULL << (u % 64);
    }
}

bool FarWordSearch::value_allowed(std::size_t depth, std::uint8_t v, const std::vector<std::uint8_t>& z,
                                  bool seen_nonzero) const {
    if (!reduce_) return true;
    if (!seen_nonzero && v > 1) return false;
    const auto coord = static_cast<std::size_t>(order_[depth]);
    const auto w = field_.mul(v, field_.inv(scale_[coord]));
    for (int e : class_prev_[depth]) {
        const auto pc = static_cast<std::size_t>(order_[static_cast<std::size_t>(e)]);
        if (field_.mul(scale_[pc], w) < z[pc]) return false;
    }
    return true;
}

FarWordStats FarWordSearch::run(std::span<const std::uint8_t> prefix, const Visitor& visit,
                                std::uint64_t node_limit) const {
    FarWordStats stats;
    if (infeasible_) return stats;
    if (prefix.size() > m_) throw UsageError("search prefix longer than the redundancy");
    Frame f;
    const auto lw = (static_cast<std::size_t>(top_) + 1) * words_;
    f.levels.assign((m_ + 1) * lw, 0);
    std::copy(initial_levels_.begin(), initial_levels_.end(), f.levels.begin());
    f.z.assign(m_, 0);
    descend(0, f, prefix, visit, node_limit, stats);
    return stats;
}

bool FarWordSearch::descend(std::size_t depth, Frame& f, std::span<const std::uint8_t> prefix, const Visitor& visit,
                            std::uint64_t node_limit, FarWordStats& stats) const {
    if (node_limit != 0 && stats.nodes >= node_limit) {
        stats.truncated = true;
        return false;
    }
    ++stats.nodes;
    if (depth == m_) {
        if (reduce_ && canonical(f.z) != f.z) return true;
        ++stats.solutions;
        return visit(f.z);
    }
    const auto q = static_cast<std::size_t>(field_.q());
    const auto lw = (static_cast<std::size_t>(top_) + 1) * words_;
    const std::uint64_t* cur = f.levels.data() + depth * lw;
    std::uint64_t* next = f.levels.data() + (depth + 1) * lw;
    const std::uint64_t* cur_top = cur + static_cast<std::size_t>(top_) * words_;
    std::uint64_t* next_top = next + static_cast<std::size_t>(top_) * words_;
    bool seen_nonzero = false;
    if (reduce_)
        for (std::size_t e = 0; e < depth; ++e)
            if (f.z[static_cast<std::size_t>(order_[e])] != 0) {
                seen_nonzero = true;
                break;
            }

    std::size_t v_lo = 0;
    std::size_t v_hi = q;
    if (depth < prefix.size()) {
        v_lo = prefix[depth];
        v_hi = v_lo + 1;
        if (v_lo >= q) return true;
    }
    const auto coord = static_cast<std::size_t>(order_[depth]);
    for (std::size_t v = v_lo; v < v_hi; ++v) {
        if (!value_allowed(depth, static_cast<std::uint8_t>(v), f.z, seen_nonzero)) continue;
        const std::uint64_t* s = masks_.data() + (depth * q + v) * words_;
        bool dead = false;
        for (std::size_t w = 0; w < words_; ++w)
            if (cur_top[w] & s[w]) {
                dead = true;
                break;
            }
        if (dead) continue;
        std::copy(cur, cur + words_, next);
        for (std::size_t j = 1; j <= static_cast<std::size_t>(top_); ++j)
            for (std::size_t w = 0; w < words_; ++w)
                next[j * words_ + w] = cur[j * words_ + w] | (cur[(j - 1) * words_ + w] & s[w]);
        // Forward check: every later coordinate needs a value that keeps all
        // counters within budget.
        bool wipeout = false;
        for (std::size_t d2 = depth + 1; d2 < m_ && !wipeout; ++d2) {
            bool any = false;
            for (std::size_t v2 = 0; v2 < q && !any; ++v2) {
                const std::uint64_t* s2 = masks_.data() + (d2 * q + v2) * words_;
                bool ok = true;
                for (std::size_t w = 0; w < words_; ++w)
                    if (next_top[w] & s2[w]) {
                        ok = false;
                        break;
                    }
                any = ok;
            }
            wipeout = !any;
        }
        if (wipeout) continue;
        f.z[coord] = static_cast<std::uint8_t>(v);
        const bool go_on = descend(depth + 1, f, prefix, visit, node_limit, stats);
        f.z[coord] = 0;
        if (!go_on) return false;
    }
    return true;
}

std::optional<std::vector<std::uint8_t>> FarWordSearch::find_one(std::uint64_t node_limit) const {
    std::optional<std::vector<std::uint8_t>> found;
    auto st = run(
        {},
        [&](const std::vector<std::uint8_t>& z) {
            found = z;
            return false;
        },
        node_limit);
    if (!found && st.truncated)
        throw ResourceError("far-word search stopped at the node limit of " + std::to_string(node_limit));
    return found;
}

bool FarWordSearch::satisfies(std::span<const std::uint8_t> z) const {
    if (infeasible_ || z.size() != m_) return false;
    for (std::size_t u = 0; u < targets_.size(); ++u) {
        int agree = 0;
        for (std::size_t i = 0; i < m_; ++i) agree += targets_[u][i] == z[i];
        if (agree > budgets_[u]) return false;
    }
    return true;
}

std::vector<std::uint8_t> FarWordSearch::canonical(std::span<const std::uint8_t> z) const {
    std::vector<std::uint8_t> input(z.begin(), z.end());
    if (!reduce_) return input;
    const int q = field_.q();
    std::vector<std::uint8_t> best;  // search order
    for (int lambda = 1; lambda < q; ++lambda) {
        std::vector<std::uint8_t> cand(m_);
        std::size_t d = 0;
        while (d < m_) {
            std::size_t e = d;
            const int cls = class_of_[static_cast<std::size_t>(order_[d])];
            while (e < m_ && class_of_[static_cast<std::size_t>(order_[e])] == cls) ++e;
            int count[8] = {};
            for (std::size_t i = d; i < e; ++i) {
                const auto c = static_cast<std::size_t>(order_[i]);
                const auto w = field_.mul(field_.mul(static_cast<std::uint8_t>(lambda), input[c]), field_.inv(scale_[c]));
                ++count[w];
            }
            for (std::size_t i = d; i < e; ++i) {
                const auto s = scale_[static_cast<std::size_t>(order_[i])];
                int pick = -1;
                for (int w = 0; w < q; ++w)
                    if (count[w] > 0 && (pick < 0 || field_.mul(s, static_cast<std::uint8_t>(w)) <
                                                         field_.mul(s, static_cast<std::uint8_t>(pick))))
                        pick = w;
                --count[pick];
                cand[i] = field_.mul(s, static_cast<std::uint8_t>(pick));
            }
            d = e;
        }
        if (best.empty() || cand < best) best = std::move(cand);
    }
    std::vector<std::uint8_t> out(m_);
    for (std::size_t i = 0; i < m_; ++i) out[static_cast<std::size_t>(order_[i])] = best[i];
    return out;
}

}  // namespace qcode
