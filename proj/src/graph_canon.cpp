#include "qcode/graph_canon.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "qcode/errors.hpp"

namespace qcode {

namespace {

inline std::uint64_t mix(std::uint64_t h, std::uint64_t x) noexcept {
    std::uint64_t z = h + 0x9e3779b97f4a7c15ULL + x * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Ordered partition. Cells are contiguous ranges of `elem`; a cell is
// identified by its start position.
struct Partition {
    std::vector<int> elem;
    std::vector<int> pos;
    std::vector<int> cell;
    std::vector<int> len;
    int cells = 0;
};

class Refiner {
public:
    explicit Refiner(const ColoredDigraph& g)
        : g_(g),
          count_(static_cast<std::size_t>(g.num_vertices), 0),
          in_queue_(static_cast<std::size_t>(g.num_vertices), 0),
          cell_mark_(static_cast<std::size_t>(g.num_vertices), 0) {}

    Partition initial() const {
        const int n = g_.num_vertices;
        Partition p;
        p.elem.resize(static_cast<std::size_t>(n));
        std::iota(p.elem.begin(), p.elem.end(), 0);
        std::stable_sort(p.elem.begin(), p.elem.end(),
                         [&](int a, int b) { return g_.color[static_cast<std::size_t>(a)] < g_.color[static_cast<std::size_t>(b)]; });
        p.pos.resize(static_cast<std::size_t>(n));
        p.cell.resize(static_cast<std::size_t>(n));
        p.len.assign(static_cast<std::size_t>(n), 0);
        int start = 0;
        for (int i = 0; i < n; ++i) {
            const int v = p.elem[static_cast<std::size_t>(i)];
            p.pos[static_cast<std::size_t>(v)] = i;
            if (i > 0 && g_.color[static_cast<std::size_t>(v)] !=
                             g_.color[static_cast<std::size_t>(p.elem[static_cast<std::size_t>(i - 1)])]) {
                p.len[static_cast<std::size_t>(start)] = i - start;
                ++p.cells;
                start = i;
            }
            p.cell[static_cast<std::size_t>(v)] = start;
        }
        if (n > 0) {
            p.len[static_cast<std::size_t>(start)] = n - start;
            ++p.cells;
        }
        return p;
    }

    std::vector<int> all_cells(const Partition& p) const {
        std::vector<int> cells;
        for (int i = 0; i < g_.num_vertices; i += p.len[static_cast<std::size_t>(i)]) cells.push_back(i);
        return cells;
    }

    // Refines p to the coarsest equitable partition finer than it, starting
    // from the given splitter cells. Returns a hash of the refinement trace.
    std::uint64_t refine(Partition& p, const std::vector<int>& splitters, std::uint64_t h) {
        queue_.clear();
        for (int s : splitters) push(s);
        const int n = g_.num_vertices;
        while (!queue_.empty() && p.cells < n) {
            const int w = queue_.front();
            queue_.pop_front();
            in_queue_[static_cast<std::size_t>(w)] = 0;
            const auto wlen = static_cast<std::size_t>(p.len[static_cast<std::size_t>(w)]);
            splitter_.assign(p.elem.begin() + w, p.elem.begin() + w + static_cast<std::ptrdiff_t>(wlen));
            h = mix(h, static_cast<std::uint64_t>(w) << 20 | wlen);
            for (int dir = 0; dir < 2; ++dir) {
                const auto& off = dir == 0 ? g_.out_offsets : g_.in_offsets;
                const auto& tgt = dir == 0 ? g_.out_targets : g_.in_targets;
                touched_.clear();
                for (int v : splitter_)
                    for (int e = off[static_cast<std::size_t>(v)]; e < off[static_cast<std::size_t>(v) + 1]; ++e) {
                        const int t = tgt[static_cast<std::size_t>(e)];
                        if (count_[static_cast<std::size_t>(t)]++ == 0) touched_.push_back(t);
                    }
                touched_cells_.clear();
                for (int t : touched_) {
                    const int c = p.cell[static_cast<std::size_t>(t)];
                    if (!cell_mark_[static_cast<std::size_t>(c)]) {
                        cell_mark_[static_cast<std::size_t>(c)] = 1;
                        touched_cells_.push_back(c);
                    }
                }
                std::sort(touched_cells_.begin(), touched_cells_.end());
                for (int c : touched_cells_) {
                    cell_mark_[static_cast<std::size_t>(c)] = 0;
                    if (p.len[static_cast<std::size_t>(c)] > 1) h = split(p, c, h, dir);
                }
                for (int t : touched_) count_[static_cast<std::size_t>(t)] = 0;
            }
        }
        for (int s : queue_) in_queue_[static_cast<std::size_t>(s)] = 0;
        queue_.clear();
        return mix(h, static_cast<std::uint64_t>(p.cells));
    }

    // Splits v's cell into {v} followed by the rest; returns the new
    // singleton cell (always the old cell start).
    static int individualize(Partition& p, int v) {
        const int c = p.cell[static_cast<std::size_t>(v)];
        const int l = p.len[static_cast<std::size_t>(c)];
        const int pv = p.pos[static_cast<std::size_t>(v)];
        const int u = p.elem[static_cast<std::size_t>(c)];
        p.elem[static_cast<std::size_t>(pv)] = u;
        p.pos[static_cast<std::size_t>(u)] = pv;
        p.elem[static_cast<std::size_t>(c)] = v;
        p.pos[static_cast<std::size_t>(v)] = c;
        p.len[static_cast<std::size_t>(c)] = 1;
        p.len[static_cast<std::size_t>(c + 1)] = l - 1;
        for (int i = c + 1; i < c + l; ++i) p.cell[static_cast<std::size_t>(p.elem[static_cast<std::size_t>(i)])] = c + 1;
        ++p.cells;
        return c;
    }

private:
    void push(int c) {
        if (!in_queue_[static_cast<std::size_t>(c)]) {
            in_queue_[static_cast<std::size_t>(c)] = 1;
            queue_.push_back(c);
        }
    }

    std::uint64_t split(Partition& p, int c, std::uint64_t h, int dir) {
        const int l = p.len[static_cast<std::size_t>(c)];
        auto first = p.elem.begin() + c;
        auto last = first + l;
        const int c0 = count_[static_cast<std::size_t>(*first)];
        if (std::all_of(first, last, [&](int v) { return count_[static_cast<std::size_t>(v)] == c0; })) return h;
        std::sort(first, last, [&](int a, int b) { return count_[static_cast<std::size_t>(a)] < count_[static_cast<std::size_t>(b)]; });
        const bool was_queued = in_queue_[static_cast<std::size_t>(c)] != 0;
        parts_.clear();
        int start = c;
        for (int i = c; i < c + l; ++i) {
            const int v = p.elem[static_cast<std::size_t>(i)];
            if (i > c && count_[static_cast<std::size_t>(v)] != count_[static_cast<std::size_t>(p.elem[static_cast<std::size_t>(i - 1)])]) {
                parts_.push_back(start);
                start = i;
            }
            p.pos[static_cast<std::size_t>(v)] = i;
            p.cell[static_cast<std::size_t>(v)] = start;
        }
        parts_.push_back(start);
        h = mix(h, static_cast<std::uint64_t>(c) << 24 | static_cast<std::uint64_t>(l) << 2 | static_cast<std::uint64_t>(dir));
        int largest = -1;
        int largest_len = -1;
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            const int s = parts_[i];
            const int e = i + 1 < parts_.size() ? parts_[i + 1] : c + l;
            p.len[static_cast<std::size_t>(s)] = e - s;
            h = mix(h, static_cast<std::uint64_t>(count_[static_cast<std::size_t>(p.elem[static_cast<std::size_t>(s)])]) << 32 |
                           static_cast<std::uint64_t>(e - s));
            if (e - s > largest_len) {
                largest_len = e - s;
                largest = s;
            }
        }
        p.cells += static_cast<int>(parts_.size()) - 1;
        for (int s : parts_) {
            if (was_queued) {
                if (s != c) push(s);
            } else if (s != largest) {
                push(s);
            }
        }
        return h;
    }

    const ColoredDigraph& g_;
    std::vector<int> count_;
    std::vector<char> in_queue_;
    std::vector<char> cell_mark_;
    std::deque<int> queue_;
    std::vector<int> splitter_, touched_, touched_cells_, parts_;
};

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }

private:
    std::vector<int> parent_;
};

class Search {
public:
    explicit Search(const ColoredDigraph& g) : g_(g), refiner_(g) {}

    CanonicalLabeling run() {
        Partition root = refiner_.initial();
        const auto h = refiner_.refine(root, refiner_.all_cells(root), 0x51ed27);
        trace_.assign(1, h);
        path_.clear();
        dfs(root, 0);
        CanonicalLabeling out;
        out.labeling = best_lab_;
        out.certificate = best_cert_;
        out.generators = generators_;
        out.stats = stats_;
        return out;
    }

private:
    int target_cell(const Partition& p) const {
        int best = -1;
        int best_len = g_.num_vertices + 1;
        for (int i = 0; i < g_.num_vertices; i += p.len[static_cast<std::size_t>(i)]) {
            const int l = p.len[static_cast<std::size_t>(i)];
            if (l > 1 && l < best_len) {
                best = i;
                best_len = l;
            }
        }
        return best;
    }

    static int divergence(const std::vector<int>& a, const std::vector<int>& b) {
        std::size_t i = 0;
        while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
        return static_cast<int>(i);
    }

    void add_generator(const std::vector<int>& from, const std::vector<int>& to) {
        Permutation gamma(static_cast<std::size_t>(g_.num_vertices));
        for (std::size_t i = 0; i < from.size(); ++i) gamma[static_cast<std::size_t>(from[i])] = to[i];
        bool identity = true;
        for (std::size_t v = 0; v < gamma.size(); ++v)
            if (gamma[v] != static_cast<int>(v)) {
                identity = false;
                break;
            }
        if (!identity) generators_.push_back(std::move(gamma));
    }

    // Compares the current path's trace prefix with a stored path's:
    // -1 current smaller (better), 0 equal, +1 larger.
    int compare_prefix(const std::vector<std::uint64_t>& other, int level) const {
        for (int l = 0; l <= level; ++l) {
            if (static_cast<std::size_t>(l) >= other.size()) return 1;
            const auto a = trace_[static_cast<std::size_t>(l)];
            const auto b = other[static_cast<std::size_t>(l)];
            if (a != b) return a < b ? -1 : 1;
        }
        return 0;
    }

    // Returns the level at which the search resumes; a value below `level`
    // unwinds this node.
    int dfs(const Partition& p, int level) {
        ++stats_.nodes;
        const std::uint64_t h = trace_[static_cast<std::size_t>(level)];
        bool eq_first = true;
        int cmp = 0;
        if (have_first_) {
            eq_first = compare_prefix(first_trace_, level) == 0;
            cmp = compare_prefix(best_trace_, level);
            if (cmp > 0 && !eq_first) return level - 1;
        }

        if (p.cells == g_.num_vertices) return leaf(p, level, eq_first, cmp);

        const int c = target_cell(p);
        const std::vector<int> members(p.elem.begin() + c, p.elem.begin() + c + p.len[static_cast<std::size_t>(c)]);
        std::vector<int> explored;
        std::size_t gens_seen = static_cast<std::size_t>(-1);
        UnionFind orbits(0);
        for (int v : members) {
            if (!generators_.empty() && !explored.empty()) {
                if (gens_seen != generators_.size()) {
                    orbits = UnionFind(g_.num_vertices);
                    for (const auto& gamma : generators_) {
                        bool fixes = true;
                        for (int l = 0; l < level; ++l)
                            if (gamma[static_cast<std::size_t>(path_[static_cast<std::size_t>(l)])] != path_[static_cast<std::size_t>(l)]) {
                                fixes = false;
                                break;
                            }
                        if (!fixes) continue;
                        for (int x = 0; x < g_.num_vertices; ++x) orbits.unite(x, gamma[static_cast<std::size_t>(x)]);
                    }
                    gens_seen = generators_.size();
                }
                const int r = orbits.find(v);
                if (std::any_of(explored.begin(), explored.end(), [&](int e) { return orbits.find(e) == r; })) continue;
            }
            explored.push_back(v);
            Partition child = p;
            const int single = Refiner::individualize(child, v);
            const auto hc = refiner_.refine(child, {single}, mix(h, static_cast<std::uint64_t>(c)));
            path_.resize(static_cast<std::size_t>(level));
            path_.push_back(v);
            trace_.resize(static_cast<std::size_t>(level) + 1);
            trace_.push_back(hc);
            const int resume = dfs(child, level + 1);
            if (resume < level) return resume;
        }
        return level - 1;
    }

    int leaf(const Partition& p, int level, bool eq_first, int cmp) {
        ++stats_.leaves;
        auto cert = labeled_certificate(g_, p.elem);
        const std::vector<int> path(path_.begin(), path_.begin() + level);
        if (!have_first_) {
            have_first_ = true;
            first_lab_ = best_lab_ = p.elem;
            first_cert_ = best_cert_ = cert;
            first_trace_ = best_trace_ = std::vector<std::uint64_t>(trace_.begin(), trace_.begin() + level + 1);
            first_path_ = best_path_ = path;
            return level - 1;
        }
        if (eq_first && cert == first_cert_) {
            add_generator(first_lab_, p.elem);
            return divergence(first_path_, path);
        }
        if (cmp < 0 || (cmp == 0 && cert < best_cert_)) {
            best_lab_ = p.elem;
            best_cert_ = std::move(cert);
            best_trace_.assign(trace_.begin(), trace_.begin() + level + 1);
            best_path_ = path;
            return level - 1;
        }
        if (cmp == 0 && cert == best_cert_) {
            add_generator(best_lab_, p.elem);
            return divergence(best_path_, path);
        }
        return level - 1;
    }

    const ColoredDigraph& g_;
    Refiner refiner_;
    std::vector<std::uint64_t> trace_;
    std::vector<int> path_;
    bool have_first_ = false;
    std::vector<int> first_lab_, best_lab_, first_path_, best_path_;
    std::vector<std::uint16_t> first_cert_, best_cert_;
    std::vector<std::uint64_t> first_trace_, best_trace_;
    std::vector<Permutation> generators_;
    LabelingStats stats_;
};

}  // namespace

ColoredDigraph ColoredDigraph::from_arcs(int num_vertices, std::vector<int> color,
                                         const std::vector<std::pair<int, int>>& arcs) {
    if (static_cast<int>(color.size()) != num_vertices) throw UsageError("color vector size mismatch");
    if (num_vertices > 65535) throw ResourceError("graph too large for 16-bit certificates");
    ColoredDigraph g;
    g.num_vertices = num_vertices;
    g.color = std::move(color);
    const auto n = static_cast<std::size_t>(num_vertices);
    g.out_offsets.assign(n + 1, 0);
    g.in_offsets.assign(n + 1, 0);
    for (auto [a, b] : arcs) {
        if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices) throw UsageError("arc endpoint out of range");
        ++g.out_offsets[static_cast<std::size_t>(a) + 1];
        ++g.in_offsets[static_cast<std::size_t>(b) + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        g.out_offsets[i + 1] += g.out_offsets[i];
        g.in_offsets[i + 1] += g.in_offsets[i];
    }
    g.out_targets.resize(arcs.size());
    g.in_targets.resize(arcs.size());
    auto out_fill = g.out_offsets;
    auto in_fill = g.in_offsets;
    for (auto [a, b] : arcs) {
        g.out_targets[static_cast<std::size_t>(out_fill[static_cast<std::size_t>(a)]++)] = b;
        g.in_targets[static_cast<std::size_t>(in_fill[static_cast<std::size_t>(b)]++)] = a;
    }
    return g;
}

std::vector<std::uint16_t> labeled_certificate(const ColoredDigraph& g, const std::vector<int>& labeling) {
    const auto n = static_cast<std::size_t>(g.num_vertices);
    std::vector<int> position(n);
    for (std::size_t i = 0; i < n; ++i) position[static_cast<std::size_t>(labeling[i])] = static_cast<int>(i);
    std::vector<std::uint16_t> cert;
    cert.reserve(2 * n + g.num_arcs());
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = static_cast<std::size_t>(labeling[i]);
        const int b = g.out_offsets[v];
        const int e = g.out_offsets[v + 1];
        cert.push_back(static_cast<std::uint16_t>(g.color[v]));
        cert.push_back(static_cast<std::uint16_t>(e - b));
        const auto mark = cert.size();
        for (int a = b; a < e; ++a) cert.push_back(static_cast<std::uint16_t>(position[static_cast<std::size_t>(g.out_targets[static_cast<std::size_t>(a)])]));
        std::sort(cert.begin() + static_cast<std::ptrdiff_t>(mark), cert.end());
    }
    return cert;
}

bool is_automorphism(const ColoredDigraph& g, const Permutation& p) {
    if (static_cast<int>(p.size()) != g.num_vertices) return false;
    std::vector<int> labeling(p.size());
    std::iota(labeling.begin(), labeling.end(), 0);
    std::vector<int> image(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) image[i] = p[i];
    return labeled_certificate(g, labeling) == labeled_certificate(g, image);
}

CanonicalLabeling canonical_labeling(const ColoredDigraph& g) {
    if (g.num_vertices == 0) return {};
    return Search(g).run();
}

}  // namespace qcode
