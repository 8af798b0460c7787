#include "qcode/bounds.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "qcode/errors.hpp"

namespace qcode {

namespace {

constexpr int kInf = 1 << 29;

int ceil_div(int a, int b) { return (a + b - 1) / b; }

std::optional<int> int_field(std::string_view token, std::string_view key) {
    if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key || token[key.size()] != '=')
        return std::nullopt;
    int v = 0;
    auto s = token.substr(key.size() + 1);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

std::string BoundsFact::to_string() const {
    return std::string(kind == Kind::exists ? "exists " : "not_exists ") + params.bracket();
}

BoundsConfig BoundsConfig::parse(std::string_view text) {
    BoundsConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::string source;
        if (auto s = line.find("source="); s != std::string::npos) {
            source = line.substr(s + 7);
            line.erase(s);
        }
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        const auto where = " on bounds line " + std::to_string(lineno);
        if (tok[0] == "window") {
            if (tok.size() != 4) throw UsageError("malformed window" + where);
            auto q = int_field(tok[1], "q");
            auto n = int_field(tok[2], "nmax");
            auto k = int_field(tok[3], "kmax");
            if (!q || !n || !k || *n < 1 || *k < 1) throw UsageError("malformed window" + where);
            cfg.window = {*q, *n, *k};
            continue;
        }
        BoundsFact f;
        if (tok[0] == "exists")
            f.kind = BoundsFact::Kind::exists;
        else if (tok[0] == "not_exists")
            f.kind = BoundsFact::Kind::not_exists;
        else
            throw UsageError("unknown fact kind '" + tok[0] + "'" + where);
        if (tok.size() != 5 && !(tok.size() == 6 && tok[5] == "new")) throw UsageError("malformed fact" + where);
        auto q = int_field(tok[1], "q");
        auto n = int_field(tok[2], "n");
        auto k = int_field(tok[3], "k");
        auto d = int_field(tok[4], "d");
        if (!q || !n || !k || !d || *n < 1 || *k < 1 || *d < 1) throw UsageError("malformed fact" + where);
        f.params = {*q, *n, *k, *d};
        f.prior = tok.size() == 5;
        f.rule = "axiom";
        while (!source.empty() && (source.back() == ' ' || source.back() == '\r')) source.pop_back();
        if (source.empty()) throw UsageError("fact without source label" + where);
        f.source = source;
        cfg.axioms.push_back(std::move(f));
    }
    return cfg;
}

BoundsConfig BoundsConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open bounds file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

int griesmer_excluded_d(int q, int n, int k) {
    auto length = [&](int d) {
        long long sum = 0;
        long long p = 1;
        for (int i = 0; i < k; ++i, p *= q) sum += (d + p - 1) / p;
        return sum;
    };
    int d = 1;
    while (length(d) <= n) ++d;
    return d;
}

std::size_t DerivedBounds::cell(int n, int k) const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(window.kmax + 1) + static_cast<std::size_t>(k);
}

int DerivedBounds::excluded(int n, int k) const { return in_window(n, k) ? ne_[cell(n, k)] : kInf; }
int DerivedBounds::existing(int n, int k) const { return in_window(n, k) ? ex_[cell(n, k)] : 0; }
int DerivedBounds::prior_excluded(int n, int k) const { return in_window(n, k) ? prior_ne_[cell(n, k)] : kInf; }

std::optional<std::size_t> DerivedBounds::excluded_fact(int n, int k) const {
    if (!in_window(n, k) || ne_fact_[cell(n, k)] == kNone) return std::nullopt;
    return ne_fact_[cell(n, k)];
}

namespace {

struct Closure {
    std::vector<int> ne;
    std::vector<std::size_t> ne_fact;
};

}  // namespace

DerivedBounds derive_bounds(const std::vector<BoundsFact>& axioms_in, const BoundsWindow& window) {
    DerivedBounds out;
    out.window = window;
    const auto cells = static_cast<std::size_t>(window.nmax + 1) * static_cast<std::size_t>(window.kmax + 1);
    const int q = window.q;

    // Axioms in a canonical order so that the result does not depend on the
    // order they were given in.
    std::vector<BoundsFact> axioms;
    for (const auto& a : axioms_in)
        if (a.params.q == q && out.in_window(a.params.n, a.params.k)) axioms.push_back(a);
    std::sort(axioms.begin(), axioms.end(), [](const BoundsFact& a, const BoundsFact& b) {
        return std::tie(a.kind, a.params, a.prior, a.source) < std::tie(b.kind, b.params, b.prior, b.source);
    });
    axioms.erase(std::unique(axioms.begin(), axioms.end(),
                             [](const BoundsFact& a, const BoundsFact& b) {
                                 return a.kind == b.kind && a.params == b.params && a.prior == b.prior &&
                                        a.source == b.source;
                             }),
                 axioms.end());
    for (auto& a : axioms) {
        a.rule = "axiom";
        a.antecedents.clear();
        out.facts.push_back(a);
    }

    // Nonexistence closure. Every rule derives a cell from cells of smaller
    // length, so one pass in increasing n reaches the fixpoint. Ties keep
    // the first candidate in the order axiom, griesmer, puncture, shorten,
    // residual.
    auto close = [&](bool prior_only, bool record) {
        Closure c{std::vector<int>(cells, kInf), std::vector<std::size_t>(cells, DerivedBounds::kNone)};
        for (int n = 1; n <= window.nmax; ++n)
            for (int k = 1; k <= std::min(n, window.kmax); ++k) {
                const auto idx = out.cell(n, k);
                int best = kInf;
                std::size_t best_fact = DerivedBounds::kNone;
                std::string rule;
                std::vector<std::size_t> ante;
                for (std::size_t i = 0; i < axioms.size(); ++i) {
                    const auto& a = axioms[i];
                    if (a.kind != BoundsFact::Kind::not_exists || a.params.n != n || a.params.k != k) continue;
                    if (prior_only && !a.prior) continue;
                    if (a.params.d < best) {
                        best = a.params.d;
                        best_fact = i;
                        rule = "axiom";
                    }
                }
                auto consider = [&](int d, const char* r, std::vector<std::size_t> from) {
                    if (d < best) {
                        best = d;
                        best_fact = DerivedBounds::kNone;
                        rule = r;
                        ante = std::move(from);
                    }
                };
                consider(griesmer_excluded_d(q, n, k), "griesmer", {});
                if (out.in_window(n - 1, k) && c.ne[out.cell(n - 1, k)] < kInf)
                    consider(c.ne[out.cell(n - 1, k)] + 1, "puncture", {c.ne_fact[out.cell(n - 1, k)]});
                if (k >= 2 && out.in_window(n - 1, k - 1) && c.ne[out.cell(n - 1, k - 1)] < kInf)
                    consider(c.ne[out.cell(n - 1, k - 1)], "shorten", {c.ne_fact[out.cell(n - 1, k - 1)]});
                if (k >= 2)
                    for (int d = 1; d < best && d <= n; ++d) {
                        if (!out.in_window(n - d, k - 1)) continue;
                        const auto a = out.cell(n - d, k - 1);
                        if (c.ne[a] <= ceil_div(d, q)) {
                            consider(d, "residual", {c.ne_fact[a]});
                            break;
                        }
                    }
                c.ne[idx] = best;
                if (!record) continue;
                if (rule == "axiom") {
                    c.ne_fact[idx] = best_fact;
                } else {
                    BoundsFact f;
                    f.kind = BoundsFact::Kind::not_exists;
                    f.params = {q, n, k, best};
                    f.rule = rule;
                    f.antecedents = ante;
                    f.prior = std::all_of(ante.begin(), ante.end(), [&](std::size_t i) { return out.facts[i].prior; });
                    c.ne_fact[idx] = out.facts.size();
                    out.facts.push_back(std::move(f));
                }
            }
        return c;
    };
    auto prior = close(true, false);
    auto full = close(false, true);
    out.prior_ne_ = std::move(prior.ne);
    out.ne_ = std::move(full.ne);
    out.ne_fact_ = std::move(full.ne_fact);

    // Existence closure, decreasing n.
    out.ex_.assign(cells, 0);
    out.ex_fact_.assign(cells, DerivedBounds::kNone);
    for (std::size_t i = 0; i < axioms.size(); ++i) {
        const auto& a = axioms[i];
        if (a.kind != BoundsFact::Kind::exists) continue;
        const auto idx = out.cell(a.params.n, a.params.k);
        if (a.params.d > out.ex_[idx]) {
            out.ex_[idx] = a.params.d;
            out.ex_fact_[idx] = i;
        }
    }
    auto raise = [&](int n, int k, int d, const char* rule, std::size_t from) {
        if (!out.in_window(n, k) || d <= out.ex_[out.cell(n, k)]) return;
        BoundsFact f;
        f.kind = BoundsFact::Kind::exists;
        f.params = {q, n, k, d};
        f.rule = rule;
        f.antecedents = {from};
        f.prior = out.facts[from].prior;
        out.ex_[out.cell(n, k)] = d;
        out.ex_fact_[out.cell(n, k)] = out.facts.size();
        out.facts.push_back(std::move(f));
    };
    for (int n = window.nmax; n >= 1; --n)
        for (int k = std::min(n, window.kmax); k >= 1; --k) {
            const auto idx = out.cell(n, k);
            const int d = out.ex_[idx];
            if (d == 0) continue;
            const auto from = out.ex_fact_[idx];
            if (d >= 2) raise(n - 1, k, d - 1, "puncture", from);
            if (k >= 2) raise(n - 1, k - 1, d, "shorten", from);
            if (k >= 2 && n - d >= 1) raise(n - d, k - 1, ceil_div(d, q), "residual", from);
        }

    for (int n = 1; n <= window.nmax; ++n)
        for (int k = 1; k <= std::min(n, window.kmax); ++k) {
            const auto idx = out.cell(n, k);
            if (out.ex_[idx] >= out.ne_[idx]) {
                std::string msg = "contradictory bounds at " + CodeParams{q, n, k, out.ex_[idx]}.bracket() + "\n";
                msg += out.explain(out.ex_fact_[idx]);
                if (out.ne_fact_[idx] != DerivedBounds::kNone) msg += out.explain(out.ne_fact_[idx]);
                throw InvariantError(msg);
            }
        }

    // New facts and their classification.
    for (int n = 1; n <= window.nmax; ++n)
        for (int k = 1; k <= std::min(n, window.kmax); ++k) {
            const auto idx = out.cell(n, k);
            if (out.ne_[idx] >= out.prior_ne_[idx]) continue;
            const auto fi = out.ne_fact_[idx];
            out.new_nonexistence.push_back(fi);
            // Shortening-only chain back to a new axiom?
            auto cur = fi;
            while (out.facts[cur].rule == "shorten") cur = out.facts[cur].antecedents.front();
            const bool family = out.facts[cur].rule == "axiom" && !out.facts[cur].prior;
            const int d = out.ne_[idx];
            if (family && out.ex_[idx] == d - 1) {
                out.determined_d.push_back({n, k, d - 1, fi});
                if (out.in_window(n + 1, k) && out.ex_[out.cell(n + 1, k)] >= d) out.determined_n.push_back({n + 1, k, d, fi});
            } else if (!family) {
                out.consequences.push_back(fi);
            }
        }
    return out;
}

std::string DerivedBounds::explain(std::size_t fact) const {
    std::string out;
    std::vector<std::pair<std::size_t, int>> stack{{fact, 0}};
    while (!stack.empty()) {
        auto [i, depth] = stack.back();
        stack.pop_back();
        const auto& f = facts[i];
        out += std::string(static_cast<std::size_t>(2 * depth), ' ') + f.to_string() + "  <- ";
        if (f.rule == "axiom")
            out += std::string(f.prior ? "prior: " : "new: ") + f.source;
        else
            out += f.rule;
        out += "\n";
        for (auto it = f.antecedents.rbegin(); it != f.antecedents.rend(); ++it) stack.emplace_back(*it, depth + 1);
    }
    return out;
}

std::string DerivedBounds::report() const {
    const auto q = std::to_string(window.q);
    std::string out;
    out += "determined values\n";
    for (const auto& d : determined_d)
        out += "  d_" + q + "(" + std::to_string(d.n) + "," + std::to_string(d.k) + ") = " + std::to_string(d.d) + "\n";
    for (const auto& d : determined_n)
        out += "  n_" + q + "(" + std::to_string(d.k) + "," + std::to_string(d.d) + ") = " + std::to_string(d.n) + "\n";
    out += "new nonexistence (consequences)\n";
    for (auto i : consequences) out += "  " + facts[i].to_string() + "\n";
    out += "derivations\n";
    for (auto i : new_nonexistence) out += explain(i);
    return out;
}

int max_possible_d(const BoundsConfig& cfg, int n, int k) {
    std::vector<BoundsFact> prior;
    for (const auto& a : cfg.axioms)
        if (a.prior) prior.push_back(a);
    auto w = cfg.window;
    w.nmax = std::max(w.nmax, n);
    w.kmax = std::max(w.kmax, k);
    auto db = derive_bounds(prior, w);
    return std::min(db.excluded(n, k) - 1, n - k + 1);
}

}  // namespace qcode
