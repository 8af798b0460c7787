#include "qcode/linear_code.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qcode/errors.hpp"

namespace qcode {

namespace {

// Row-reduces `rows` in place; returns pivot columns in order.
std::vector<std::size_t> eliminate(const Field& f, std::size_t n, std::vector<GFVec>& rows) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][col] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        rows[r] = scaled(rows[r], f.inv(rows[r][col]));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col] == 0) continue;
            rows[i].add_scaled_inplace(rows[r], f.neg(rows[i][col]));
        }
        pivots.push_back(col);
        ++r;
    }
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(r), rows.end());
    return pivots;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

GeneratorMatrix::GeneratorMatrix(Field field, std::size_t n, std::vector<GFVec> rows)
    : field_(field), n_(n), rows_(std::move(rows)) {
    if (rows_.size() > n_) throw UsageError("dimension exceeds length");
    for (const auto& r : rows_) {
        if (r.size() != n_) throw UsageError("generator row has wrong length");
        if (!(r.field() == field_)) throw UsageError("generator row over wrong field");
    }
    if (rank(field_, n_, rows_) != rows_.size()) throw UsageError("generator rows are linearly dependent");
}

GeneratorMatrix GeneratorMatrix::from_rows(Field field, const std::vector<std::string>& rows) {
    if (rows.empty()) throw UsageError("generator matrix needs at least one row");
    std::vector<GFVec> vs;
    vs.reserve(rows.size());
    for (const auto& r : rows) vs.push_back(GFVec::parse(field, r));
    const auto n = vs.front().size();
    return GeneratorMatrix(field, n, std::move(vs));
}

GeneratorMatrix GeneratorMatrix::parse(std::string_view text) {
    auto lines = split_lines(text);
    if (lines.empty()) throw UsageError("empty generator matrix block");
    int q = 0;
    int n = -1;
    int k = -1;
    if (std::sscanf(lines[0].c_str(), "q=%d n=%d k=%d", &q, &n, &k) != 3)
        throw UsageError("bad generator matrix header: " + lines[0]);
    if (n < 0 || k < 0 || static_cast<std::size_t>(k) != lines.size() - 1)
        throw UsageError("generator matrix header does not match its rows");
    Field f(q);
    std::vector<GFVec> rows;
    for (int i = 0; i < k; ++i) {
        rows.push_back(GFVec::parse(f, lines[static_cast<std::size_t>(i) + 1]));
        if (rows.back().size() != static_cast<std::size_t>(n)) throw UsageError("row length does not match n");
    }
    return GeneratorMatrix(f, static_cast<std::size_t>(n), std::move(rows));
}

std::vector<std::uint8_t> GeneratorMatrix::column(std::size_t j) const {
    std::vector<std::uint8_t> c(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) c[i] = rows_[i][j];
    return c;
}

std::string GeneratorMatrix::to_text() const {
    std::string s = "q=" + std::to_string(field_.q()) + " n=" + std::to_string(n_) + " k=" + std::to_string(k()) + "\n";
    for (const auto& r : rows_) s += r.to_string() + "\n";
    return s;
}

std::size_t rank(Field field, std::size_t n, const std::vector<GFVec>& rows) {
    auto copy = rows;
    return eliminate(field, n, copy).size();
}

GeneratorMatrix rref(const GeneratorMatrix& g) {
    auto rows = g.rows();
    eliminate(g.field(), g.n(), rows);
    return GeneratorMatrix(g.field(), g.n(), std::move(rows));
}

SystematicForm systematize(const GeneratorMatrix& g) {
    auto rows = g.rows();
    const auto pivots = eliminate(g.field(), g.n(), rows);
    if (pivots.size() != g.k()) throw UsageError("generator matrix is rank deficient");
    std::vector<int> perm;
    perm.reserve(g.n());
    std::vector<bool> is_pivot(g.n(), false);
    for (auto p : pivots) {
        perm.push_back(static_cast<int>(p));
        is_pivot[p] = true;
    }
    for (std::size_t j = 0; j < g.n(); ++j)
        if (!is_pivot[j]) perm.push_back(static_cast<int>(j));
    std::vector<GFVec> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        GFVec v(g.field(), g.n());
        for (std::size_t i = 0; i < g.n(); ++i) v.set(i, r[static_cast<std::size_t>(perm[i])]);
        out.push_back(std::move(v));
    }
    return {GeneratorMatrix(g.field(), g.n(), std::move(out)), std::move(perm)};
}

bool is_systematic(const GeneratorMatrix& g) {
    for (std::size_t i = 0; i < g.k(); ++i)
        for (std::size_t j = 0; j < g.k(); ++j)
            if (g.at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

Monomial Monomial::identity(std::size_t n) {
    Monomial m;
    m.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) m.perm[i] = static_cast<int>(i);
    m.scale.assign(n, 1);
    return m;
}

GFVec Monomial::apply(const GFVec& v) const {
    if (v.size() != perm.size()) throw UsageError("monomial size mismatch");
    GFVec out(v.field(), v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        out.set(static_cast<std::size_t>(perm[j]), v.field().mul(v[j], scale[j]));
    return out;
}

Monomial Monomial::then(const Monomial& next, const Field& f) const {
    Monomial m;
    m.perm.resize(perm.size());
    m.scale.resize(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j) {
        const auto mid = static_cast<std::size_t>(perm[j]);
        m.perm[j] = next.perm[mid];
        m.scale[j] = f.mul(scale[j], next.scale[mid]);
    }
    return m;
}

Monomial Monomial::inverse(const Field& f) const {
    Monomial m;
    m.perm.resize(perm.size());
    m.scale.resize(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j) {
        const auto t = static_cast<std::size_t>(perm[j]);
        m.perm[t] = static_cast<int>(j);
        m.scale[t] = f.inv(scale[j]);
    }
    return m;
}

bool Monomial::is_identity() const {
    for (std::size_t j = 0; j < perm.size(); ++j)
        if (perm[j] != static_cast<int>(j) || scale[j] != 1) return false;
    return true;
}

LinearCode::LinearCode(GeneratorMatrix gen) : state_(std::make_shared<State>(std::move(gen))) {}

std::uint64_t LinearCode::size() const {
    std::uint64_t s = 1;
    for (std::size_t i = 0; i < k(); ++i) {
        s *= static_cast<std::uint64_t>(q());
        if (s > kEnumerationBudget)
            throw ResourceError("code has more than " + std::to_string(kEnumerationBudget) +
                                " codewords (enumeration budget)");
    }
    return s;
}

void LinearCode::for_each_codeword(const std::function<void(const GFVec&)>& fn) const {
    const std::uint64_t total = size();
    const auto& g = generator();
    const auto kk = g.k();
    // carry[i] = row_i + sum_{j<i} row_j: the net change when digits 0..i-1
    // wrap from q-1 to 0 and digit i increments.
    std::vector<GFVec> carry;
    carry.reserve(kk);
    GFVec prefix(field(), n());
    for (std::size_t i = 0; i < kk; ++i) {
        carry.push_back(add_scaled(g.row(i), prefix, 1));
        prefix.add_inplace(g.row(i));
    }
    std::vector<int> u(kk, 0);
    GFVec word(field(), n());
    fn(word);
    for (std::uint64_t step = 1; step < total; ++step) {
        std::size_t i = 0;
        while (u[i] == q() - 1) {
            u[i] = 0;
            ++i;
        }
        ++u[i];
        word.add_inplace(carry[i]);
        fn(word);
    }
}

std::vector<GFVec> LinearCode::codewords() const {
    std::vector<GFVec> out;
    out.reserve(size());
    for_each_codeword([&](const GFVec& c) { out.push_back(c); });
    return out;
}

void LinearCode::fill_cache() const {
    std::call_once(state_->once, [this] {
        WeightEnumerator a(n() + 1, 0);
        for_each_codeword([&](const GFVec& c) { ++a[static_cast<std::size_t>(weight(c))]; });
        int d = 0;
        for (std::size_t i = 1; i < a.size(); ++i)
            if (a[i] != 0) {
                d = static_cast<int>(i);
                break;
            }
        state_->enumerator = std::move(a);
        state_->min_weight = d;
    });
}

int LinearCode::min_weight() const {
    fill_cache();
    return state_->min_weight;
}

const WeightEnumerator& LinearCode::weight_enumerator() const {
    fill_cache();
    return state_->enumerator;
}

int LinearCode::min_weight_naive() const {
    const std::uint64_t total = size();
    const auto& g = generator();
    int best = 0;
    for (std::uint64_t idx = 1; idx < total; ++idx) {
        GFVec c(field(), n());
        std::uint64_t rest = idx;
        for (std::size_t i = 0; i < k(); ++i) {
            c.add_scaled_inplace(g.row(i), static_cast<std::uint8_t>(rest % static_cast<std::uint64_t>(q())));
            rest /= static_cast<std::uint64_t>(q());
        }
        const int w = weight(c);
        if (best == 0 || w < best) best = w;
    }
    return best;
}

bool LinearCode::contains(const GFVec& v) const {
    auto rows = generator().rows();
    rows.push_back(v);
    return rank(field(), n(), rows) == k();
}

LinearCode LinearCode::transformed(const Monomial& p) const {
    std::vector<GFVec> rows;
    rows.reserve(k());
    for (const auto& r : generator().rows()) rows.push_back(p.apply(r));
    return LinearCode(GeneratorMatrix(field(), n(), std::move(rows)));
}

LinearCode shorten(const LinearCode& c, std::size_t j) {
    if (j >= c.n()) throw UsageError("shorten: coordinate out of range");
    const auto& f = c.field();
    auto rows = c.generator().rows();
    std::size_t pivot = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i][j] != 0) {
            pivot = i;
            break;
        }
    if (pivot != rows.size()) {
        const auto inv = f.inv(rows[pivot][j]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == pivot || rows[i][j] == 0) continue;
            rows[i].add_scaled_inplace(rows[pivot], f.neg(f.mul(rows[i][j], inv)));
        }
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(pivot));
    }
    std::vector<GFVec> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        GFVec v(f, c.n() - 1);
        for (std::size_t i = 0, o = 0; i < c.n(); ++i)
            if (i != j) v.set(o++, r[i]);
        out.push_back(std::move(v));
    }
    return LinearCode(GeneratorMatrix(f, c.n() - 1, std::move(out)));
}

LinearCode puncture(const LinearCode& c, std::size_t j) {
    if (j >= c.n()) throw UsageError("puncture: coordinate out of range");
    const int d = c.min_weight();
    if (d < 2) throw UsageError("puncture: requires minimum weight >= 2");
    std::vector<GFVec> out;
    for (const auto& r : c.generator().rows()) {
        GFVec v(c.field(), c.n() - 1);
        for (std::size_t i = 0, o = 0; i < c.n(); ++i)
            if (i != j) v.set(o++, r[i]);
        out.push_back(std::move(v));
    }
    if (rank(c.field(), c.n() - 1, out) != c.k()) throw InvariantError("puncture: dimension dropped");
    LinearCode p(GeneratorMatrix(c.field(), c.n() - 1, std::move(out)));
    const int dp = p.min_weight();
    if (dp != d && dp != d - 1) throw InvariantError("puncture: minimum weight outside {d-1, d}");
    return p;
}

GeneratorMatrix insert_column(const GeneratorMatrix& g, std::size_t j, const std::vector<std::uint8_t>& column) {
    if (j > g.n() || column.size() != g.k()) throw UsageError("insert_column: bad position or column height");
    std::vector<GFVec> out;
    for (std::size_t r = 0; r < g.k(); ++r) {
        GFVec v(g.field(), g.n() + 1);
        for (std::size_t i = 0, o = 0; i <= g.n(); ++i) v.set(i, i == j ? column[r] : g.at(r, o++));
        out.push_back(std::move(v));
    }
    return GeneratorMatrix(g.field(), g.n() + 1, std::move(out));
}

std::size_t count_distinct_enumerators(const std::vector<LinearCode>& codes) {
    std::set<WeightEnumerator> seen;
    for (const auto& c : codes) seen.insert(c.weight_enumerator());
    return seen.size();
}

}  // namespace qcode
