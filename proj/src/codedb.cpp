#include "qcode/codedb.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "qcode/errors.hpp"

namespace qcode {

std::string CodeParams::tag() const {
    return "q" + std::to_string(q) + "_n" + std::to_string(n) + "_k" + std::to_string(k) + "_d" + std::to_string(d);
}

std::string CodeParams::bracket() const {
    return "[" + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(d) + "]_" + std::to_string(q);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, x >>= 4) s[static_cast<std::size_t>(i)] = kDigits[x & 0xF];
    return s;
}

std::string CodeDB::to_text() const {
    std::string out = "#qcodedb v1\n";
    out += "q=" + std::to_string(params.q) + " n=" + std::to_string(params.n) + " k=" + std::to_string(params.k) +
           " d=" + std::to_string(params.d) + " count=" + std::to_string(codes.size()) + "\n";
    for (const auto& g : codes) {
        out += "\n";
        for (const auto& r : g.rows()) out += r.to_string() + "\n";
    }
    return out;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

std::optional<int> field_value(std::string_view token, std::string_view key) {
    if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key || token[key.size()] != '=')
        return std::nullopt;
    int v = 0;
    auto s = token.substr(key.size() + 1);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

struct RawDB {
    CodeParams params;
    int count = 0;
    std::vector<std::vector<std::string>> blocks;
};

RawDB parse_raw(std::string_view text) {
    auto lines = split_lines(text);
    if (lines.size() < 2 || lines[0] != "#qcodedb v1") throw UsageError("not a qcodedb v1 file");
    std::istringstream hs{std::string(lines[1])};
    std::string tok[5];
    for (auto& t : tok) hs >> t;
    std::string extra;
    if (hs >> extra) throw UsageError("trailing fields in database header");
    auto q = field_value(tok[0], "q");
    auto n = field_value(tok[1], "n");
    auto k = field_value(tok[2], "k");
    auto d = field_value(tok[3], "d");
    auto c = field_value(tok[4], "count");
    if (!q || !n || !k || !d || !c || *n < 0 || *k < 0 || *c < 0) throw UsageError("malformed database header");
    RawDB raw{{*q, *n, *k, *d}, *c, {}};
    std::vector<std::string> cur;
    bool blank_seen = false;
    for (std::size_t i = 2; i < lines.size(); ++i) {
        if (!lines[i].empty() && lines[i].back() == '\r') throw UsageError("CR line endings are not allowed");
        if (lines[i].empty()) {
            if (!cur.empty()) raw.blocks.push_back(std::move(cur));
            cur.clear();
            blank_seen = true;
            continue;
        }
        if (!blank_seen) throw UsageError("missing blank line before the first code");
        cur.emplace_back(lines[i]);
    }
    if (!cur.empty()) raw.blocks.push_back(std::move(cur));
    return raw;
}

}  // namespace

CodeDB CodeDB::parse(std::string_view text) {
    auto raw = parse_raw(text);
    Field f(raw.params.q);
    if (static_cast<std::size_t>(raw.count) != raw.blocks.size())
        throw UsageError("header count " + std::to_string(raw.count) + " but " + std::to_string(raw.blocks.size()) +
                         " codes");
    CodeDB db{raw.params, {}};
    for (std::size_t i = 0; i < raw.blocks.size(); ++i) {
        const auto& rows = raw.blocks[i];
        if (rows.size() != static_cast<std::size_t>(raw.params.k))
            throw UsageError("code " + std::to_string(i) + " has " + std::to_string(rows.size()) + " rows");
        for (const auto& r : rows)
            if (r.size() != static_cast<std::size_t>(raw.params.n))
                throw UsageError("code " + std::to_string(i) + " has a row of length " + std::to_string(r.size()));
        auto g = GeneratorMatrix::from_rows(f, rows);
        LinearCode c(g);
        if (c.min_weight() != raw.params.d)
            throw UsageError("code " + std::to_string(i) + " has minimum weight " + std::to_string(c.min_weight()));
        db.codes.push_back(std::move(g));
    }
    return db;
}

CodeDB CodeDB::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open database " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void CodeDB::save(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot write " + tmp.string());
        out << to_text();
        if (!out.flush()) throw UsageError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::vector<LinearCode> CodeDB::linear_codes() const {
    std::vector<LinearCode> out;
    out.reserve(codes.size());
    for (const auto& g : codes) out.emplace_back(g);
    return out;
}

std::filesystem::path db_path(const std::filesystem::path& dir, const CodeParams& p) { return dir / (p.tag() + ".qdb"); }

CodeDB make_db(const CodeParams& p, const std::vector<LinearCode>& codes) {
    CodeDB db{p, {}};
    for (const auto& c : codes)
        if (c.q() != p.q || c.n() != static_cast<std::size_t>(p.n) || c.k() != static_cast<std::size_t>(p.k) ||
            c.min_weight() != p.d)
            throw InvariantError("code does not have parameters " + p.bracket());
    for (auto& cc : dedup_certified(codes)) db.codes.push_back(cc.code.generator());
    return db;
}

std::string VerifyReport::to_text() const {
    std::string out = params.bracket() + ": " + std::to_string(codes) + " codes, ";
    if (ok()) return out + "ok\n";
    out += std::to_string(violations.size()) + " violations\n";
    for (const auto& v : violations) {
        if (v.index == static_cast<std::size_t>(-1))
            out += "  file: " + v.what + "\n";
        else
            out += "  code " + std::to_string(v.index) + ": " + v.what + "\n";
    }
    return out;
}

VerifyReport verify_db_text(std::string_view text) {
    constexpr auto kFile = static_cast<std::size_t>(-1);
    VerifyReport rep;
    RawDB raw;
    try {
        raw = parse_raw(text);
    } catch (const Error& e) {
        rep.violations.push_back({kFile, e.what()});
        return rep;
    }
    rep.params = raw.params;
    rep.codes = raw.blocks.size();
    if (static_cast<std::size_t>(raw.count) != raw.blocks.size())
        rep.violations.push_back({kFile, "header count " + std::to_string(raw.count) + " but " +
                                             std::to_string(raw.blocks.size()) + " codes"});
    std::optional<Field> f;
    try {
        f.emplace(raw.params.q);
    } catch (const Error& e) {
        rep.violations.push_back({kFile, e.what()});
        return rep;
    }
    std::map<CanonicalCert, std::size_t> seen;
    std::optional<CanonicalCert> prev;
    for (std::size_t i = 0; i < raw.blocks.size(); ++i) {
        const auto& rows = raw.blocks[i];
        if (rows.size() != static_cast<std::size_t>(raw.params.k)) {
            rep.violations.push_back({i, "has " + std::to_string(rows.size()) + " rows, expected k=" +
                                             std::to_string(raw.params.k)});
            continue;
        }
        bool bad = false;
        for (const auto& r : rows)
            if (r.size() != static_cast<std::size_t>(raw.params.n)) {
                rep.violations.push_back({i, "row of length " + std::to_string(r.size()) + ", expected n=" +
                                                 std::to_string(raw.params.n)});
                bad = true;
                break;
            }
        if (bad) continue;
        std::optional<LinearCode> code;
        try {
            code.emplace(GeneratorMatrix::from_rows(*f, rows));
        } catch (const Error& e) {
            rep.violations.push_back({i, e.what()});
            continue;
        }
        if (code->min_weight() != raw.params.d) {
            rep.violations.push_back({i, "minimum weight " + std::to_string(code->min_weight()) + ", expected d=" +
                                             std::to_string(raw.params.d)});
            continue;
        }
        auto cert = canonize(*code).cert;
        if (auto it = seen.find(cert); it != seen.end()) {
            rep.violations.push_back({i, "equivalent to code " + std::to_string(it->second)});
        } else {
            seen.emplace(cert, i);
        }
        if (prev && !(*prev < cert)) rep.violations.push_back({i, "out of certificate order"});
        prev = std::move(cert);
    }
    return rep;
}

VerifyReport verify_db(const CodeDB& db) { return verify_db_text(db.to_text()); }

}  // namespace qcode
