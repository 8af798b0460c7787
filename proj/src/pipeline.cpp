#include "qcode/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "qcode/canon.hpp"
#include "qcode/covrad.hpp"
#include "qcode/errors.hpp"
#include "qcode/extend.hpp"

namespace qcode {

// ---------------------------------------------------------------------------
// Small classifications

CodeDB classify_k2(int q, int n, int d) {
    Field f(q);
    if (n < 2) throw UsageError("classify-k2 needs n >= 2");
    // Points of the projective line: (1, a) for a in F_q, then (0, 1).
    const int points = q + 1;
    std::vector<std::pair<std::uint8_t, std::uint8_t>> pt;
    for (int a = 0; a < q; ++a) pt.emplace_back(1, static_cast<std::uint8_t>(a));
    pt.emplace_back(0, 1);
    auto index_of = [&](std::uint8_t x, std::uint8_t y) {
        if (x != 0) return static_cast<int>(f.mul(y, f.inv(x)));
        return q;
    };
    std::set<std::vector<int>> group;
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < q; ++c)
                for (int e = 0; e < q; ++e) {
                    if ((a * e - b * c) % q == 0) continue;
                    std::vector<int> perm(static_cast<std::size_t>(points));
                    for (int p = 0; p < points; ++p) {
                        const auto [x, y] = pt[static_cast<std::size_t>(p)];
                        const auto nx = f.add(f.mul(static_cast<std::uint8_t>(a), x), f.mul(static_cast<std::uint8_t>(b), y));
                        const auto ny = f.add(f.mul(static_cast<std::uint8_t>(c), x), f.mul(static_cast<std::uint8_t>(e), y));
                        perm[static_cast<std::size_t>(p)] = index_of(nx, ny);
                    }
                    group.insert(std::move(perm));
                }

    std::vector<LinearCode> reps;
    std::vector<int> m(static_cast<std::size_t>(points), 0);
    std::function<void(int, int)> rec = [&](int p, int left) {
        if (p == points) {
            // left = number of zero columns
            const int support = static_cast<int>(std::count_if(m.begin(), m.end(), [](int x) { return x > 0; }));
            if (support < 2) return;
            if (n - left - *std::max_element(m.begin(), m.end()) != d) return;
            for (const auto& g : group) {
                std::vector<int> img(static_cast<std::size_t>(points));
                for (int i = 0; i < points; ++i) img[static_cast<std::size_t>(g[static_cast<std::size_t>(i)])] = m[static_cast<std::size_t>(i)];
                if (img > m) return;  // not the orbit maximum
            }
            std::vector<std::uint8_t> r0, r1;
            for (int i = 0; i < points; ++i)
                for (int c = 0; c < m[static_cast<std::size_t>(i)]; ++c) {
                    r0.push_back(pt[static_cast<std::size_t>(i)].first);
                    r1.push_back(pt[static_cast<std::size_t>(i)].second);
                }
            r0.resize(static_cast<std::size_t>(n), 0);
            r1.resize(static_cast<std::size_t>(n), 0);
            reps.emplace_back(GeneratorMatrix(f, static_cast<std::size_t>(n), {GFVec::from_digits(f, r0), GFVec::from_digits(f, r1)}));
            return;
        }
        for (int c = 0; c <= left; ++c) {
            m[static_cast<std::size_t>(p)] = c;
            rec(p + 1, left - c);
        }
        m[static_cast<std::size_t>(p)] = 0;
    };
    rec(0, n);
    auto db = make_db({q, n, 2, d}, reps);
    if (db.codes.size() != reps.size())
        throw InvariantError("projective orbits and certificates disagree: " + std::to_string(reps.size()) + " vs " +
                             std::to_string(db.codes.size()));
    return db;
}

CodeDB classify_k1(int q, int n, int d) {
    Field f(q);
    if (d < 1 || d > n) return CodeDB{{q, n, 1, d}, {}};
    std::vector<std::uint8_t> row(static_cast<std::size_t>(n), 0);
    std::fill(row.begin(), row.begin() + d, 1);
    return make_db({q, n, 1, d}, {LinearCode(GeneratorMatrix(f, static_cast<std::size_t>(n), {GFVec::from_digits(f, row)}))});
}

std::vector<LinearCode> extend_all(const std::vector<LinearCode>& parents, int d) {
    std::vector<LinearCode> children;
    for (const auto& p : parents)
        for_each_child(ExtensionTask(p, d), {}, [&](const LinearCode& c) {
            if (c.min_weight() == d) children.push_back(c);
        });
    return dedup(children);
}

// ---------------------------------------------------------------------------
// Journal

Journal::Journal(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
}

void Journal::append(const std::string& record) {
    if (record.find('\n') != std::string::npos) throw UsageError("journal records are single lines");
    std::lock_guard lock(mu_);
    const int fd = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd < 0) throw UsageError("cannot open journal " + path_.string() + ": " + std::strerror(errno));
    const std::string line = record + "\n";
    const auto written = ::write(fd, line.data(), line.size());
    ::close(fd);
    if (written != static_cast<ssize_t>(line.size())) throw UsageError("short write to journal " + path_.string());
}

std::vector<std::string> Journal::records() const {
    std::vector<std::string> out;
    std::ifstream in(path_, std::ios::binary);
    if (!in) return out;
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto text = ss.str();
    std::size_t start = 0;
    while (true) {
        const auto end = text.find('\n', start);
        if (end == std::string::npos) break;  // a torn final record is ignored
        out.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

namespace {

std::map<std::string, std::string> record_fields(const std::string& rec) {
    std::map<std::string, std::string> out;
    std::istringstream in(rec);
    std::string tok;
    in >> tok;
    out["type"] = tok;
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        out[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return out;
}

std::string digits_of(std::span<const std::uint8_t> v) {
    std::string s;
    for (auto x : v) s.push_back(static_cast<char>('0' + x));
    return s;
}

std::string code_key(const GeneratorMatrix& g) {
    std::string s;
    for (const auto& r : g.rows()) s += r.to_string();
    return s;
}

GeneratorMatrix from_key(const CodeParams& p, const std::string& key) {
    if (key.size() != static_cast<std::size_t>(p.n * p.k)) throw UsageError("journal code has the wrong size");
    std::vector<std::string> rows;
    for (int i = 0; i < p.k; ++i) rows.push_back(key.substr(static_cast<std::size_t>(i * p.n), static_cast<std::size_t>(p.n)));
    return GeneratorMatrix::from_rows(Field(p.q), rows);
}

template <class F>
void parallel_for(std::size_t count, int threads, F&& fn) {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        while (!failed) {
            const auto i = next++;
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    const auto n = static_cast<std::size_t>(std::max(1, threads));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

BoundsConfig load_bounds(const StepOptions& opt) {
    if (opt.bounds.empty()) return {};
    return BoundsConfig::load(opt.bounds);
}

std::string db_hash(const CodeDB& db) { return hex64(fnv1a64(db.to_text())); }

CodeDB seal_codes(const CodeParams& target, const std::set<std::string>& keys) {
    std::vector<std::pair<CanonicalCert, GeneratorMatrix>> certified;
    certified.reserve(keys.size());
    for (const auto& key : keys) {
        auto g = from_key(target, key);
        auto r = canonize(LinearCode(g));
        if (!(r.canonical_form == g)) throw InvariantError("journaled code is not in canonical form");
        certified.emplace_back(std::move(r.cert), std::move(g));
    }
    std::sort(certified.begin(), certified.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < certified.size(); ++i)
        if (certified[i - 1].first == certified[i].first)
            throw InvariantError("two canonical forms share a certificate");
    CodeDB db{target, {}};
    for (auto& [cert, g] : certified) db.codes.push_back(std::move(g));
    return db;
}

}  // namespace

std::string StepReport::to_text() const {
    std::ostringstream o;
    o << target.bracket() << ": " << parents << " parents, " << units_total << " shards (" << units_done_before
      << " journaled, " << units_run << " run), " << nodes << " search nodes, " << children << " children";
    if (higher_d) o << " (" << higher_d << " with larger minimum weight)";
    o << "\n";
    if (sealed && db) o << "sealed: " << db->codes.size() << " codes, " << enumerators << " weight enumerators, hash " << db_hash << "\n";
    else o << "not sealed: shards still missing\n";
    return o.str();
}

// ---------------------------------------------------------------------------
// Steps

std::vector<CodeDB> load_parents(const CodeParams& target, const StepOptions& opt) {
    if (target.k < 2 || target.n < 2) throw UsageError("extension target needs n, k >= 2");
    const auto cfg = load_bounds(opt);
    const int top = max_possible_d(cfg, target.n - 1, target.k - 1);
    std::vector<CodeDB> out;
    for (int dp = target.d; dp <= top; ++dp) {
        const CodeParams p{target.q, target.n - 1, target.k - 1, dp};
        const auto path = db_path(opt.db_dir, p);
        if (!std::filesystem::exists(path))
            throw UsageError("incomplete parents: " + path.string() + " is missing (parents of " + target.bracket() +
                             " range over d' = " + std::to_string(target.d) + ".." + std::to_string(top) + ")");
        out.push_back(CodeDB::load(path));
    }
    return out;
}

CodeDB replay_step(const CodeParams& target, const std::string& parents_hash, const Journal& journal) {
    std::set<std::string> keys;
    for (const auto& rec : journal.records()) {
        auto f = record_fields(rec);
        if (f["type"] != "shard" || f["step"] != target.tag() || f["parents"] != parents_hash) continue;
        std::istringstream codes(f["codes"]);
        for (std::string key; std::getline(codes, key, ',');)
            if (!key.empty()) keys.insert(key);
    }
    return seal_codes(target, keys);
}

StepReport run_step(const CodeParams& target, const StepOptions& opt) {
    if (opt.shards < 1 || opt.shard_index < 0 || opt.shard_index >= opt.shards) throw UsageError("bad shard selection");
    StepReport rep;
    rep.target = target;
    Journal journal(opt.journal_path());
    const auto parent_dbs = load_parents(target, opt);
    std::vector<LinearCode> parents;
    std::string concat;
    for (const auto& db : parent_dbs) {
        concat += db.to_text();
        for (const auto& g : db.codes) parents.emplace_back(g);
    }
    rep.parents = parents.size();
    rep.parents_hash = hex64(fnv1a64(concat));
    const auto tag = target.tag();
    const auto cfg = load_bounds(opt);
    const int child_top = max_possible_d(cfg, target.n, target.k);
    const auto out_path = db_path(opt.db_dir, target);

    auto finish = [&](CodeDB db) {
        rep.enumerators = count_distinct_enumerators(db.linear_codes());
        rep.db_hash = db_hash(db);
        rep.sealed = true;
        rep.db = std::move(db);
        return rep;
    };

    // Already sealed?
    for (const auto& rec : journal.records()) {
        auto f = record_fields(rec);
        if (f["type"] != "seal" || f["step"] != tag || f["parents"] != rep.parents_hash) continue;
        if (std::filesystem::exists(out_path)) {
            auto db = CodeDB::load(out_path);
            if (db_hash(db) == f["hash"]) return finish(std::move(db));
        }
        auto db = replay_step(target, rep.parents_hash, journal);
        if (db_hash(db) != f["hash"]) throw InvariantError("journal replay does not reproduce the sealed database");
        db.save(out_path);
        return finish(std::move(db));
    }

    struct Unit {
        std::size_t parent;
        std::vector<std::uint8_t> prefix;
    };
    std::vector<Unit> units;
    std::vector<ExtensionTask> tasks;
    for (std::size_t i = 0; i < parents.size(); ++i) {
        tasks.emplace_back(parents[i], target.d);
        for (auto& p : shard_prefixes(tasks.back(), opt.split_depth)) units.push_back({i, std::move(p)});
    }
    rep.units_total = units.size();

    auto done_units = [&] {
        std::set<std::pair<std::size_t, std::string>> done;
        for (const auto& rec : journal.records()) {
            auto f = record_fields(rec);
            if (f["type"] != "shard" || f["step"] != tag || f["parents"] != rep.parents_hash) continue;
            done.emplace(std::stoul(f["parent"]), f["prefix"]);
        }
        return done;
    };
    const auto done = done_units();
    std::vector<std::size_t> pending;
    for (std::size_t u = 0; u < units.size(); ++u) {
        if (done.count({units[u].parent, digits_of(units[u].prefix)})) {
            ++rep.units_done_before;
            continue;
        }
        if (static_cast<int>(u % static_cast<std::size_t>(opt.shards)) == opt.shard_index) pending.push_back(u);
    }

    std::mutex stats_mu;
    std::size_t finished = 0;
    parallel_for(pending.size(), opt.threads, [&](std::size_t i) {
        const auto& unit = units[pending[i]];
        std::set<std::string> keys;
        std::uint64_t higher = 0;
        auto st = for_each_child(tasks[unit.parent], unit.prefix, [&](const LinearCode& child) {
            const int w = child.min_weight();
            if (w > target.d) {
                if (w > child_top)
                    throw InvariantError("found a " + CodeParams{target.q, target.n, target.k, w}.bracket() +
                                         " code, which the known bounds exclude");
                ++higher;
                return;
            }
            keys.insert(code_key(canonize(child).canonical_form));
        });
        std::string codes;
        for (const auto& k : keys) codes += (codes.empty() ? "" : ",") + k;
        journal.append("shard step=" + tag + " parents=" + rep.parents_hash + " parent=" + std::to_string(unit.parent) +
                       " prefix=" + digits_of(unit.prefix) + " nodes=" + std::to_string(st.nodes) +
                       " children=" + std::to_string(st.children) + " codes=" + codes);
        std::lock_guard lock(stats_mu);
        rep.nodes += st.nodes;
        rep.children += st.children;
        rep.higher_d += higher;
        ++rep.units_run;
        ++finished;
        if (opt.progress && (finished % 100 == 0 || finished == pending.size()))
            opt.progress(tag + ": " + std::to_string(finished) + "/" + std::to_string(pending.size()) + " shards");
    });

    if (done_units().size() < units.size()) return rep;
    auto db = replay_step(target, rep.parents_hash, journal);
    db.save(out_path);
    journal.append("seal step=" + tag + " parents=" + rep.parents_hash + " count=" + std::to_string(db.codes.size()) +
                   " hash=" + db_hash(db));
    return finish(std::move(db));
}

// ---------------------------------------------------------------------------
// Covering radii, proof, table

std::vector<int> covering_radii(const CodeDB& db, const StepOptions& opt) {
    Journal journal(opt.journal_path());
    const auto tag = db.params.tag();
    const auto hash = db_hash(db);
    std::vector<int> radius(db.codes.size(), -1);
    for (const auto& rec : journal.records()) {
        auto f = record_fields(rec);
        if (f["type"] != "covrad" || f["db"] != tag || f["hash"] != hash) continue;
        const auto i = std::stoul(f["index"]);
        if (i < radius.size()) radius[i] = std::stoi(f["R"]);
    }
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < radius.size(); ++i)
        if (radius[i] < 0) todo.push_back(i);
    std::mutex mu;
    std::size_t finished = 0;
    parallel_for(todo.size(), opt.threads, [&](std::size_t j) {
        const auto i = todo[j];
        const int r = covering_radius(LinearCode(db.codes[i]));
        journal.append("covrad db=" + tag + " hash=" + hash + " index=" + std::to_string(i) + " R=" + std::to_string(r));
        std::lock_guard lock(mu);
        radius[i] = r;
        ++finished;
        if (opt.progress && (finished % 200 == 0 || finished == todo.size()))
            opt.progress(tag + " covering radii: " + std::to_string(finished) + "/" + std::to_string(todo.size()));
    });
    return radius;
}

std::string ProofReport::to_text() const {
    std::ostringstream o;
    const int t = target.d - 1;
    o << "target " << target.bracket() << "\n";
    o << "route (a) covering radius: " << parents << " parents of length " << target.n - 1 << ", " << parents_far
      << " with R >= " << t << "; radii";
    for (auto [r, c] : radius) o << " R=" << r << ":" << c;
    o << "\n";
    o << "route (b) extension: " << children << " codes\n";
    o << (holds ? "both routes agree: no " + target.bracket() + " code exists\n"
                : "nonexistence not established\n");
    return o.str();
}

ProofReport conclude_nonexistence(const CodeParams& target, const StepOptions& opt) {
    ProofReport rep;
    rep.target = target;
    for (const auto& db : load_parents(target, opt)) {
        auto v = verify_db(db);
        if (!v.ok()) throw InvariantError("parent database failed verification:\n" + v.to_text());
        for (int r : covering_radii(db, opt)) {
            ++rep.parents;
            ++rep.radius[r];
            if (r >= target.d - 1) ++rep.parents_far;
        }
    }
    auto step = run_step(target, opt);
    if (!step.sealed) throw UsageError("the extension step is not complete; run the remaining shards first");
    rep.children = step.db->codes.size();
    const bool route_a = rep.parents_far == 0;
    const bool route_b = rep.children == 0;
    if (route_a != route_b)
        throw InvariantError("routes disagree: " + std::to_string(rep.parents_far) + " parents have R >= " +
                             std::to_string(target.d - 1) + " but the extension found " +
                             std::to_string(rep.children) + " codes");
    rep.holds = route_a && route_b;
    return rep;
}

std::vector<TableRow> table_rows(const std::vector<CodeParams>& rows, int threshold, const StepOptions& opt) {
    std::vector<TableRow> out;
    for (const auto& p : rows) {
        TableRow row;
        row.params = p;
        const auto path = db_path(opt.db_dir, p);
        if (std::filesystem::exists(path)) {
            auto db = CodeDB::load(path);
            row.present = true;
            row.count = db.codes.size();
            row.enumerators = count_distinct_enumerators(db.linear_codes());
            for (int r : covering_radii(db, opt)) {
                if (r >= threshold) ++row.at_least;
                if (r == threshold - 1) ++row.exactly;
            }
        }
        out.push_back(row);
    }
    return out;
}

std::string format_table(const std::vector<TableRow>& rows, int threshold) {
    std::ostringstream o;
    auto cell = [&](const std::string& s, std::size_t w) { o << s << std::string(s.size() < w ? w - s.size() : 1, ' '); };
    cell("Parameters", 14);
    cell("#", 7);
    cell("#_W", 7);
    cell("#_>=" + std::to_string(threshold), 9);
    o << "#_" << threshold - 1 << "\n";
    for (const auto& r : rows) {
        cell(r.params.bracket(), 14);
        if (!r.present) {
            o << "missing\n";
            continue;
        }
        cell(std::to_string(r.count), 7);
        if (r.count == 0) {
            cell("--", 7);
            cell("--", 9);
            o << "--\n";
            continue;
        }
        cell(std::to_string(r.enumerators), 7);
        cell(std::to_string(r.at_least), 9);
        o << r.exactly << "\n";
    }
    return o.str();
}

}  // namespace qcode
