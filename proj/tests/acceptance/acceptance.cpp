// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Criteria 2 and 5 recompute their steps from scratch and
// take the better part of an hour on one core; criterion 4 checks the
// stored [20,4,14] database and runs a one-parent smoke extension.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "qcode/bounds.hpp"
#include "qcode/canon.hpp"
#include "qcode/codedb.hpp"
#include "qcode/covrad.hpp"
#include "qcode/errors.hpp"
#include "qcode/extend.hpp"
#include "qcode/pipeline.hpp"
#include "support/oracles.hpp"

using namespace qcode;
namespace fs = std::filesystem;

namespace {

constexpr double kK2Seconds = 60.0;      // criterion 1 wall-clock limit
constexpr double kStep3Seconds = 7200.0; // criterion 2 wall-clock limit
constexpr int kMonomialTrials = 10000;
constexpr std::size_t kMaxPrunedRedundancy = 8;
constexpr std::size_t kMaxSweepRedundancy = 6;

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Context {
    fs::path data;
    fs::path bounds;
    fs::path work;
    int threads = 1;
    std::optional<CodeDB> db19;  // from criterion 2 when it ran
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path fresh_dir(const Context& ctx, const std::string& name) {
    auto p = ctx.work / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

StepOptions step_options(const Context& ctx, const fs::path& dir) {
    StepOptions opt;
    opt.db_dir = dir;
    opt.bounds = ctx.bounds;
    opt.threads = ctx.threads;
    return opt;
}

void seed_k2(const fs::path& dir, int n, int d_lo, int d_hi) {
    for (int d = d_lo; d <= d_hi; ++d) {
        auto db = classify_k2(5, n, d);
        db.save(db_path(dir, db.params));
    }
}

// 1. k = 2 classification.
Outcome k2_counts(Context&) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto d15 = classify_k2(5, 18, 15);
    const auto d14 = classify_k2(5, 18, 14);
    const auto d16 = classify_k2(5, 18, 16);
    const double secs = seconds_since(t0);
    const auto w14 = count_distinct_enumerators(d14.linear_codes());
    const auto w15 = count_distinct_enumerators(d15.linear_codes());
    Outcome o;
    o.pass = d15.codes.size() == 1 && d14.codes.size() == 10 && d16.codes.empty() && secs < kK2Seconds &&
             w14 == 9 && w15 == 1 && verify_db(d15).ok() && verify_db(d14).ok();
    std::ostringstream s;
    s << "[18,2,15]=" << d15.codes.size() << " [18,2,14]=" << d14.codes.size() << " [18,2,16]=" << d16.codes.size()
      << " (" << w15 << " and " << w14 << " enumerators) in " << secs << " s";
    o.detail = s.str();
    return o;
}

// 2. [19,3,14] step from the eleven k = 2 parents.
Outcome step19(Context& ctx) {
    const auto dir = fresh_dir(ctx, "step19");
    seed_k2(dir, 18, 14, 15);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = run_step({5, 19, 3, 14}, step_options(ctx, dir));
    const double secs = seconds_since(t0);
    Outcome o;
    if (!rep.sealed) return {false, "step did not seal"};
    ctx.db19 = *rep.db;
    const auto stored = ctx.data / "db" / "q5_n19_k3_d14.qdb";
    const bool same = fs::exists(stored) && slurp(stored) == rep.db->to_text();
    o.pass = rep.parents == 11 && rep.db->codes.size() == 572 && rep.enumerators == 90 && secs < kStep3Seconds;
    std::ostringstream s;
    s << rep.db->codes.size() << " codes, " << rep.enumerators << " enumerators from " << rep.parents << " parents, "
      << rep.nodes << " search nodes, " << secs << " s; stored copy " << (same ? "identical" : "differs or missing");
    o.detail = s.str();
    return o;
}

// 3. Every [18,2,14/15] and [19,3,14] code has covering radius >= 13.
Outcome radius13(Context& ctx) {
    std::vector<LinearCode> codes;
    for (int d : {14, 15})
        for (const auto& g : classify_k2(5, 18, d).codes) codes.emplace_back(g);
    const std::size_t k2 = codes.size();
    const auto db19 = ctx.db19 ? *ctx.db19 : CodeDB::load(ctx.data / "db" / "q5_n19_k3_d14.qdb");
    for (const auto& g : db19.codes) codes.emplace_back(g);
    std::size_t far = 0;
    for (const auto& c : codes) far += covers_at_least(c, 13);
    Outcome o;
    o.pass = k2 == 11 && db19.codes.size() == 572 && far == codes.size();
    o.detail = std::to_string(far) + " of " + std::to_string(codes.size()) + " codes (11 + 572) have R >= 13";
    return o;
}

// 4. Stored [20,4,14] database plus a one-parent smoke extension.
Outcome step20(Context& ctx) {
    const auto path = ctx.data / "db" / "q5_n20_k4_d14.qdb";
    if (!fs::exists(path)) return {false, "missing " + path.string()};
    const auto db = CodeDB::load(path);
    const auto v = verify_db(db);
    const auto enums = count_distinct_enumerators(db.linear_codes());
    std::set<CanonicalCert> certs;
    for (const auto& g : db.codes) certs.insert(canonize(LinearCode(g)).cert);

    const auto db19 = ctx.db19 ? *ctx.db19 : CodeDB::load(ctx.data / "db" / "q5_n19_k3_d14.qdb");
    const ExtensionTask task(LinearCode(db19.codes.front()), 14);
    std::size_t children = 0, exact = 0, found = 0;
    bool sound = true;
    std::set<CanonicalCert> seen;
    for (const auto& prefix : shard_prefixes(task)) {
        for_each_child(task, prefix, [&](const LinearCode& child) {
            ++children;
            const int w = child.min_weight();
            if (w != 14) {
                sound = false;
                return;
            }
            ++exact;
            const auto cert = canonize(child).cert;
            sound = sound && equivalent(shorten(child, task.parent.k()), task.parent);
            found += certs.count(cert);
            seen.insert(cert);
        });
    }
    Outcome o;
    o.pass = v.ok() && db.codes.size() == 3564 && enums == 727 && sound && exact == children && found == exact;
    std::ostringstream s;
    s << db.codes.size() << " codes, " << enums << " enumerators, verify " << (v.ok() ? "ok" : "FAILED")
      << "; smoke: parent 0 gives " << children << " children (" << seen.size() << " classes), " << found
      << " found in the database";
    o.detail = s.str();
    return o;
}

// 5. R = 12 for every [20,4,14] code, and no [21,5,14] code.
Outcome prop2(Context& ctx) {
    const auto path = ctx.data / "db" / "q5_n20_k4_d14.qdb";
    if (!fs::exists(path)) return {false, "missing " + path.string()};
    const auto dir = fresh_dir(ctx, "step21");
    fs::copy_file(path, dir / path.filename());
    const auto opt = step_options(ctx, dir);
    const auto t0 = std::chrono::steady_clock::now();
    const auto proof = conclude_nonexistence({5, 21, 5, 14}, opt);
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = proof.holds && proof.parents == 3564 && proof.parents_far == 0 && proof.children == 0 &&
             proof.radius.size() == 1 && proof.radius.count(12) == 1;
    auto text = proof.to_text();
    for (auto& ch : text)
        if (ch == '\n') ch = ';';
    o.detail = text + " " + std::to_string(static_cast<long>(secs)) + " s";
    return o;
}

// 6. Bounds propagation.
Outcome bounds_families(Context& ctx) {
    auto cfg = BoundsConfig::load(ctx.bounds);
    BoundsFact ax;
    ax.kind = BoundsFact::Kind::not_exists;
    ax.params = {5, 21, 5, 14};
    ax.prior = false;
    ax.source = "classification";
    ax.rule = "axiom";
    cfg.axioms.push_back(ax);
    const auto b = derive_bounds(cfg.axioms, cfg.window);

    std::set<std::tuple<int, int, int>> want_cons, got_cons, want_d, got_d, want_n, got_n;
    for (int t = 0; t <= 4; ++t) {
        want_cons.emplace(22 + t, 5 + t, 15);
        want_d.emplace(21 + t, 5 + t, 13);
        want_n.emplace(22 + t, 5 + t, 14);
    }
    for (int t = 0; t <= 1; ++t) {
        want_cons.emplace(87 + t, 6, 66 + t);
        want_cons.emplace(88 + t, 7, 66 + t);
        want_cons.emplace(89 + t, 8, 66 + t);
    }
    for (auto i : b.consequences) got_cons.emplace(b.facts[i].params.n, b.facts[i].params.k, b.facts[i].params.d);
    for (const auto& d : b.determined_d) got_d.emplace(d.n, d.k, d.d);
    for (const auto& d : b.determined_n) got_n.emplace(d.n, d.k, d.d);
    Outcome o;
    o.pass = got_cons == want_cons && got_d == want_d && got_n == want_n;
    o.detail = std::to_string(got_cons.size()) + " consequence cells, " + std::to_string(got_d.size()) +
               " values of d_5(n,k), " + std::to_string(got_n.size()) + " values of n_5(k,d)";
    return o;
}

// 7. Property suites.
struct Property {
    std::string name;
    bool pass;
    std::string detail;
};

Property cert_invariance() {
    const Field f(5);
    std::mt19937_64 rng(101);
    int bad = 0, trials = 0;
    while (trials < kMonomialTrials) {
        const auto n = 3 + rng() % 14;
        const auto k = 1 + rng() % std::min<std::size_t>(4, n - 1);
        const auto c = testing::random_code(f, n, k, rng);
        const auto base = canonize(c);
        for (int rep = 0; rep < 20 && trials < kMonomialTrials; ++rep, ++trials) {
            const auto r = canonize(c.transformed(testing::random_monomial(n, 5, rng)));
            bad += r.cert != base.cert || r.canonical_form != base.canonical_form;
        }
    }
    return {"cert invariance", bad == 0, std::to_string(trials) + " transforms, " + std::to_string(bad) + " mismatches"};
}

// All 2-dimensional subspaces of F_5^6, classes by union-find over
// adjacent transpositions and one coordinate scaling.
Property cert_soundness() {
    const Field f(5);
    constexpr std::size_t n = 6;
    std::vector<GeneratorMatrix> spaces;
    auto key = [](const GeneratorMatrix& g) {
        std::uint64_t x = 0;
        for (const auto& r : g.rows())
            for (std::size_t j = 0; j < r.size(); ++j) x = x * 5 + r[j];
        return x;
    };
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    for (std::size_t p0 = 0; p0 < n; ++p0)
        for (std::size_t p1 = p0 + 1; p1 < n; ++p1) {
            std::vector<std::size_t> free0, free1;
            for (std::size_t j = p0 + 1; j < n; ++j)
                if (j != p1) free0.push_back(j);
            for (std::size_t j = p1 + 1; j < n; ++j) free1.push_back(j);
            testing::for_each_vector(5, free0.size() + free1.size(), [&](const std::vector<std::uint8_t>& a) {
                std::vector<std::uint8_t> r0(n, 0), r1(n, 0);
                r0[p0] = 1;
                r1[p1] = 1;
                for (std::size_t i = 0; i < free0.size(); ++i) r0[free0[i]] = a[i];
                for (std::size_t i = 0; i < free1.size(); ++i) r1[free1[i]] = a[free0.size() + i];
                spaces.emplace_back(f, n, std::vector<GFVec>{GFVec::from_digits(f, r0), GFVec::from_digits(f, r1)});
                index.emplace(key(spaces.back()), static_cast<std::uint32_t>(spaces.size() - 1));
            });
        }
    std::vector<std::uint32_t> parent(spaces.size());
    std::iota(parent.begin(), parent.end(), 0U);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<Monomial> gens;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        auto m = Monomial::identity(n);
        std::swap(m.perm[j], m.perm[j + 1]);
        gens.push_back(m);
    }
    auto s = Monomial::identity(n);
    s.scale[0] = f.primitive_root();
    gens.push_back(s);
    for (std::uint32_t i = 0; i < spaces.size(); ++i)
        for (const auto& m : gens) {
            std::vector<GFVec> rows;
            for (const auto& r : spaces[i].rows()) rows.push_back(m.apply(r));
            parent[find(i)] = find(index.at(key(rref(GeneratorMatrix(f, n, rows)))));
        }
    std::map<std::uint32_t, CanonicalCert> cert_of_class;
    std::map<CanonicalCert, std::uint32_t> class_of_cert;
    std::size_t bad = 0;
    for (std::uint32_t i = 0; i < spaces.size(); ++i) {
        auto cert = canonize(LinearCode(spaces[i])).cert;
        const auto root = find(i);
        bad += cert_of_class.emplace(root, cert).first->second != cert;
        bad += class_of_cert.emplace(std::move(cert), root).first->second != root;
    }
    return {"cert soundness [6,2]_5", bad == 0 && spaces.size() == 508431,
            std::to_string(spaces.size()) + " subspaces, " + std::to_string(cert_of_class.size()) + " classes, " +
                std::to_string(bad) + " conflicts"};
}

Property pruned_vs_naive() {
    const Field f(5);
    std::mt19937_64 rng(103);
    std::size_t cases = 0, bad = 0;
    for (std::size_t m = 1; m <= kMaxPrunedRedundancy; ++m) {
        const int per_m = m <= 6 ? 6 : 2;
        for (int trial = 0; trial < per_m; ++trial) {
            const std::size_t k = 2 + rng() % 2;
            const std::size_t n = k + m;
            const int d = 2 + static_cast<int>(rng() % std::min<std::size_t>(m, 4));
            LinearCode parent = testing::random_code(f, n - 1, k - 1, rng);
            if (parent.min_weight() < d) continue;
            for (bool reduce : {false, true}) {
                const ExtensionTask task(parent, d, reduce);
                std::set<std::vector<std::uint8_t>> want, got;
                for (const auto& b : naive_extension_rows(task)) want.insert(reduce ? normalize_b(task.parent, b) : b);
                for_each_child(task, {}, [&](const LinearCode& c) {
                    std::vector<std::uint8_t> b;
                    for (std::size_t j = k; j < n; ++j) b.push_back(c.generator().at(k - 1, j));
                    got.insert(b);
                });
                ++cases;
                bad += want != got;
            }
        }
    }
    return {"pruned = naive (n-k <= 8)", bad == 0 && cases > 0,
            std::to_string(cases) + " cases, " + std::to_string(bad) + " mismatches"};
}

Property covrad_vs_sweep() {
    const Field f(5);
    std::mt19937_64 rng(107);
    std::size_t cases = 0, bad = 0;
    CovradOptions dfs_only;
    dfs_only.coset_budget = 0;
    for (std::size_t m = 1; m <= kMaxSweepRedundancy; ++m)
        for (int trial = 0; trial < 15; ++trial) {
            const std::size_t k = 1 + rng() % 4;
            const auto c = testing::random_code(f, k + m, k, rng);
            ++cases;
            bad += covering_radius(c, dfs_only) != covering_radius_sweep(c).value();
        }
    return {"covrad = sweep (n-k <= 6)", bad == 0,
            std::to_string(cases) + " codes, " + std::to_string(bad) + " mismatches"};
}

Property shard_determinism(Context& ctx) {
    const CodeParams target{5, 10, 3, 6};
    std::vector<std::string> texts;
    const std::vector<std::vector<int>> orders{{0, 1, 2, 3}, {3, 1, 0, 2}, {2, 3, 1, 0}};
    for (std::size_t run = 0; run < orders.size(); ++run) {
        const auto dir = fresh_dir(ctx, "shards" + std::to_string(run));
        seed_k2(dir, 9, 6, 7);
        auto opt = step_options(ctx, dir);
        opt.bounds.clear();
        opt.shards = 4;
        opt.threads = static_cast<int>(run) + 1;
        for (int idx : orders[run]) {
            opt.shard_index = idx;
            run_step(target, opt);
        }
        texts.push_back(slurp(db_path(dir, target)));
    }
    const bool same = !texts[0].empty() && texts[1] == texts[0] && texts[2] == texts[0];
    return {"shard order determinism", same,
            std::to_string(orders.size()) + " shard orders, databases " + (same ? "byte-identical" : "differ")};
}

Outcome properties(Context& ctx) {
    std::vector<Property> props;
    props.push_back(cert_invariance());
    props.push_back(cert_soundness());
    props.push_back(pruned_vs_naive());
    props.push_back(covrad_vs_sweep());
    props.push_back(shard_determinism(ctx));
    Outcome o;
    for (const auto& p : props) {
        o.pass = o.pass && p.pass;
        o.detail += (o.detail.empty() ? "" : "; ") + p.name + ": " + (p.pass ? "ok" : "FAILED") + " (" + p.detail + ")";
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    Context ctx;
    std::string data = QCODE_SOURCE_DIR "/data";
    std::vector<int> only;
    app.add_option("--data", data, "Directory holding known_bounds.txt and db/");
    app.add_option("--work", ctx.work, "Scratch directory (default: a fresh temporary directory)");
    app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 7));
    app.add_option("--threads", ctx.threads, "Worker threads")->check(CLI::PositiveNumber);
    std::string report;
    app.add_option("--report", report, "Also write the criterion lines to this file");
    CLI11_PARSE(app, argc, argv);
    ctx.data = data;
    ctx.bounds = ctx.data / "known_bounds.txt";
    const bool own_work = ctx.work.empty();
    if (own_work) ctx.work = fs::temp_directory_path() / ("qcode_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(ctx.work);

    const std::vector<std::pair<std::string, std::function<Outcome(Context&)>>> criteria{
        {"k=2 classification", k2_counts},
        {"[19,3,14] step", step19},
        {"covering radius >= 13 for k=2,3", radius13},
        {"[20,4,14] database and smoke extension", step20},
        {"R=12 for [20,4,14] and no [21,5,14]", prop2},
        {"bounds propagation", bounds_families},
        {"property suites", properties},
    };
    std::ofstream report_out;
    if (!report.empty()) report_out.open(report, std::ios::binary | std::ios::trunc);
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second(ctx);
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        all = all && o.pass;
        std::ostringstream line;
        line << (o.pass ? "[PASS] " : "[FAIL] ") << id << " " << criteria[i].first << ": " << o.detail << " ["
             << static_cast<long>(seconds_since(t0)) << " s]\n";
        std::cout << line.str() << std::flush;
        if (report_out) report_out << line.str() << std::flush;
    }
    if (own_work) fs::remove_all(ctx.work);
    return all ? 0 : 1;
}
