// qcode: command line front end for the classification pipeline.
//
// Exit codes: 0 success, 2 proof invariant violated, 3 resource budget
// exceeded, 4 bad input.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>

#include "CLI11.hpp"
#include "qcode/bounds.hpp"
#include "qcode/canon.hpp"
#include "qcode/codedb.hpp"
#include "qcode/covrad.hpp"
#include "qcode/errors.hpp"
#include "qcode/pipeline.hpp"

namespace fs = std::filesystem;
using namespace qcode;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw UsageError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Common {
    int q = 5;
    int n = 0;
    int k = 0;
    int d = 0;
    std::string db_dir = "db";
    std::string journal;
    std::string bounds = QCODE_DEFAULT_BOUNDS;
    int shards = 1;
    int shard_index = 0;
    int threads = 1;
    bool quiet = false;

    StepOptions options() const {
        StepOptions o;
        o.db_dir = db_dir;
        o.journal = journal;
        o.bounds = bounds;
        o.shards = shards;
        o.shard_index = shard_index;
        o.threads = threads;
        if (!quiet) o.progress = [](const std::string& s) { std::cerr << s << std::endl; };
        return o;
    }
    CodeParams params() const {
        if (n <= 0 || k <= 0 || d <= 0) throw UsageError("--n, --k and --d are required");
        return {q, n, k, d};
    }
};

void add_params(CLI::App* app, Common& c, bool need_k = true) {
    app->add_option("--q", c.q, "field size")->capture_default_str();
    app->add_option("--n", c.n, "code length");
    if (need_k) app->add_option("--k", c.k, "dimension");
    app->add_option("--d", c.d, "minimum weight");
}

void add_run(CLI::App* app, Common& c) {
    app->add_option("--db-dir", c.db_dir, "database directory")->capture_default_str();
    app->add_option("--journal", c.journal, "journal file (default <db-dir>/journal.log)");
    app->add_option("--bounds", c.bounds, "known bounds file")->capture_default_str();
    app->add_option("--threads", c.threads, "worker threads")->capture_default_str();
    app->add_flag("--quiet", c.quiet, "no progress on stderr");
}

const std::vector<CodeParams> kTableRows = {{5, 18, 2, 14}, {5, 18, 2, 15}, {5, 19, 3, 14}, {5, 20, 4, 14}, {5, 21, 5, 14}};

std::string timed(const char* what, double secs) {
    std::ostringstream o;
    o.setf(std::ios::fixed);
    o.precision(1);
    o << what << " " << secs << " s";
    return o.str();
}

int run(int argc, char** argv) {
    CLI::App app{"Classification of linear codes over small prime fields"};
    app.require_subcommand(1);
    Common c;

    auto* k2 = app.add_subcommand("classify-k2", "classify [n,2,d]_q codes via the projective line");
    add_params(k2, c, false);
    add_run(k2, c);

    auto* step = app.add_subcommand("extend-step", "extend the [n-1,k-1,>=d] databases to [n,k,d]");
    add_params(step, c);
    add_run(step, c);
    step->add_option("--shards", c.shards, "number of shard groups")->capture_default_str();
    step->add_option("--shard-index", c.shard_index, "shard group handled here")->capture_default_str();

    std::string matrix_file;
    int threshold = -1;
    auto* cov = app.add_subcommand("covrad", "covering radius of a code or of every code in a database");
    add_params(cov, c);
    add_run(cov, c);
    cov->add_option("--file", matrix_file, "generator matrix file");
    cov->add_option("--t", threshold, "only decide R >= t");

    std::string fa, fb;
    auto* eq = app.add_subcommand("equiv", "test two generator matrices for monomial equivalence");
    eq->add_option("a", fa, "first generator matrix file")->required();
    eq->add_option("b", fb, "second generator matrix file")->required();

    std::vector<std::string> verify_files;
    auto* ver = app.add_subcommand("verify", "recheck databases");
    add_params(ver, c);
    add_run(ver, c);
    ver->add_option("files", verify_files, "database files");

    int table_t = 13;
    auto* tab = app.add_subcommand("table", "counts, weight enumerators and covering radii per database");
    add_run(tab, c);
    tab->add_option("--threshold", table_t, "covering radius column")->capture_default_str();

    bool assume = false;
    auto* der = app.add_subcommand("derive", "propagate the nonexistence result through the bounds rules");
    add_run(der, c);
    der->add_flag("--assume", assume, "take the nonexistence of [21,5,14]_5 as given without a database");

    auto* prove = app.add_subcommand("prove-21-5-14", "run the whole classification and nonexistence proof");
    add_run(prove, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 4;
    }

    auto opt = c.options();
    using clk = std::chrono::steady_clock;

    if (*k2) {
        if (c.n <= 0 || c.d <= 0) throw UsageError("--n and --d are required");
        auto db = classify_k2(c.q, c.n, c.d);
        const auto path = db_path(opt.db_dir, db.params);
        db.save(path);
        std::cout << db.params.bracket() << ": " << db.codes.size() << " codes, "
                  << count_distinct_enumerators(db.linear_codes()) << " weight enumerators -> " << path.string() << "\n";
        return 0;
    }
    if (*step) {
        opt.shards = c.shards;
        opt.shard_index = c.shard_index;
        const auto t0 = clk::now();
        auto rep = run_step(c.params(), opt);
        std::cout << rep.to_text();
        std::cerr << timed("elapsed", std::chrono::duration<double>(clk::now() - t0).count()) << "\n";
        return 0;
    }
    if (*cov) {
        if (!matrix_file.empty()) {
            LinearCode code(GeneratorMatrix::parse(read_file(matrix_file)));
            if (threshold >= 0) {
                std::cout << (covers_at_least(code, threshold) ? "R>=" : "R<") << threshold << "\n";
            } else {
                std::cout << "R=" << covering_radius(code) << "\n";
            }
            return 0;
        }
        auto db = CodeDB::load(db_path(opt.db_dir, c.params()));
        if (threshold >= 0) {
            for (std::size_t i = 0; i < db.codes.size(); ++i)
                std::cout << i << " " << (covers_at_least(LinearCode(db.codes[i]), threshold) ? "R>=" : "R<")
                          << threshold << "\n";
            return 0;
        }
        auto radii = covering_radii(db, opt);
        for (std::size_t i = 0; i < radii.size(); ++i) std::cout << i << " R=" << radii[i] << "\n";
        return 0;
    }
    if (*eq) {
        LinearCode a(GeneratorMatrix::parse(read_file(fa)));
        LinearCode b(GeneratorMatrix::parse(read_file(fb)));
        std::cout << (equivalent(a, b) ? "equivalent" : "inequivalent") << "\n";
        return 0;
    }
    if (*ver) {
        if (verify_files.empty()) verify_files.push_back(db_path(opt.db_dir, c.params()).string());
        bool ok = true;
        for (const auto& f : verify_files) {
            auto rep = verify_db_text(read_file(f));
            std::cout << f << ": " << rep.to_text();
            ok = ok && rep.ok();
        }
        return ok ? 0 : 2;
    }
    if (*tab) {
        std::cout << format_table(table_rows(kTableRows, table_t, opt), table_t);
        return 0;
    }
    if (*der) {
        auto cfg = BoundsConfig::load(opt.bounds);
        const CodeParams target{5, 21, 5, 14};
        const auto path = db_path(opt.db_dir, target);
        BoundsFact fact;
        fact.kind = BoundsFact::Kind::not_exists;
        fact.params = target;
        fact.prior = false;
        if (fs::exists(path)) {
            auto db = CodeDB::load(path);
            if (!db.codes.empty()) throw InvariantError(path.string() + " is not empty");
            fact.source = "classification (" + path.string() + ")";
        } else if (assume) {
            fact.source = "assumed on the command line";
        } else {
            throw UsageError(path.string() + " not found; run prove-21-5-14 first or pass --assume");
        }
        cfg.axioms.push_back(fact);
        std::cout << derive_bounds(cfg.axioms, cfg.window).report();
        return 0;
    }
    if (*prove) {
        const auto t0 = clk::now();
        auto lap = [&](const char* what) {
            std::cerr << timed(what, std::chrono::duration<double>(clk::now() - t0).count()) << "\n";
        };
        for (int d : {14, 15}) {
            auto db = classify_k2(5, 18, d);
            db.save(db_path(opt.db_dir, db.params));
            std::cout << db.params.bracket() << ": " << db.codes.size() << " codes\n";
        }
        lap("k=2 classification done at");
        for (int t = 0; t < 2; ++t) {
            auto rep = run_step({5, 19 + t, 3 + t, 14}, opt);
            std::cout << rep.to_text();
            if (!rep.sealed) throw UsageError("step did not complete");
            lap("step done at");
        }
        auto proof = conclude_nonexistence({5, 21, 5, 14}, opt);
        std::cout << proof.to_text();
        lap("proof done at");
        std::cout << format_table(table_rows(kTableRows, 13, opt), 13);
        if (!proof.holds) return 2;
        auto cfg = BoundsConfig::load(opt.bounds);
        BoundsFact fact;
        fact.kind = BoundsFact::Kind::not_exists;
        fact.params = {5, 21, 5, 14};
        fact.prior = false;
        fact.source = "classification";
        cfg.axioms.push_back(fact);
        std::cout << derive_bounds(cfg.axioms, cfg.window).report();
        return 0;
    }
    return 4;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qcode::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
