#pragma once

// Classification steps and the nonexistence proof built from them.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qcode/bounds.hpp"
#include "qcode/codedb.hpp"
#include "qcode/linear_code.hpp"

namespace qcode {

// [n,2,d]_q codes from multisets of columns over the projective line
// (plus zero columns) modulo PGL(2,q). Independent of the extension code.
CodeDB classify_k2(int q, int n, int d);

// The unique [n,1,d]_q code.
CodeDB classify_k1(int q, int n, int d);

// In-memory extension step: all inequivalent children of exact minimum
// weight d of the given parents.
std::vector<LinearCode> extend_all(const std::vector<LinearCode>& parents, int d);

// Append-only run log. Each record is one LF-terminated line written with
// a single append, so concurrent writers never interleave records.
class Journal {
public:
    explicit Journal(std::filesystem::path path);
    const std::filesystem::path& path() const noexcept { return path_; }
    void append(const std::string& record);
    std::vector<std::string> records() const;

private:
    std::filesystem::path path_;
    std::mutex mu_;
};

using ProgressFn = std::function<void(const std::string&)>;

struct StepOptions {
    std::filesystem::path db_dir = "db";
    std::filesystem::path journal;  // empty: <db_dir>/journal.log
    std::filesystem::path bounds;   // known bounds file; empty: Griesmer only
    int shards = 1;
    int shard_index = 0;
    int threads = 1;
    std::size_t split_depth = 2;
    ProgressFn progress;

    std::filesystem::path journal_path() const { return journal.empty() ? db_dir / "journal.log" : journal; }
};

struct StepReport {
    CodeParams target;
    std::size_t parents = 0;
    std::string parents_hash;
    std::size_t units_total = 0;
    std::size_t units_done_before = 0;  // found in the journal
    std::size_t units_run = 0;
    std::uint64_t nodes = 0;
    std::uint64_t children = 0;
    std::uint64_t higher_d = 0;  // children with minimum weight above the target
    bool sealed = false;
    std::optional<CodeDB> db;
    std::size_t enumerators = 0;
    std::string db_hash;

    std::string to_text() const;
};

// Parent databases for a target: every [n-1,k-1,d'] with d <= d' <= the
// largest d' the bounds allow. A missing database is an error.
std::vector<CodeDB> load_parents(const CodeParams& target, const StepOptions& opt);

// Extends every parent, shard by shard, journaling each finished shard.
// Once every shard of the step is in the journal (from this or any other
// process) the step is sealed: the database is written and its hash
// recorded. Resuming skips shards already journaled.
StepReport run_step(const CodeParams& target, const StepOptions& opt);

// Rebuilds a sealed or complete step from the journal alone.
CodeDB replay_step(const CodeParams& target, const std::string& parents_hash, const Journal& journal);

// Exact covering radii of every code of a database, cached in the journal.
std::vector<int> covering_radii(const CodeDB& db, const StepOptions& opt);

struct ProofReport {
    CodeParams target;
    std::size_t parents = 0;
    std::size_t parents_far = 0;        // route (a): parents with R >= d - 1
    std::map<int, std::size_t> radius;  // route (a): R -> count
    std::size_t children = 0;           // route (b): target codes found
    bool holds = false;

    std::string to_text() const;
};

// Nonexistence of the target by two routes: (a) no parent has covering
// radius >= d - 1, (b) the extension step finds nothing. Throws
// InvariantError when the routes disagree.
ProofReport conclude_nonexistence(const CodeParams& target, const StepOptions& opt);

struct TableRow {
    CodeParams params;
    bool present = false;
    std::size_t count = 0;
    std::size_t enumerators = 0;
    std::size_t at_least = 0;  // R >= threshold
    std::size_t exactly = 0;   // R == threshold - 1
};

std::vector<TableRow> table_rows(const std::vector<CodeParams>& rows, int threshold, const StepOptions& opt);
std::string format_table(const std::vector<TableRow>& rows, int threshold);

}  // namespace qcode
