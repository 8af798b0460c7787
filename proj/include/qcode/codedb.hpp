#pragma once

// Persistent code databases. File layout (LF line endings):
//
//   #qcodedb v1
//   q=<q> n=<n> k=<k> d=<d> count=<c>
//
//   <row 1 of code 1>
//   ...
//   <row k of code 1>
//
//   <row 1 of code 2>
//   ...
//
// Codes are stored in ascending certificate order.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qcode/canon.hpp"
#include "qcode/linear_code.hpp"

namespace qcode {

struct CodeParams {
    int q = 5;
    int n = 0;
    int k = 0;
    int d = 0;

    std::string tag() const;  // "q5_n20_k4_d14"
    std::string bracket() const;  // "[20,4,14]_5"
    friend auto operator<=>(const CodeParams&, const CodeParams&) = default;
};

struct CodeDB {
    CodeParams params;
    std::vector<GeneratorMatrix> codes;

    std::string to_text() const;
    // Throws UsageError on any format problem or on a code whose length,
    // dimension or minimum weight differs from the header.
    static CodeDB parse(std::string_view text);
    static CodeDB load(const std::filesystem::path& path);
    // Writes through a temporary file and rename.
    void save(const std::filesystem::path& path) const;

    std::vector<LinearCode> linear_codes() const;
};

std::filesystem::path db_path(const std::filesystem::path& dir, const CodeParams& p);

// Canonical forms of the distinct classes among `codes` in certificate
// order. Codes whose minimum weight differs from p.d are rejected with
// InvariantError.
CodeDB make_db(const CodeParams& p, const std::vector<LinearCode>& codes);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t x);

struct DbViolation {
    std::size_t index = 0;  // 0-based code index; npos for file-level problems
    std::string what;
};

struct VerifyReport {
    CodeParams params;
    std::size_t codes = 0;
    std::vector<DbViolation> violations;
    bool ok() const noexcept { return violations.empty(); }
    std::string to_text() const;
};

// Rechecks every code's parameters, certificate uniqueness and order.
// Parsing is lenient so that every problem is listed.
VerifyReport verify_db_text(std::string_view text);
VerifyReport verify_db(const CodeDB& db);

}  // namespace qcode
