#pragma once

// Linear codes given by generator matrices: codeword enumeration, minimum
// weight, weight enumerators, shortening, puncturing and systematic form.
// Coordinates are 0-based in this API; text I/O and the CLI are 1-based.

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcode/gf.hpp"

namespace qcode {

class GeneratorMatrix {
public:
    // Rows must share length and field and be linearly independent; k = 0
    // (the zero code of length n) is allowed.
    GeneratorMatrix(Field field, std::size_t n, std::vector<GFVec> rows);

    // Parses "q=<q> n=<n> k=<k>" followed by k digit-string lines.
    static GeneratorMatrix parse(std::string_view text);
    // Parses k digit strings (no header).
    static GeneratorMatrix from_rows(Field field, const std::vector<std::string>& rows);

    const Field& field() const noexcept { return field_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return rows_.size(); }
    const std::vector<GFVec>& rows() const noexcept { return rows_; }
    const GFVec& row(std::size_t i) const { return rows_.at(i); }
    std::uint8_t at(std::size_t i, std::size_t j) const { return rows_[i][j]; }
    std::vector<std::uint8_t> column(std::size_t j) const;

    std::string to_text() const;  // header + rows, LF terminated

    friend bool operator==(const GeneratorMatrix&, const GeneratorMatrix&) = default;

private:
    Field field_;
    std::size_t n_;
    std::vector<GFVec> rows_;
};

// Rank of a list of equal-length vectors.
std::size_t rank(Field field, std::size_t n, const std::vector<GFVec>& rows);

// Reduced row echelon form of the row space (pivots leftmost). Two
// generator matrices span the same code iff their RREFs are equal.
GeneratorMatrix rref(const GeneratorMatrix& g);

struct SystematicForm {
    GeneratorMatrix matrix;
    // column i of `matrix` is column perm[i] of the input.
    std::vector<int> perm;
};

// Moves a set of pivot columns to the front (keeping the relative order of
// the others) and row-reduces so the first k columns are the identity.
SystematicForm systematize(const GeneratorMatrix& g);

bool is_systematic(const GeneratorMatrix& g);

// x -> xP for a monomial matrix P: coordinate j is scaled by scale[j] and
// moved to position perm[j].
struct Monomial {
    std::vector<int> perm;
    std::vector<std::uint8_t> scale;

    static Monomial identity(std::size_t n);
    std::size_t size() const noexcept { return perm.size(); }
    GFVec apply(const GFVec& v) const;
    Monomial then(const Monomial& next, const Field& f) const;  // first *this, then next
    Monomial inverse(const Field& f) const;
    bool is_identity() const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

using WeightEnumerator = std::vector<std::uint64_t>;

class LinearCode {
public:
    explicit LinearCode(GeneratorMatrix gen);

    const GeneratorMatrix& generator() const noexcept { return state_->gen; }
    const Field& field() const noexcept { return state_->gen.field(); }
    std::size_t n() const noexcept { return state_->gen.n(); }
    std::size_t k() const noexcept { return state_->gen.k(); }
    int q() const noexcept { return field().q(); }

    // q^k; throws ResourceError if it does not fit the enumeration budget.
    std::uint64_t size() const;

    // Visits every codeword once, in odometer order of the message
    // u = (u_0, ..., u_{k-1}) with u_0 fastest. Consecutive codewords differ
    // by adding one precomputed carry row.
    void for_each_codeword(const std::function<void(const GFVec&)>& fn) const;
    std::vector<GFVec> codewords() const;

    // Smallest nonzero weight; 0 for the zero code. Cached.
    int min_weight() const;
    const WeightEnumerator& weight_enumerator() const;

    // Computes min weight by encoding every message from scratch. Used as an
    // oracle for the incremental path.
    int min_weight_naive() const;

    bool contains(const GFVec& v) const;

    LinearCode transformed(const Monomial& p) const;

    friend bool operator==(const LinearCode& a, const LinearCode& b) { return a.generator() == b.generator(); }

private:
    struct State {
        GeneratorMatrix gen;
        std::once_flag once;
        WeightEnumerator enumerator;
        int min_weight = 0;
        explicit State(GeneratorMatrix g) : gen(std::move(g)) {}
    };
    void fill_cache() const;

    std::shared_ptr<State> state_;
};

// Maximum number of codewords enumerated by for_each_codeword.
inline constexpr std::uint64_t kEnumerationBudget = 1ULL << 24;

// Codewords that vanish at coordinate j, with j deleted.
LinearCode shorten(const LinearCode& c, std::size_t j);

// Deletes coordinate j. Requires d >= 2; checks that the result has
// dimension k and minimum weight d-1 or d.
LinearCode puncture(const LinearCode& c, std::size_t j);

// Inserts `column` as coordinate j (inverse of puncturing on matrices).
GeneratorMatrix insert_column(const GeneratorMatrix& g, std::size_t j, const std::vector<std::uint8_t>& column);

// Number of distinct weight enumerators in a list of codes.
std::size_t count_distinct_enumerators(const std::vector<LinearCode>& codes);

}  // namespace qcode
