#pragma once

// Arithmetic over small prime fields F_q (2 <= q <= 7) and packed vectors.
//
// GFVec packs one residue per 4-bit lane, sixteen digits per 64-bit word,
// coordinate 0 in the most significant nibble of word 0. With that layout
// comparing the word arrays numerically is the same as comparing the digit
// strings lexicographically.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcode {

class Field {
public:
    // Throws UsageError unless q is a prime in [2, 7].
    explicit Field(int q);

    int q() const noexcept { return q_; }

    std::uint8_t add(std::uint8_t a, std::uint8_t b) const noexcept {
        return static_cast<std::uint8_t>((a + b) % q_);
    }
    std::uint8_t sub(std::uint8_t a, std::uint8_t b) const noexcept {
        return static_cast<std::uint8_t>((a + q_ - b) % q_);
    }
    std::uint8_t mul(std::uint8_t a, std::uint8_t b) const noexcept {
        return static_cast<std::uint8_t>((a * b) % q_);
    }
    std::uint8_t neg(std::uint8_t a) const noexcept {
        return static_cast<std::uint8_t>((q_ - a) % q_);
    }
    // a must be nonzero.
    std::uint8_t inv(std::uint8_t a) const noexcept { return inv_[a]; }

    // Fixed multiplicative generator: 2 for q = 5, the smallest primitive
    // root otherwise (1 for q = 2).
    std::uint8_t primitive_root() const noexcept { return root_; }

    friend bool operator==(const Field& a, const Field& b) noexcept { return a.q_ == b.q_; }

private:
    int q_;
    std::uint8_t root_;
    std::uint8_t inv_[8]{};
};

class GFVec {
public:
    static constexpr std::size_t kLanes = 16;

    GFVec(Field field, std::size_t len);

    // Digits must already be reduced mod q; throws UsageError otherwise.
    static GFVec from_digits(Field field, std::span<const std::uint8_t> digits);
    // ASCII digits '0'..'q-1', coordinate 0 first.
    static GFVec parse(Field field, std::string_view text);

    const Field& field() const noexcept { return field_; }
    std::size_t size() const noexcept { return len_; }

    std::uint8_t operator[](std::size_t i) const noexcept {
        return static_cast<std::uint8_t>((words_[i / kLanes] >> shift(i)) & 0xF);
    }
    void set(std::size_t i, std::uint8_t d);

    std::vector<std::uint8_t> digits() const;
    std::string to_string() const;

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    // In-place v += lambda * w.
    void add_scaled_inplace(const GFVec& w, std::uint8_t lambda);
    // In-place v += w (lambda = 1 fast path used by codeword enumeration).
    void add_inplace(const GFVec& w);

    friend bool operator==(const GFVec& a, const GFVec& b) noexcept;
    friend std::strong_ordering operator<=>(const GFVec& a, const GFVec& b) noexcept;

private:
    static unsigned shift(std::size_t i) noexcept {
        return static_cast<unsigned>(4 * (kLanes - 1 - i % kLanes));
    }
    void check_compatible(const GFVec& w) const;

    Field field_;
    std::size_t len_;
    std::vector<std::uint64_t> words_;
};

// Number of nonzero coordinates.
int weight(const GFVec& v) noexcept;

// v + lambda * w, digitwise mod q. Throws UsageError on length or field
// mismatch.
GFVec add_scaled(const GFVec& v, const GFVec& w, std::uint8_t lambda);

GFVec scaled(const GFVec& v, std::uint8_t lambda);

// lambda * v for lambda = 1 .. q-1 in that order.
std::vector<GFVec> scalar_multiples(const GFVec& v);

// Number of coordinates where a and b agree.
int agreements(const GFVec& a, const GFVec& b);

// Digit-at-a-time implementations kept as an oracle for the packed paths.
namespace reference {
int weight(std::span<const std::uint8_t> digits);
std::vector<std::uint8_t> add_scaled(std::span<const std::uint8_t> v, std::span<const std::uint8_t> w,
                                     std::uint8_t lambda, int q);
}  // namespace reference

}  // namespace qcode
