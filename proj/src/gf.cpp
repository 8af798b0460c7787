#include "qcode/gf.hpp"

#include <algorithm>
#include <bit>

#include "qcode/errors.hpp"

namespace qcode {

namespace {

constexpr std::uint64_t kOnes = 0x1111111111111111ULL;

bool is_small_prime(int q) { return q == 2 || q == 3 || q == 5 || q == 7; }

// Lanewise (a + b) mod q for 4-bit lanes holding reduced residues.
inline std::uint64_t lane_add(std::uint64_t a, std::uint64_t b, int q) noexcept {
    const std::uint64_t s = a + b;
    const std::uint64_t ge = ((s + static_cast<std::uint64_t>(8 - q) * kOnes) >> 3) & kOnes;
    return s - ge * static_cast<std::uint64_t>(q);
}

inline std::uint64_t lane_scale(std::uint64_t w, unsigned lambda, int q) noexcept {
    std::uint64_t r = 0;
    std::uint64_t p = w;
    while (lambda != 0) {
        if (lambda & 1U) r = lane_add(r, p, q);
        p = lane_add(p, p, q);
        lambda >>= 1;
    }
    return r;
}

inline int lane_nonzero(std::uint64_t x) noexcept {
    return std::popcount((x | (x >> 1) | (x >> 2) | (x >> 3)) & kOnes);
}

}  // namespace

Field::Field(int q) : q_(q), root_(1) {
    if (!is_small_prime(q)) throw UsageError("field order must be a prime in [2,7], got " + std::to_string(q));
    for (int a = 1; a < q; ++a)
        for (int b = 1; b < q; ++b)
            if (a * b % q == 1) inv_[a] = static_cast<std::uint8_t>(b);
    for (int g = 1; g < q; ++g) {
        int order = 1;
        int x = g;
        while (x != 1) {
            x = x * g % q;
            ++order;
        }
        if (order == q - 1) {
            root_ = static_cast<std::uint8_t>(g);
            break;
        }
    }
}

GFVec::GFVec(Field field, std::size_t len)
    : field_(field), len_(len), words_((len + kLanes - 1) / kLanes, 0) {}

GFVec GFVec::from_digits(Field field, std::span<const std::uint8_t> digits) {
    GFVec v(field, digits.size());
    for (std::size_t i = 0; i < digits.size(); ++i) v.set(i, digits[i]);
    return v;
}

GFVec GFVec::parse(Field field, std::string_view text) {
    GFVec v(field, text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c < '0' || c >= '0' + field.q())
            throw UsageError("bad digit '" + std::string(1, c) + "' for q=" + std::to_string(field.q()));
        v.set(i, static_cast<std::uint8_t>(c - '0'));
    }
    return v;
}

void GFVec::set(std::size_t i, std::uint8_t d) {
    if (i >= len_) throw UsageError("coordinate out of range");
    if (d >= field_.q()) throw UsageError("digit not reduced mod q");
    auto& w = words_[i / kLanes];
    w = (w & ~(std::uint64_t{0xF} << shift(i))) | (std::uint64_t{d} << shift(i));
}

std::vector<std::uint8_t> GFVec::digits() const {
    std::vector<std::uint8_t> out(len_);
    for (std::size_t i = 0; i < len_; ++i) out[i] = (*this)[i];
    return out;
}

std::string GFVec::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i) s[i] = static_cast<char>('0' + (*this)[i]);
    return s;
}

void GFVec::check_compatible(const GFVec& w) const {
    if (w.len_ != len_) throw UsageError("vector length mismatch");
    if (!(w.field_ == field_)) throw UsageError("vector field mismatch");
}

void GFVec::add_scaled_inplace(const GFVec& w, std::uint8_t lambda) {
    check_compatible(w);
    lambda = static_cast<std::uint8_t>(lambda % field_.q());
    if (lambda == 0) return;
    const int q = field_.q();
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] = lane_add(words_[i], lane_scale(w.words_[i], lambda, q), q);
}

void GFVec::add_inplace(const GFVec& w) {
    const int q = field_.q();
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] = lane_add(words_[i], w.words_[i], q);
}

bool operator==(const GFVec& a, const GFVec& b) noexcept {
    return a.field_ == b.field_ && a.len_ == b.len_ && a.words_ == b.words_;
}

std::strong_ordering operator<=>(const GFVec& a, const GFVec& b) noexcept {
    if (auto c = a.field_.q() <=> b.field_.q(); c != 0) return c;
    if (auto c = a.len_ <=> b.len_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.words_.begin(), a.words_.end(), b.words_.begin(),
                                                  b.words_.end());
}

int weight(const GFVec& v) noexcept {
    int w = 0;
    for (std::uint64_t x : v.words()) w += lane_nonzero(x);
    return w;
}

GFVec add_scaled(const GFVec& v, const GFVec& w, std::uint8_t lambda) {
    GFVec r = v;
    r.add_scaled_inplace(w, lambda);
    return r;
}

GFVec scaled(const GFVec& v, std::uint8_t lambda) {
    GFVec zero(v.field(), v.size());
    zero.add_scaled_inplace(v, lambda);
    return zero;
}

std::vector<GFVec> scalar_multiples(const GFVec& v) {
    std::vector<GFVec> out;
    out.reserve(static_cast<std::size_t>(v.field().q() - 1));
    for (int l = 1; l < v.field().q(); ++l) out.push_back(scaled(v, static_cast<std::uint8_t>(l)));
    return out;
}

int agreements(const GFVec& a, const GFVec& b) {
    if (a.size() != b.size()) throw UsageError("vector length mismatch");
    int differ = 0;
    auto wa = a.words();
    auto wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) differ += lane_nonzero(wa[i] ^ wb[i]);
    return static_cast<int>(a.size()) - differ;
}

namespace reference {

int weight(std::span<const std::uint8_t> digits) {
    return static_cast<int>(std::count_if(digits.begin(), digits.end(), [](std::uint8_t d) { return d != 0; }));
}

std::vector<std::uint8_t> add_scaled(std::span<const std::uint8_t> v, std::span<const std::uint8_t> w,
                                     std::uint8_t lambda, int q) {
    if (v.size() != w.size()) throw UsageError("vector length mismatch");
    std::vector<std::uint8_t> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<std::uint8_t>((v[i] + lambda * w[i]) % q);
    return out;
}

}  // namespace reference

}  // namespace qcode
