#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "allmod/errors.hpp"

namespace allmod {

using BigUint = boost::multiprecision::cpp_int;

/// Number of significant bits in v (0 for v == 0).
unsigned bit_length(const BigUint& v);

/// ceil(log2(x)); 0 for x <= 1.
constexpr unsigned ceil_log2(std::uint64_t x) noexcept {
    unsigned r = 0;
    while ((std::uint64_t{1} << r) < x) ++r;
    return r;
}

/// Bits needed to hold x, i.e. ceil(log2(x + 1)).
constexpr unsigned bit_width_of(std::uint64_t x) noexcept {
    unsigned r = 0;
    while (x != 0) { ++r; x >>= 1; }
    return r;
}

/// 2^e as a big integer.
BigUint pow2(unsigned e);

/// floor(v / 2^offset) mod 2^width, without width checks.
BigUint extract_bits(const BigUint& v, unsigned offset, unsigned width);

/// An unsigned value tagged with its declared datapath width.
/// Leading zeros are significant: width never shrinks to fit the value.
class Operand {
public:
    Operand(BigUint value, unsigned width);

    static Operand from_hex(std::string_view hex, unsigned width);

    const BigUint& value() const noexcept { return value_; }
    unsigned width() const noexcept { return width_; }

    /// Lowercase hex, zero-padded to ceil(width / 4) digits.
    std::string to_hex() const;

    friend bool operator==(const Operand&, const Operand&) = default;

private:
    BigUint value_;
    unsigned width_;
};

/// An n-bit modulus with its most significant bit set.
class Modulus {
public:
    Modulus(BigUint value, unsigned width);

    static Modulus from_hex(std::string_view hex, unsigned width);

    const BigUint& value() const noexcept { return value_; }
    unsigned width() const noexcept { return width_; }
    std::string to_hex() const;

    friend bool operator==(const Modulus&, const Modulus&) = default;

private:
    BigUint value_;
    unsigned width_;
};

/// A k-bit slice of an operand's upper part; index 0 is least significant.
struct Segment {
    std::uint32_t value = 0;
    std::size_t index = 0;
    unsigned width = 0;

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Largest segment width the table engines accept (2^24 table rows).
inline constexpr unsigned kMaxSegmentWidth = 24;

/// Reference residue. Every engine is validated against this.
Operand mod_oracle(const Operand& a, const Modulus& m);

/// floor(a / 2^offset) mod 2^width; throws BoundsError if the slice leaves a.
BigUint slice_bits(const Operand& a, unsigned offset, unsigned width);

/// Splits value into `count` k-bit segments, LSB first. The last segment is
/// zero-padded. Throws BoundsError if value needs more than k * count bits.
std::vector<Segment> segment_value(const BigUint& value, unsigned k, std::size_t count);

/// As above with count = max(1, ceil(bit_length(value) / k)).
std::vector<Segment> segment_value(const BigUint& value, unsigned k);

/// Parses a hex string (optional 0x prefix, '_' separators ignored).
BigUint parse_hex(std::string_view hex);

/// Lowercase hex, zero-padded to at least min_digits digits.
std::string format_hex(const BigUint& v, std::size_t min_digits = 1);

}  // namespace allmod
