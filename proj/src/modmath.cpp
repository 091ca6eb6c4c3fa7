#include "allmod/modmath.hpp"

#include <algorithm>
#include <cctype>
#include <ios>

namespace allmod {

unsigned bit_length(const BigUint& v) {
    if (v.is_zero()) return 0;
    return static_cast<unsigned>(boost::multiprecision::msb(v)) + 1;
}

BigUint pow2(unsigned e) {
    BigUint r = 1;
    return r << e;
}

BigUint extract_bits(const BigUint& v, unsigned offset, unsigned width) {
    if (width == 0) return 0;
    BigUint mask = pow2(width) - 1;
    return (v >> offset) & mask;
}

BigUint parse_hex(std::string_view hex) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) hex.remove_prefix(2);
    std::string digits;
    digits.reserve(hex.size() + 2);
    digits = "0x";
    for (char c : hex) {
        if (c == '_') continue;
        if (!std::isxdigit(static_cast<unsigned char>(c)))
            throw FormatError("invalid hex digit '" + std::string(1, c) + "'");
        digits.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (digits.size() == 2) throw FormatError("empty hex string");
    return BigUint(digits);
}

std::string format_hex(const BigUint& v, std::size_t min_digits) {
    std::string s = v.str(0, std::ios_base::hex);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s.size() < min_digits) s.insert(0, min_digits - s.size(), '0');
    return s;
}

Operand::Operand(BigUint value, unsigned width) : value_(std::move(value)), width_(width) {
    if (width_ == 0) throw BoundsError("operand width must be positive");
    if (value_ < 0) throw BoundsError("operand must be non-negative");
    if (bit_length(value_) > width_)
        throw BoundsError("value 0x" + format_hex(value_) + " does not fit in " +
                          std::to_string(width_) + " bits");
}

Operand Operand::from_hex(std::string_view hex, unsigned width) {
    return Operand(parse_hex(hex), width);
}

std::string Operand::to_hex() const { return format_hex(value_, (width_ + 3) / 4); }

Modulus::Modulus(BigUint value, unsigned width) : value_(std::move(value)), width_(width) {
    if (value_.is_zero() || value_ < 0) throw InvalidModulusError("modulus must be positive");
    if (width_ < 2) throw InvalidModulusError("modulus width must be at least 2 bits");
    if (bit_length(value_) != width_)
        throw InvalidModulusError("modulus 0x" + format_hex(value_) + " is not a " +
                                  std::to_string(width_) + "-bit number with its top bit set");
}

Modulus Modulus::from_hex(std::string_view hex, unsigned width) {
    return Modulus(parse_hex(hex), width);
}

std::string Modulus::to_hex() const { return format_hex(value_, (width_ + 3) / 4); }

Operand mod_oracle(const Operand& a, const Modulus& m) {
    return Operand(a.value() % m.value(), m.width());
}

BigUint slice_bits(const Operand& a, unsigned offset, unsigned width) {
    if (width == 0) throw BoundsError("slice width must be positive");
    if (static_cast<std::uint64_t>(offset) + width > a.width())
        throw BoundsError("slice [" + std::to_string(offset) + ", " + std::to_string(offset + width) +
                          ") exceeds operand width " + std::to_string(a.width()));
    return extract_bits(a.value(), offset, width);
}

std::vector<Segment> segment_value(const BigUint& value, unsigned k, std::size_t count) {
    if (k == 0 || k > 32) throw BoundsError("segment width must be in [1, 32]");
    if (value < 0) throw BoundsError("segment source must be non-negative");
    if (bit_length(value) > static_cast<std::uint64_t>(k) * count)
        throw BoundsError("value needs more than " + std::to_string(count) + " segments of " +
                          std::to_string(k) + " bits");
    std::vector<Segment> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto bits = extract_bits(value, static_cast<unsigned>(k * i), k);
        out.push_back({bits.convert_to<std::uint32_t>(), i, k});
    }
    return out;
}

std::vector<Segment> segment_value(const BigUint& value, unsigned k) {
    if (k == 0) throw BoundsError("segment width must be positive");
    std::size_t count = std::max<std::size_t>(1, (bit_length(value) + k - 1) / k);
    return segment_value(value, k, count);
}

}  // namespace allmod
