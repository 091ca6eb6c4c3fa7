#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "allmod/errors.hpp"
#include "allmod/modmath.hpp"

namespace allmod::detail {

inline void write_u32(std::ostream& os, std::uint32_t v) {
    std::array<char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b.data(), b.size());
}

inline std::uint32_t read_u32(std::istream& is) {
    std::array<unsigned char, 4> b{};
    if (!is.read(reinterpret_cast<char*>(b.data()), b.size())) throw FormatError("truncated header");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

inline void write_magic(std::ostream& os, std::string_view magic) { os.write(magic.data(), magic.size()); }

inline void expect_magic(std::istream& is, std::string_view magic) {
    std::string got(magic.size(), '\0');
    if (!is.read(got.data(), got.size()) || got != magic)
        throw FormatError("bad magic, expected '" + std::string(magic) + "'");
}

/// Little-endian, zero-padded to exactly `bytes` bytes.
inline void write_le(std::ostream& os, const BigUint& v, std::size_t bytes) {
    std::vector<unsigned char> buf;
    buf.reserve(bytes);
    if (!v.is_zero()) boost::multiprecision::export_bits(v, std::back_inserter(buf), 8, false);
    if (buf.size() > bytes) throw FormatError("value wider than its field");
    buf.resize(bytes, 0);
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

inline BigUint read_le(std::istream& is, std::size_t bytes) {
    std::vector<unsigned char> buf(bytes);
    if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes)))
        throw FormatError("truncated residue data");
    BigUint v;
    boost::multiprecision::import_bits(v, buf.begin(), buf.end(), 8, false);
    return v;
}

}  // namespace allmod::detail
