#include "allmod/lut_reduce.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "binary_io.hpp"

namespace allmod {

LutGeometry LutGeometry::derive(unsigned n, std::uint64_t capacity_bits) {
    if (n < 2) throw ConfigurationError("modulus width must be at least 2 bits");
    if (capacity_bits < 2ull * n)
        throw InfeasibleGeometryError("BRAM capacity " + std::to_string(capacity_bits) +
                                      " bits cannot hold a 1-bit-input table of " + std::to_string(n) +
                                      "-bit residues");
    unsigned k = 1;
    while (k < kMaxSegmentWidth && (std::uint64_t{1} << (k + 1)) * n <= capacity_bits) ++k;
    return with_k(n, k, capacity_bits);
}

LutGeometry LutGeometry::with_k(unsigned n, unsigned k, std::uint64_t capacity_bits) {
    if (n < 2) throw ConfigurationError("modulus width must be at least 2 bits");
    if (k == 0 || k > kMaxSegmentWidth)
        throw ConfigurationError("segment width k must be in [1, " + std::to_string(kMaxSegmentWidth) + "]");
    if ((std::uint64_t{1} << k) * n > capacity_bits)
        throw InfeasibleGeometryError("2^" + std::to_string(k) + " x " + std::to_string(n) +
                                      " bits exceeds BRAM capacity " + std::to_string(capacity_bits));
    return LutGeometry{n, k, (n + k - 1) / k, capacity_bits};
}

LookupTable::LookupTable(Modulus m, unsigned k, std::size_t count, unsigned base,
                         std::vector<BigUint> entries)
    : modulus_(std::move(m)), k_(k), count_(count), base_exponent_(base), entries_(std::move(entries)) {}

LookupTable LookupTable::precompute(const Modulus& m, unsigned k, std::size_t count,
                                    unsigned base_exponent) {
    if (k == 0 || k > kMaxSegmentWidth)
        throw ConfigurationError("segment width k must be in [1, " + std::to_string(kMaxSegmentWidth) + "]");
    const std::size_t per_row = std::size_t{1} << k;
    const BigUint& mod = m.value();

    std::vector<BigUint> entries;
    entries.reserve(count * per_row);
    // step = 2^(base + k*i) mod M, advanced by 2^k per row
    BigUint step = pow2(base_exponent) % mod;
    const BigUint row_shift = pow2(k) % mod;
    for (std::size_t i = 0; i < count; ++i) {
        BigUint acc = 0;
        for (std::size_t a = 0; a < per_row; ++a) {
            entries.push_back(acc);
            acc += step;
            if (acc >= mod) acc -= mod;
        }
        step = (step * row_shift) % mod;
    }
    for (const auto& e : entries) detail::check_invariant(e < mod, "table residue not below modulus");
    return LookupTable(m, k, count, base_exponent, std::move(entries));
}

const BigUint& LookupTable::at(std::size_t row, std::uint32_t index) const {
    if (row >= count_ || index >= entries_per_row())
        throw BoundsError("table index (" + std::to_string(row) + ", " + std::to_string(index) +
                          ") out of range");
    return entries_[row * entries_per_row() + index];
}

std::uint64_t LookupTable::storage_bits() const noexcept {
    return static_cast<std::uint64_t>(count_) * entries_per_row() * modulus_.width();
}

void LookupTable::write(std::ostream& os) const {
    const std::string hex = modulus_.to_hex();
    detail::write_magic(os, "ALUT");
    detail::write_u32(os, modulus_.width());
    detail::write_u32(os, k_);
    detail::write_u32(os, static_cast<std::uint32_t>(count_));
    detail::write_u32(os, base_exponent_);
    detail::write_u32(os, static_cast<std::uint32_t>(hex.size()));
    os.write(hex.data(), static_cast<std::streamsize>(hex.size()));
    const std::size_t bytes = (modulus_.width() + 7) / 8;
    for (const auto& e : entries_) detail::write_le(os, e, bytes);
    if (!os) throw FormatError("failed writing lookup table");
}

LookupTable LookupTable::read(std::istream& is) {
    detail::expect_magic(is, "ALUT");
    const unsigned n = detail::read_u32(is);
    const unsigned k = detail::read_u32(is);
    const std::size_t count = detail::read_u32(is);
    const unsigned base = detail::read_u32(is);
    const std::size_t hex_len = detail::read_u32(is);
    if (k == 0 || k > kMaxSegmentWidth) throw FormatError("table k out of range");
    if (hex_len > (n + 3) / 4 + 1) throw FormatError("modulus hex longer than its width");
    std::string hex(hex_len, '\0');
    if (!is.read(hex.data(), static_cast<std::streamsize>(hex_len))) throw FormatError("truncated modulus");
    Modulus m = Modulus::from_hex(hex, n);

    const std::size_t per_row = std::size_t{1} << k;
    const std::size_t bytes = (n + 7) / 8;
    std::vector<BigUint> entries;
    entries.reserve(count * per_row);
    for (std::size_t i = 0; i < count * per_row; ++i) {
        entries.push_back(detail::read_le(is, bytes));
        if (entries.back() >= m.value()) throw FormatError("stored residue not below modulus");
    }
    return LookupTable(std::move(m), k, count, base, std::move(entries));
}

unsigned overflow_width(std::size_t d) noexcept { return std::max(1u, bit_width_of(d)); }

LutTables LutTables::build(const Modulus& m, const LutGeometry& g) {
    if (m.width() != g.n) throw ConfigurationError("modulus width does not match geometry");
    LutTables t{LookupTable::precompute(m, g.k, g.d, g.n), std::nullopt};
    const unsigned w = overflow_width(g.d);
    if (w > g.k) {
        if (w > kMaxSegmentWidth) throw InfeasibleGeometryError("second-round overflow table too wide");
        t.overflow = LookupTable::precompute(m, w, 1, g.n);
    }
    return t;
}

std::uint64_t LutTables::storage_bits() const noexcept {
    return main.storage_bits() + (overflow ? overflow->storage_bits() : 0);
}

BigUint second_round(const BigUint& r0, const LookupTable& table) {
    const unsigned n = table.modulus().width();
    if (table.base_exponent() != n) throw ConfigurationError("second-round table must start at exponent n");
    const BigUint high = r0 >> n;
    if (high >= table.entries_per_row())
        throw BoundsError("second-round input has more than " + std::to_string(table.k()) + " bits above n");
    return extract_bits(r0, 0, n) + table.at(0, static_cast<std::uint32_t>(high));
}

LutReduction reduce_lut(const Operand& a, const LutTables& tables, const LutGeometry& g) {
    const unsigned n = g.n;
    const LookupTable& main = tables.main;
    const Modulus& m = main.modulus();
    if (a.width() != 2 * n)
        throw ConfigurationError("operand width " + std::to_string(a.width()) + " != 2n = " +
                                 std::to_string(2 * n));
    if (m.width() != n || main.k() != g.k || main.count() != g.d || main.base_exponent() != n)
        throw ConfigurationError("lookup tables do not match the geometry");

    const auto segments = segment_value(a.value() >> n, g.k, g.d);
    BigUint r0 = extract_bits(a.value(), 0, n);
    for (const auto& s : segments) r0 += main.at(s.index, s.value);

    BigUint r1 = second_round(r0, tables.second_round_table());
    BigUint r = r1;
    unsigned steps = 0;
    while (r >= m.value()) {
        r -= m.value();
        ++steps;
    }
    // R1 < 2^n + M <= 3M
    detail::check_invariant(steps <= 2, "LUT adjust exceeded two subtractions");

    const std::uint64_t tree_depth = ceil_log2(g.d) + 1;
    ReductionTrace trace;
    trace.add(1, Unit::lookup, std::to_string(g.d) + " parallel lookups");
    for (std::uint64_t level = 1; level <= tree_depth; ++level)
        trace.add(1 + level, Unit::tree_add, "tree level " + std::to_string(level) + " of " +
                                                 std::to_string(g.d + 1) + " inputs");
    const std::uint64_t t = 1 + tree_depth;
    trace.add(t + 1, Unit::lookup,
              tables.overflow ? "second round, overflow table" : "second round, table 0");
    trace.add(t + 2, Unit::tree_add, "second add");
    trace.add(t + 3, Unit::adjust, std::to_string(steps) + " subtractions");

    return LutReduction{Operand(std::move(r), n), std::move(trace), std::move(r0), std::move(r1), steps};
}

LutReduction reduce_lut(const Operand& a, const Modulus& m, const LutGeometry& geometry) {
    return reduce_lut(a, LutTables::build(m, geometry), geometry);
}

LutEngine::LutEngine(const Modulus& m, const LutGeometry& geometry)
    : geometry_(geometry), tables_(LutTables::build(m, geometry)) {}

}  // namespace allmod
