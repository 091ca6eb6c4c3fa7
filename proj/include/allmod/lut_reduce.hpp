#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "allmod/modmath.hpp"
#include "allmod/trace.hpp"

namespace allmod {

inline constexpr std::uint64_t kDefaultBramCapacityBits = 36864;

/// How an n-bit residue table maps onto a fixed-capacity BRAM.
struct LutGeometry {
    unsigned n = 0;
    unsigned k = 0;                 // segment (table input) width
    std::size_t d = 0;              // segments covering the high n bits
    std::uint64_t capacity_bits = kDefaultBramCapacityBits;

    /// Largest k with 2^k * n <= capacity_bits.
    static LutGeometry derive(unsigned n, std::uint64_t capacity_bits = kDefaultBramCapacityBits);

    /// Uses a caller-chosen k; it must still satisfy the capacity bound.
    static LutGeometry with_k(unsigned n, unsigned k,
                              std::uint64_t capacity_bits = kDefaultBramCapacityBits);

    friend bool operator==(const LutGeometry&, const LutGeometry&) = default;
};

/// Rows of precomputed positional residues:
/// row i, entry a holds (a * 2^(base_exponent + k*i)) mod M.
class LookupTable {
public:
    static LookupTable precompute(const Modulus& m, unsigned k, std::size_t count,
                                  unsigned base_exponent);

    const Modulus& modulus() const noexcept { return modulus_; }
    unsigned k() const noexcept { return k_; }
    std::size_t count() const noexcept { return count_; }
    unsigned base_exponent() const noexcept { return base_exponent_; }
    std::size_t entries_per_row() const noexcept { return std::size_t{1} << k_; }

    const BigUint& at(std::size_t row, std::uint32_t index) const;

    /// Bits of storage: count * 2^k * n.
    std::uint64_t storage_bits() const noexcept;

    /// Binary layout: "ALUT", u32 n, u32 k, u32 count, u32 base_exponent,
    /// u32 hex length, modulus hex, then row-major residues, each
    /// ceil(n/8) bytes little-endian. All integers little-endian.
    void write(std::ostream& os) const;
    static LookupTable read(std::istream& is);

    friend bool operator==(const LookupTable&, const LookupTable&) = default;

private:
    LookupTable(Modulus m, unsigned k, std::size_t count, unsigned base, std::vector<BigUint> entries);

    Modulus modulus_;
    unsigned k_;
    std::size_t count_;
    unsigned base_exponent_;
    std::vector<BigUint> entries_;
};

/// Input width of the second-round lookup: bits of R0 above position n,
/// i.e. ceil(log2(d + 1)) for d first-round tables (at least 1).
unsigned overflow_width(std::size_t d) noexcept;

/// Main tables (base exponent n) plus, when the overflow is wider than k, a
/// dedicated single-row table for the second round.
struct LutTables {
    LookupTable main;
    std::optional<LookupTable> overflow;

    static LutTables build(const Modulus& m, const LutGeometry& geometry);

    /// Row 0 of `main` when the overflow fits in k bits, else `overflow`.
    const LookupTable& second_round_table() const noexcept { return overflow ? *overflow : main; }
    std::uint64_t storage_bits() const noexcept;

    friend bool operator==(const LutTables&, const LutTables&) = default;
};

/// One lookup of the bits of r0 above position n in row 0 of `table` (base
/// exponent n), added to the low n bits. The result is < 2^n + M.
/// Throws BoundsError when those bits exceed the table's input width.
BigUint second_round(const BigUint& r0, const LookupTable& table);

struct LutReduction {
    Operand residue;
    ReductionTrace trace;
    BigUint first_sum;       // R0
    BigUint pre_adjust;      // R1
    unsigned adjust_steps = 0;
};

/// Two-round table reduction of a 2n-bit operand against prebuilt tables.
LutReduction reduce_lut(const Operand& a, const LutTables& tables, const LutGeometry& geometry);

/// Builds the tables for m first. Prefer LutEngine when reducing many operands.
LutReduction reduce_lut(const Operand& a, const Modulus& m, const LutGeometry& geometry);

/// Immutable tables + geometry for one modulus; reduce() is safe to call
/// concurrently.
class LutEngine {
public:
    LutEngine(const Modulus& m, const LutGeometry& geometry);

    const LutGeometry& geometry() const noexcept { return geometry_; }
    const LutTables& tables() const noexcept { return tables_; }
    LutReduction reduce(const Operand& a) const { return reduce_lut(a, tables_, geometry_); }

private:
    LutGeometry geometry_;
    LutTables tables_;
};

}  // namespace allmod
