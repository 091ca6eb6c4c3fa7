#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>

#include "allmod/lut_reduce.hpp"
#include "allmod/modmath.hpp"
#include "allmod/trace.hpp"

namespace allmod {

/// m = floor((n + k) / (k + 1)), where the table side (d + 1 cycles) and the
/// iterative side (m cycles) finish together.
unsigned balanced_m(unsigned n, unsigned k);

/// Split of a 2n-bit operand: the high n - m bits go through tables, the low
/// n + m bits through m shift-subtract iterations.
struct HybridSplit {
    unsigned n = 0;
    unsigned k = 0;
    unsigned m = 0;
    unsigned width_tree = 0;   // adder-tree inputs alongside the serial accumulator

    static HybridSplit make(unsigned n, unsigned k, unsigned m, unsigned width_tree = 0);
    static HybridSplit balanced(unsigned n, unsigned k) { return make(n, k, balanced_m(n, k)); }

    unsigned high_width() const noexcept { return n - m; }
    unsigned low_width() const noexcept { return n + m; }
    std::size_t d() const noexcept { return (high_width() + k - 1) / k; }
    /// Input width of the overflow table, ceil(log2(d + 1)) (at least 1).
    unsigned overflow_width() const noexcept;

    friend bool operator==(const HybridSplit&, const HybridSplit&) = default;
};

/// Returns (high, low) with high * 2^(n+m) + low == a.
std::pair<BigUint, BigUint> split_operand(const Operand& a, const HybridSplit& split);

/// Main tables start at exponent n + m; the overflow table holds residues of
/// (accumulator bits above n) * 2^n.
struct HybridTables {
    LookupTable main;
    LookupTable overflow;

    static HybridTables build(const Modulus& m, const HybridSplit& split);

    std::uint64_t storage_bits() const noexcept { return main.storage_bits() + overflow.storage_bits(); }

    /// True when the overflow table fits in the spare capacity the main tables
    /// leave in their BRAMs, so no extra BRAM is needed.
    bool overflow_fits_spare(std::uint64_t capacity_bits) const noexcept;

    /// Bundle: "AHYB", u32 n, k, m, width_tree, then main and overflow tables
    /// in the LookupTable binary format.
    void write(std::ostream& os, const HybridSplit& split) const;
    static std::pair<HybridSplit, HybridTables> read(std::istream& is);
};

struct Accumulation {
    BigUint sum;
    std::uint64_t cycles = 0;
};

/// One add per cycle over the lookups.
Accumulation serial_accumulate(std::span<const BigUint> lookups);

struct FuseResult {
    BigUint value;
    BigUint pre_adjust;
    unsigned subtractions = 0;
};

/// (acc_low_n + overflow_residue + iter_result) mod M via one add and at most
/// four conditional subtracts. Throws InvariantError on precondition failure.
FuseResult fuse_and_adjust(const BigUint& acc_low_n, const BigUint& overflow_residue,
                           const BigUint& iter_result, const Modulus& m);

struct HybridReduction {
    Operand residue;
    ReductionTrace trace;
    BigUint fused_sum;         // before adjust
    unsigned adjust_steps = 0;
    unsigned overflow_index = 0;
};

HybridReduction reduce_hybrid(const Operand& a, const Modulus& m, const HybridSplit& split,
                              const HybridTables& tables);

class HybridEngine {
public:
    HybridEngine(const Modulus& m, const HybridSplit& split)
        : modulus_(m), split_(split), tables_(HybridTables::build(m, split)) {}

    const HybridSplit& split() const noexcept { return split_; }
    const HybridTables& tables() const noexcept { return tables_; }
    HybridReduction reduce(const Operand& a) const { return reduce_hybrid(a, modulus_, split_, tables_); }

private:
    Modulus modulus_;
    HybridSplit split_;
    HybridTables tables_;
};

}  // namespace allmod
