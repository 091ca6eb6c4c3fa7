#include "allmod/hybrid_reduce.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "allmod/iter_reduce.hpp"
#include "binary_io.hpp"

namespace allmod {

unsigned balanced_m(unsigned n, unsigned k) {
    if (k == 0) throw ConfigurationError("k must be positive");
    return (n + k) / (k + 1);
}

HybridSplit HybridSplit::make(unsigned n, unsigned k, unsigned m, unsigned width_tree) {
    if (n < 2) throw ConfigurationError("modulus width must be at least 2 bits");
    if (k == 0 || k > kMaxSegmentWidth) throw ConfigurationError("segment width k out of range");
    if (m > n) throw ConfigurationError("split point m=" + std::to_string(m) + " exceeds n=" + std::to_string(n));
    if (width_tree > n - m)
        throw ConfigurationError("width_tree " + std::to_string(width_tree) + " exceeds n - m");
    return HybridSplit{n, k, m, width_tree};
}

unsigned HybridSplit::overflow_width() const noexcept { return std::max(1u, bit_width_of(d())); }

std::pair<BigUint, BigUint> split_operand(const Operand& a, const HybridSplit& split) {
    if (a.width() != 2 * split.n) throw ConfigurationError("operand width must be 2n");
    const unsigned low_w = split.low_width();
    return {a.value() >> low_w, extract_bits(a.value(), 0, low_w)};
}

HybridTables HybridTables::build(const Modulus& m, const HybridSplit& split) {
    if (m.width() != split.n) throw ConfigurationError("modulus width does not match split");
    return HybridTables{LookupTable::precompute(m, split.k, split.d(), split.n + split.m),
                        LookupTable::precompute(m, split.overflow_width(), 1, split.n)};
}

bool HybridTables::overflow_fits_spare(std::uint64_t capacity_bits) const noexcept {
    const std::uint64_t per_table = main.entries_per_row() * std::uint64_t{main.modulus().width()};
    if (per_table > capacity_bits) return false;
    return overflow.storage_bits() <= main.count() * (capacity_bits - per_table);
}

void HybridTables::write(std::ostream& os, const HybridSplit& split) const {
    detail::write_magic(os, "AHYB");
    detail::write_u32(os, split.n);
    detail::write_u32(os, split.k);
    detail::write_u32(os, split.m);
    detail::write_u32(os, split.width_tree);
    main.write(os);
    overflow.write(os);
}

std::pair<HybridSplit, HybridTables> HybridTables::read(std::istream& is) {
    detail::expect_magic(is, "AHYB");
    const unsigned n = detail::read_u32(is);
    const unsigned k = detail::read_u32(is);
    const unsigned m = detail::read_u32(is);
    const unsigned wt = detail::read_u32(is);
    auto split = HybridSplit::make(n, k, m, wt);
    auto main = LookupTable::read(is);
    auto overflow = LookupTable::read(is);
    if (main.k() != k || main.count() != split.d() || main.base_exponent() != n + m ||
        overflow.base_exponent() != n || overflow.count() != 1 || overflow.k() != split.overflow_width() ||
        !(main.modulus() == overflow.modulus()) || main.modulus().width() != n)
        throw FormatError("hybrid bundle tables do not match its header");
    return {split, HybridTables{std::move(main), std::move(overflow)}};
}

Accumulation serial_accumulate(std::span<const BigUint> lookups) {
    if (lookups.empty()) throw BoundsError("serial accumulation needs at least one input");
    Accumulation acc;
    for (const auto& v : lookups) {
        acc.sum += v;
        ++acc.cycles;
    }
    return acc;
}

FuseResult fuse_and_adjust(const BigUint& acc_low_n, const BigUint& overflow_residue,
                           const BigUint& iter_result, const Modulus& m) {
    const BigUint& mod = m.value();
    detail::check_invariant(acc_low_n < pow2(m.width()), "fusion: accumulator low part not below 2^n");
    detail::check_invariant(overflow_residue < mod, "fusion: overflow residue not below M");
    detail::check_invariant(iter_result < (mod << 1), "fusion: iterative result not below 2M");

    FuseResult out;
    out.pre_adjust = acc_low_n + overflow_residue + iter_result;
    out.value = out.pre_adjust;
    while (out.value >= mod) {
        out.value -= mod;
        ++out.subtractions;
    }
    detail::check_invariant(out.subtractions <= 4, "fusion adjust exceeded four subtractions");
    return out;
}

namespace {

void check_tables(const Modulus& m, const HybridSplit& split, const HybridTables& t) {
    if (m.width() != split.n || !(t.main.modulus() == m) || !(t.overflow.modulus() == m))
        throw ConfigurationError("hybrid tables were built for a different modulus");
    if (t.main.k() != split.k || t.main.count() != split.d() || t.main.base_exponent() != split.n + split.m)
        throw ConfigurationError("main tables do not match the split");
    if (t.overflow.count() != 1 || t.overflow.base_exponent() != split.n ||
        t.overflow.k() != split.overflow_width())
        throw ConfigurationError("overflow table does not match the split");
}

}  // namespace

HybridReduction reduce_hybrid(const Operand& a, const Modulus& m, const HybridSplit& split,
                              const HybridTables& tables) {
    check_tables(m, split, tables);
    const unsigned n = split.n;
    const std::size_t d = split.d();
    auto [high, low] = split_operand(a, split);

    // Workload I: parallel lookup, then accumulate
    BigUint acc = 0;
    if (d > 0) {
        const auto segments = segment_value(high, split.k, d);
        std::vector<BigUint> lookups;
        lookups.reserve(d);
        for (const auto& s : segments) lookups.push_back(tables.main.at(s.index, s.value));
        acc = serial_accumulate(lookups).sum;
    }
    const BigUint acc_high = acc >> n;
    detail::check_invariant(bit_length(acc_high) <= split.overflow_width(),
                            "accumulator overflow wider than the overflow table");
    const auto overflow_index = acc_high.convert_to<std::uint32_t>();
    const BigUint& overflow_residue = tables.overflow.at(0, overflow_index);

    // Workload II: m aligned iterations leave a value below 2M
    BigUint iter_result = low;
    ReductionTrace right;
    if (split.m > 0) {
        auto r = reduce_iterative_partial(Operand(low, split.low_width()), m,
                                          IterConfig::make(split.low_width(), n));
        iter_result = std::move(r.value);
        right = std::move(r.trace);
    }

    FuseResult fused = fuse_and_adjust(extract_bits(acc, 0, n), overflow_residue, iter_result, m);

    // Schedule: both workloads start at cycle 1 and run side by side.
    const std::uint64_t serial = d > split.width_tree ? d - split.width_tree : 0;
    const std::uint64_t depth = split.width_tree <= 1 ? 0 : ceil_log2(split.width_tree);
    std::vector<TraceEvent> events;
    events.push_back({1, Unit::lookup, std::to_string(d) + " parallel lookups"});
    for (std::uint64_t c = 1; c <= serial; ++c)
        events.push_back({1 + c, Unit::serial_add, "accumulate lookup " + std::to_string(c)});
    for (std::uint64_t level = 1; level <= depth; ++level)
        events.push_back({1 + level, Unit::tree_add, "tree level " + std::to_string(level)});
    events.insert(events.end(), right.events().begin(), right.events().end());
    std::stable_sort(events.begin(), events.end(),
                     [](const TraceEvent& x, const TraceEvent& y) { return x.cycle < y.cycle; });

    const std::uint64_t core = std::max<std::uint64_t>(1 + std::max(serial, depth), split.m);
    ReductionTrace trace;
    for (auto& e : events) trace.add(e.cycle, e.unit, std::move(e.note));
    trace.add(core + 1, Unit::lookup, "overflow lookup index " + std::to_string(overflow_index));
    trace.add(core + 2, Unit::fuse, "fuse three partial results");
    trace.add(core + 3, Unit::adjust, "conditional subtracts");
    trace.add(core + 4, Unit::adjust, std::to_string(fused.subtractions) + " subtractions selected");

    return HybridReduction{Operand(std::move(fused.value), n), std::move(trace), std::move(fused.pre_adjust),
                           fused.subtractions, overflow_index};
}

}  // namespace allmod
