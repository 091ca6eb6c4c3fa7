#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace allmod {

/// Completed reductions per cycle, kept as an exact fraction.
/// 0 < tp <= 1/2: each reduction occupies the BRAM read port for two cycles.
class Throughput {
public:
    Throughput(std::uint64_t num, std::uint64_t den);

    static Throughput max() { return {1, 2}; }
    /// Accepts "1/2", "0.5", "0.0625" or "1".
    static Throughput parse(std::string_view text);

    std::uint64_t num() const noexcept { return num_; }
    std::uint64_t den() const noexcept { return den_; }
    double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// ceil(units * tp): replicas needed to sustain this throughput.
    std::uint64_t replicas(std::uint64_t units) const noexcept;

    std::string to_string() const;

    friend bool operator==(const Throughput&, const Throughput&) = default;

private:
    std::uint64_t num_;
    std::uint64_t den_;
};

struct ResourceCount {
    std::uint64_t brams = 0;
    std::uint64_t adders = 0;
    std::uint64_t subtractors = 0;

    std::string to_string() const;   // "b;a;s"
    friend bool operator==(const ResourceCount&, const ResourceCount&) = default;
};

/// Depth of a w-input adder tree; 0 when there is no tree (w <= 1).
unsigned tree_depth(std::uint64_t width);

std::uint64_t latency_iterative(unsigned n);

/// lookup + (ceil(log2 d) + 1) tree levels + second lookup + second add + adjust,
/// with d = ceil(n / k).
std::uint64_t latency_lut_based(unsigned n, unsigned k);

/// max(1 + max(d - width_tree, tree_depth(width_tree)), m), d = ceil((n-m)/k).
/// This is the figure the design-space search constrains.
std::uint64_t latency_hybrid_core(unsigned n, unsigned k, unsigned m, unsigned width_tree);

/// Core latency plus overflow lookup, fusion add and two adjust cycles.
std::uint64_t latency_hybrid_end_to_end(unsigned n, unsigned k, unsigned m, unsigned width_tree);

/// BRAMs ceil((n-m)/k); adders max(0, 2w-1) + ceil(max(0, d-w) * tp);
/// subtractors ceil(m * tp).
ResourceCount resources_hybrid(unsigned n, unsigned k, unsigned m, unsigned width_tree, const Throughput& tp);

/// (d, 2d - 1, 1) with d = ceil(n / k).
ResourceCount resources_lut_baseline(unsigned n, unsigned k);

/// (0, 0, ceil(n * tp)).
ResourceCount resources_iterative_baseline(unsigned n, const Throughput& tp);

/// Area of one BRAM / adder / subtractor at a given width, in LUT equivalents.
struct UnitCosts {
    double bram = 0;
    double adder = 0;
    double subtractor = 0;

    friend bool operator==(const UnitCosts&, const UnitCosts&) = default;
};

/// Per-width unit costs. Text form: one "n, area_bram, area_adder,
/// area_subtractor" record per line; '#' starts a comment.
class CostTable {
public:
    void set(unsigned n, const UnitCosts& costs);
    bool contains(unsigned n) const noexcept { return costs_.count(n) != 0; }
    /// Throws CalibrationRequiredError when n is missing.
    const UnitCosts& at(unsigned n) const;
    const std::map<unsigned, UnitCosts>& entries() const noexcept { return costs_; }
    bool empty() const noexcept { return costs_.empty(); }

    /// Throws CalibrationError if any cost is non-positive, or if adder or
    /// subtractor cost decreases with width.
    void validate() const;

    void write(std::ostream& os) const;
    static CostTable read(std::istream& is);
    static CostTable load(const std::string& path);

    friend bool operator==(const CostTable&, const CostTable&) = default;

private:
    std::map<unsigned, UnitCosts> costs_;
};

double area_estimate(const ResourceCount& rc, const CostTable& costs, unsigned n);
double area_estimate(const ResourceCount& rc, const UnitCosts& costs);

/// Ops/cycle per 10^9 LUT equivalents.
double area_efficiency(double tp, double area);

}  // namespace allmod
