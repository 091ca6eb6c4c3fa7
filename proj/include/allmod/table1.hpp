#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "allmod/lut_reduce.hpp"
#include "allmod/perf_model.hpp"

namespace allmod {

/// Column order used for every per-method triple.
enum class Method : std::size_t { lut = 0, iterative = 1, allmod = 2 };

/// One row of the published comparison of the three methods at MaxTP.
struct Table1Row {
    unsigned n = 0;
    std::array<double, 3> efficiency{};        // Ops/cycle per 10^9 LUTs
    double improvement = 0;                    // allmod / lut, as printed
    std::array<std::uint64_t, 3> latency{};    // cycles
    std::array<ResourceCount, 3> breakdown{};
    unsigned hybrid_high = 0;                  // n - m
    unsigned hybrid_low = 0;                   // n + m
    std::string note;

    friend bool operator==(const Table1Row&, const Table1Row&) = default;
};

/// The printed values, verbatim (including known misprints, see note).
std::span<const Table1Row> table1_printed();

/// CSV with header
/// n,eff_lut,eff_iter,eff_allmod,improvement,lat_lut,lat_iter,lat_allmod,
/// bd_lut,bd_iter,bd_allmod,hybrid_workloads,note
/// where bd_* are "b;a;s" and hybrid_workloads is "high:low". '#' lines are comments.
std::vector<Table1Row> read_table1(std::istream& is);
void write_table1(std::ostream& os, std::span<const Table1Row> rows);

/// Everything the analytical model predicts for one width at MaxTP.
struct Table1Model {
    unsigned n = 0;
    LutGeometry geometry;
    unsigned m = 0;
    std::array<double, 3> area{};
    std::array<double, 3> efficiency{};
    double improvement = 0;
    std::array<std::uint64_t, 3> latency{};
    std::array<ResourceCount, 3> breakdown{};
    unsigned hybrid_high = 0;
    unsigned hybrid_low = 0;
};

/// Breakdown and latency columns only; needs no cost table.
Table1Model model_structure(unsigned n, std::uint64_t capacity_bits = kDefaultBramCapacityBits);

/// Full row, with areas and efficiencies from `costs`.
Table1Model model_row(unsigned n, const CostTable& costs,
                      std::uint64_t capacity_bits = kDefaultBramCapacityBits);

/// Rounds half away from zero to `decimals` places, as a printed table does.
double round_to(double v, int decimals);

}  // namespace allmod
