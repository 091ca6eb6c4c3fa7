#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "allmod/perf_model.hpp"
#include "allmod/table1.hpp"

namespace allmod {

/// Three methods' published efficiencies and the unit counts behind them.
struct CalibrationRow {
    unsigned n = 0;
    std::array<double, 3> efficiency{};
    std::array<ResourceCount, 3> counts{};
    double tp = 0.5;
};

struct CalibrationFit {
    unsigned n = 0;
    UnitCosts solved;                      // unrounded solution
    UnitCosts costs;                       // integer LUT equivalents, as stored
    std::array<double, 3> reproduced{};    // efficiencies recomputed from `costs`
    double max_abs_residual = 0;           // vs the published efficiencies
    double max_rel_residual = 0;
    bool matches_printed = false;          // every reproduced value rounds to the printed one
    bool constrained = false;              // exact solve was non-physical; see calibrate_cost_table
};

struct Calibration {
    CostTable table;
    std::vector<CalibrationFit> fits;
};

/// Per width, solves counts * (bram, adder, subtractor) = tp * 10^9 / efficiency
/// for the three methods and rounds to whole LUT equivalents.
///
/// Rows printed with too few significant digits can yield a non-positive
/// solution. Those rows fall back to a constrained fit: BRAM cost fixed at the
/// median of the exactly solved rows, adder = subtractor, chosen to minimise the
/// squared relative efficiency error.
///
/// Throws CalibrationError naming the row on a singular system or when no row
/// can be solved exactly.
Calibration calibrate_cost_table(std::span<const CalibrationRow> rows);

/// Calibration rows from published efficiencies and the model's own counts.
std::vector<CalibrationRow> model_calibration_rows(std::span<const Table1Row> rows,
                                                   std::uint64_t capacity_bits = kDefaultBramCapacityBits);

/// Writes the cost table with a per-row residual comment.
void write_calibration(std::ostream& os, const Calibration& cal);

/// Calibrated from the built-in published table; computed once.
const CostTable& default_cost_table();

}  // namespace allmod
