#include "allmod/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "allmod/errors.hpp"

namespace allmod {

namespace {

std::array<double, 3> targets(const CalibrationRow& r) {
    std::array<double, 3> t{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(r.efficiency[i] > 0) || !std::isfinite(r.efficiency[i]))
            throw CalibrationError("row n=" + std::to_string(r.n) + ": efficiencies must be positive");
        t[i] = r.tp * 1e9 / r.efficiency[i];
    }
    return t;
}

void score(CalibrationFit& fit, const CalibrationRow& row) {
    fit.max_abs_residual = 0;
    fit.max_rel_residual = 0;
    fit.matches_printed = true;
    for (std::size_t i = 0; i < 3; ++i) {
        fit.reproduced[i] = area_efficiency(row.tp, area_estimate(row.counts[i], fit.costs));
        const double diff = fit.reproduced[i] - row.efficiency[i];
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(diff));
        fit.max_rel_residual = std::max(fit.max_rel_residual, std::abs(diff) / row.efficiency[i]);
        if (round_to(fit.reproduced[i], 2) != round_to(row.efficiency[i], 2)) fit.matches_printed = false;
    }
}

bool physical(const UnitCosts& c) { return c.bram >= 0.5 && c.adder >= 0.5 && c.subtractor >= 0.5; }

}  // namespace

Calibration calibrate_cost_table(std::span<const CalibrationRow> rows) {
    if (rows.empty()) throw CalibrationError("no calibration rows");

    std::vector<CalibrationFit> fits(rows.size());
    std::vector<std::size_t> deferred;
    std::vector<double> exact_brams;

    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const auto t = targets(row);
        Eigen::Matrix3d a;
        Eigen::Vector3d b;
        for (int i = 0; i < 3; ++i) {
            a(i, 0) = static_cast<double>(row.counts[i].brams);
            a(i, 1) = static_cast<double>(row.counts[i].adders);
            a(i, 2) = static_cast<double>(row.counts[i].subtractors);
            b(i) = t[i];
        }
        Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
        if (lu.rank() < 3)
            throw CalibrationError("row n=" + std::to_string(row.n) + ": singular count matrix (rank " +
                                   std::to_string(lu.rank()) + ")");
        const Eigen::Vector3d x = lu.solve(b);

        auto& fit = fits[r];
        fit.n = row.n;
        fit.solved = {x(0), x(1), x(2)};
        fit.costs = {std::round(x(0)), std::round(x(1)), std::round(x(2))};
        if (physical(fit.costs)) {
            score(fit, row);
            exact_brams.push_back(fit.costs.bram);
        } else {
            deferred.push_back(r);
        }
    }

    if (!deferred.empty()) {
        if (exact_brams.empty())
            throw CalibrationError("row n=" + std::to_string(rows[deferred.front()].n) +
                                   ": no row solves to positive costs, cannot anchor the BRAM cost");
        std::sort(exact_brams.begin(), exact_brams.end());
        const std::size_t mid = exact_brams.size() / 2;
        const double bram = exact_brams.size() % 2 ? exact_brams[mid]
                                                   : std::round((exact_brams[mid - 1] + exact_brams[mid]) / 2);
        for (std::size_t r : deferred) {
            const auto& row = rows[r];
            const auto t = targets(row);
            // minimise sum(((bram*b + y*(a+s)) - T) / T)^2 over y
            double num = 0, den = 0;
            for (std::size_t i = 0; i < 3; ++i) {
                const double c = static_cast<double>(row.counts[i].adders + row.counts[i].subtractors);
                const double w = 1.0 / (t[i] * t[i]);
                num += w * c * (t[i] - bram * static_cast<double>(row.counts[i].brams));
                den += w * c * c;
            }
            auto& fit = fits[r];
            const double y = std::round(num / den);
            if (den == 0 || !(y > 0))
                throw CalibrationError("row n=" + std::to_string(row.n) + ": constrained fit has no positive solution");
            fit.costs = {bram, y, y};
            fit.constrained = true;
            score(fit, row);
        }
    }

    Calibration cal;
    for (const auto& f : fits) cal.table.set(f.n, f.costs);
    cal.table.validate();
    cal.fits = std::move(fits);
    return cal;
}

std::vector<CalibrationRow> model_calibration_rows(std::span<const Table1Row> rows, std::uint64_t capacity_bits) {
    std::vector<CalibrationRow> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        const Table1Model m = model_structure(r.n, capacity_bits);
        out.push_back({r.n, r.efficiency, m.breakdown, Throughput::max().value()});
    }
    return out;
}

void write_calibration(std::ostream& os, const Calibration& cal) {
    cal.table.write(os);
    std::ostringstream line;
    line << std::setprecision(6);
    for (const auto& f : cal.fits) {
        line.str("");
        line << "# n=" << f.n << " fit=" << (f.constrained ? "constrained" : "exact")
             << " max_abs_residual=" << f.max_abs_residual << " max_rel_residual=" << f.max_rel_residual
             << " matches_printed=" << (f.matches_printed ? "yes" : "no");
        os << line.str() << '\n';
    }
}

const CostTable& default_cost_table() {
    static const CostTable table = [] {
        const auto rows = model_calibration_rows(table1_printed());
        return calibrate_cost_table(rows).table;
    }();
    return table;
}

}  // namespace allmod
