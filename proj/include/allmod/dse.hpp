#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "allmod/errors.hpp"
#include "allmod/perf_model.hpp"

namespace allmod {

struct Constraints {
    std::optional<std::uint64_t> latency_req;   // cycles, compared against core latency
    std::optional<double> area_req;             // LUT equivalents
    Throughput tp = Throughput::max();

    void validate() const;
};

/// One (m, width_tree) design point with its modelled cost.
struct Scheme {
    unsigned m = 0;
    unsigned width_tree = 0;
    std::uint64_t latency = 0;       // core latency, the constrained figure
    std::uint64_t latency_e2e = 0;   // core + fusion/adjust cycles
    double area = 0;
    ResourceCount resources;
    double efficiency = 0;

    friend bool operator==(const Scheme&, const Scheme&) = default;
};

Scheme evaluate_scheme(unsigned n, unsigned k, unsigned m, unsigned width_tree, const Throughput& tp,
                       const UnitCosts& costs);

/// Latency and area checks against the constraints.
bool satisfies(const Scheme& s, const Constraints& c);

/// Lower-or-equal latency and area, strictly lower in at least one.
bool dominates(const Scheme& a, const Scheme& b);

/// Calls f(scheme) for every feasible point, ordered by (m, width_tree).
template <class F>
void for_each_feasible(unsigned n, unsigned k, const Constraints& c, const CostTable& costs, F&& f) {
    c.validate();
    const UnitCosts& unit = costs.at(n);
    if (k == 0) throw ConfigurationError("k must be positive");
    for (unsigned m = 0; m <= n; ++m)
        for (unsigned w = 0; w <= n - m; ++w) {
            Scheme s = evaluate_scheme(n, k, m, w, c.tp, unit);
            if (satisfies(s, c)) f(s);
        }
}

/// Every feasible scheme, ordered by (m, width_tree).
std::vector<Scheme> search(unsigned n, unsigned k, const Constraints& c, const CostTable& costs);

/// Non-dominated subset by sort-then-sweep, ascending latency. Equal
/// (latency, area) pairs keep the smaller m, then the smaller width_tree.
std::vector<Scheme> pareto(std::span<const Scheme> schemes);

/// Streaming equivalent of pareto(): keeps the best scheme per latency value,
/// so memory is bounded by the number of distinct latencies.
class ParetoAccumulator {
public:
    void offer(const Scheme& s);
    std::vector<Scheme> front() const;
    std::uint64_t offered() const noexcept { return offered_; }

private:
    std::vector<std::optional<Scheme>> best_by_latency_;
    std::uint64_t offered_ = 0;
};

struct FrontierEntry {
    Throughput tp;
    Scheme scheme;
};

/// search + pareto for each throughput in `tps`.
std::vector<FrontierEntry> frontier_report(unsigned n, unsigned k, std::span<const Throughput> tps,
                                           const CostTable& costs, Constraints base = {});

/// CSV columns:
/// m,width_tree,latency_core,latency_e2e,brams,adders,subtractors,area,efficiency,pareto_flag
struct SchemeRecord {
    Scheme scheme;
    bool pareto = false;

    friend bool operator==(const SchemeRecord&, const SchemeRecord&) = default;
};

class SchemeCsvWriter {
public:
    explicit SchemeCsvWriter(std::ostream& os, bool with_tp = false);
    ~SchemeCsvWriter();
    SchemeCsvWriter(const SchemeCsvWriter&) = delete;
    SchemeCsvWriter& operator=(const SchemeCsvWriter&) = delete;

    void write(const Scheme& s, bool pareto_flag, const Throughput* tp = nullptr);
    void flush();

private:
    std::ostream& os_;
    std::string buf_;
};

std::vector<SchemeRecord> read_schemes_csv(std::istream& is);

/// Structured text (JSON) that echoes the search inputs with the schemes.
void write_schemes_json(std::ostream& os, unsigned n, unsigned k, const Constraints& c, const UnitCosts& costs,
                        std::span<const SchemeRecord> records);

struct SchemeDocument {
    unsigned n = 0;
    unsigned k = 0;
    Constraints constraints;
    UnitCosts costs;
    std::vector<SchemeRecord> records;
};

SchemeDocument read_schemes_json(std::istream& is);

}  // namespace allmod
