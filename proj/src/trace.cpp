#include "allmod/trace.hpp"

#include <algorithm>
#include <array>
#include <ostream>

#include <nlohmann/json.hpp>

#include "allmod/errors.hpp"

namespace allmod {

namespace {
constexpr std::array<std::string_view, 7> kUnitNames = {
    "lookup", "tree_add", "serial_add", "subtract", "shift", "fuse", "adjust"};
}

std::string_view to_string(Unit u) noexcept { return kUnitNames[static_cast<std::size_t>(u)]; }

std::optional<Unit> parse_unit(std::string_view s) noexcept {
    for (std::size_t i = 0; i < kUnitNames.size(); ++i)
        if (kUnitNames[i] == s) return static_cast<Unit>(i);
    return std::nullopt;
}

void ReductionTrace::add(std::uint64_t cycle, Unit unit, std::string note) {
    detail::check_invariant(events_.empty() || cycle >= events_.back().cycle,
                            "trace cycles must be non-decreasing");
    events_.push_back({cycle, unit, std::move(note)});
}

std::size_t ReductionTrace::count(Unit u) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(events_.begin(), events_.end(), [u](const TraceEvent& e) { return e.unit == u; }));
}

namespace {
// RFC 4180 quoting for a free-text field.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}
}  // namespace

void ReductionTrace::write_csv(std::ostream& os) const {
    os << "cycle,unit,note\n";
    for (const auto& e : events_) os << e.cycle << ',' << to_string(e.unit) << ',' << csv_field(e.note) << '\n';
}

std::string ReductionTrace::to_json() const {
    nlohmann::json j;
    j["total_cycles"] = total_cycles();
    auto& ev = j["events"] = nlohmann::json::array();
    for (const auto& e : events_)
        ev.push_back({{"cycle", e.cycle}, {"unit", std::string(to_string(e.unit))}, {"note", e.note}});
    return j.dump(2);
}

}  // namespace allmod
