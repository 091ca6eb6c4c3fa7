#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace allmod {

enum class Unit { lookup, tree_add, serial_add, subtract, shift, fuse, adjust };

std::string_view to_string(Unit u) noexcept;
std::optional<Unit> parse_unit(std::string_view s) noexcept;

struct TraceEvent {
    std::uint64_t cycle = 0;
    Unit unit = Unit::lookup;
    std::string note;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Cycle-annotated record of datapath steps. Cycles never decrease and
/// total_cycles() is the cycle of the last event.
class ReductionTrace {
public:
    void add(std::uint64_t cycle, Unit unit, std::string note = {});

    const std::vector<TraceEvent>& events() const noexcept { return events_; }
    std::uint64_t total_cycles() const noexcept { return events_.empty() ? 0 : events_.back().cycle; }
    std::size_t count(Unit u) const noexcept;

    void write_csv(std::ostream& os) const;
    std::string to_json() const;

private:
    std::vector<TraceEvent> events_;
};

}  // namespace allmod
