#include "allmod/dse.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "allmod/errors.hpp"

namespace allmod {

void Constraints::validate() const {
    if (area_req && !(*area_req >= 0)) throw ConfigurationError("area requirement must be non-negative");
}

Scheme evaluate_scheme(unsigned n, unsigned k, unsigned m, unsigned width_tree, const Throughput& tp,
                       const UnitCosts& costs) {
    Scheme s;
    s.m = m;
    s.width_tree = width_tree;
    s.latency = latency_hybrid_core(n, k, m, width_tree);
    s.latency_e2e = s.latency + 4;
    s.resources = resources_hybrid(n, k, m, width_tree, tp);
    s.area = area_estimate(s.resources, costs);
    s.efficiency = s.area > 0 ? area_efficiency(tp.value(), s.area) : 0.0;
    return s;
}

bool satisfies(const Scheme& s, const Constraints& c) {
    if (c.latency_req && s.latency > *c.latency_req) return false;
    if (c.area_req && s.area > *c.area_req) return false;
    return true;
}

bool dominates(const Scheme& a, const Scheme& b) {
    return a.latency <= b.latency && a.area <= b.area && (a.latency < b.latency || a.area < b.area);
}

std::vector<Scheme> search(unsigned n, unsigned k, const Constraints& c, const CostTable& costs) {
    std::vector<Scheme> out;
    for_each_feasible(n, k, c, costs, [&](const Scheme& s) { out.push_back(s); });
    return out;
}

namespace {
auto order_key(const Scheme& s) { return std::tie(s.latency, s.area, s.m, s.width_tree); }
}  // namespace

std::vector<Scheme> pareto(std::span<const Scheme> schemes) {
    std::vector<Scheme> sorted(schemes.begin(), schemes.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Scheme& a, const Scheme& b) { return order_key(a) < order_key(b); });
    std::vector<Scheme> front;
    for (const auto& s : sorted)
        if (front.empty() || s.area < front.back().area) front.push_back(s);
    return front;
}

void ParetoAccumulator::offer(const Scheme& s) {
    ++offered_;
    if (s.latency >= best_by_latency_.size()) best_by_latency_.resize(s.latency + 1);
    auto& slot = best_by_latency_[s.latency];
    if (!slot || std::tie(s.area, s.m, s.width_tree) < std::tie(slot->area, slot->m, slot->width_tree)) slot = s;
}

std::vector<Scheme> ParetoAccumulator::front() const {
    std::vector<Scheme> out;
    for (const auto& slot : best_by_latency_)
        if (slot && (out.empty() || slot->area < out.back().area)) out.push_back(*slot);
    return out;
}

std::vector<FrontierEntry> frontier_report(unsigned n, unsigned k, std::span<const Throughput> tps,
                                           const CostTable& costs, Constraints base) {
    if (tps.empty()) throw ConfigurationError("throughput list is empty");
    std::vector<FrontierEntry> out;
    for (const auto& tp : tps) {
        base.tp = tp;
        ParetoAccumulator acc;
        for_each_feasible(n, k, base, costs, [&](const Scheme& s) { acc.offer(s); });
        for (auto& s : acc.front()) out.push_back({tp, std::move(s)});
    }
    return out;
}

namespace {

void append_u64(std::string& buf, std::uint64_t v) {
    char tmp[24];
    auto [p, ec] = std::to_chars(tmp, tmp + sizeof tmp, v);
    buf.append(tmp, p);
}

void append_double(std::string& buf, double v) {
    char tmp[32];
    auto [p, ec] = std::to_chars(tmp, tmp + sizeof tmp, v);
    buf.append(tmp, p);
}

constexpr const char* kSchemeHeader =
    "m,width_tree,latency_core,latency_e2e,brams,adders,subtractors,area,efficiency,pareto_flag";

}  // namespace

SchemeCsvWriter::SchemeCsvWriter(std::ostream& os, bool with_tp) : os_(os) {
    buf_.reserve(1 << 20);
    if (with_tp) buf_ += "tp,";
    buf_ += kSchemeHeader;
    buf_ += '\n';
}

SchemeCsvWriter::~SchemeCsvWriter() {
    try {
        flush();
    } catch (...) {
    }
}

void SchemeCsvWriter::write(const Scheme& s, bool pareto_flag, const Throughput* tp) {
    if (tp) {
        buf_ += tp->to_string();
        buf_ += ',';
    }
    append_u64(buf_, s.m);
    buf_ += ',';
    append_u64(buf_, s.width_tree);
    buf_ += ',';
    append_u64(buf_, s.latency);
    buf_ += ',';
    append_u64(buf_, s.latency_e2e);
    buf_ += ',';
    append_u64(buf_, s.resources.brams);
    buf_ += ',';
    append_u64(buf_, s.resources.adders);
    buf_ += ',';
    append_u64(buf_, s.resources.subtractors);
    buf_ += ',';
    append_double(buf_, s.area);
    buf_ += ',';
    append_double(buf_, s.efficiency);
    buf_ += pareto_flag ? ",1\n" : ",0\n";
    if (buf_.size() > (1 << 20) - 256) flush();
}

void SchemeCsvWriter::flush() {
    os_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
    if (!os_) throw FormatError("failed writing scheme CSV");
}

std::vector<SchemeRecord> read_schemes_csv(std::istream& is) {
    std::vector<SchemeRecord> out;
    std::string line;
    if (!std::getline(is, line)) return out;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool with_tp = line.rfind("tp,", 0) == 0;
    if ((with_tp ? line.substr(3) : line) != kSchemeHeader) throw FormatError("unexpected scheme CSV header");

    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const char* p = line.data();
        const char* end = p + line.size();
        if (with_tp) {
            p = std::find(p, end, ',');
            if (p == end) throw FormatError("malformed scheme row: " + line);
            ++p;
        }
        auto next_u64 = [&](auto& out_v) {
            std::uint64_t v = 0;
            auto [q, ec] = std::from_chars(p, end, v);
            if (ec != std::errc{} || (q != end && *q != ',')) throw FormatError("malformed scheme row: " + line);
            out_v = static_cast<std::remove_reference_t<decltype(out_v)>>(v);
            p = q == end ? q : q + 1;
        };
        auto next_double = [&](double& out_v) {
            auto [q, ec] = std::from_chars(p, end, out_v);
            if (ec != std::errc{} || (q != end && *q != ',')) throw FormatError("malformed scheme row: " + line);
            p = q == end ? q : q + 1;
        };
        SchemeRecord r;
        int flag = 0;
        next_u64(r.scheme.m);
        next_u64(r.scheme.width_tree);
        next_u64(r.scheme.latency);
        next_u64(r.scheme.latency_e2e);
        next_u64(r.scheme.resources.brams);
        next_u64(r.scheme.resources.adders);
        next_u64(r.scheme.resources.subtractors);
        next_double(r.scheme.area);
        next_double(r.scheme.efficiency);
        next_u64(flag);
        if (p != end || flag > 1) throw FormatError("malformed scheme row: " + line);
        r.pareto = flag == 1;
        out.push_back(r);
    }
    return out;
}

namespace {

nlohmann::json scheme_json(const SchemeRecord& r) {
    const auto& s = r.scheme;
    return {{"m", s.m},
            {"width_tree", s.width_tree},
            {"latency_core", s.latency},
            {"latency_e2e", s.latency_e2e},
            {"brams", s.resources.brams},
            {"adders", s.resources.adders},
            {"subtractors", s.resources.subtractors},
            {"area", s.area},
            {"efficiency", s.efficiency},
            {"pareto", r.pareto}};
}

}  // namespace

void write_schemes_json(std::ostream& os, unsigned n, unsigned k, const Constraints& c, const UnitCosts& costs,
                        std::span<const SchemeRecord> records) {
    nlohmann::json head;
    head["n"] = n;
    head["k"] = k;
    head["constraints"] = {
        {"latency_req", c.latency_req ? nlohmann::json(*c.latency_req) : nlohmann::json(nullptr)},
        {"area_req", c.area_req ? nlohmann::json(*c.area_req) : nlohmann::json(nullptr)},
        {"tp", c.tp.to_string()}};
    head["costs"] = {{"bram", costs.bram}, {"adder", costs.adder}, {"subtractor", costs.subtractor}};
    std::string h = head.dump();
    h.pop_back();   // reopen the object to stream the scheme array
    os << h << ",\"schemes\":[";
    for (std::size_t i = 0; i < records.size(); ++i) os << (i ? ",\n" : "\n") << scheme_json(records[i]).dump();
    os << "\n]}\n";
    if (!os) throw FormatError("failed writing scheme JSON");
}

SchemeDocument read_schemes_json(std::istream& is) {
    SchemeDocument doc;
    try {
        const auto j = nlohmann::json::parse(is);
        doc.n = j.at("n").get<unsigned>();
        doc.k = j.at("k").get<unsigned>();
        const auto& c = j.at("constraints");
        if (!c.at("latency_req").is_null()) doc.constraints.latency_req = c.at("latency_req").get<std::uint64_t>();
        if (!c.at("area_req").is_null()) doc.constraints.area_req = c.at("area_req").get<double>();
        doc.constraints.tp = Throughput::parse(c.at("tp").get<std::string>());
        const auto& costs = j.at("costs");
        doc.costs = {costs.at("bram").get<double>(), costs.at("adder").get<double>(),
                     costs.at("subtractor").get<double>()};
        for (const auto& e : j.at("schemes")) {
            SchemeRecord r;
            r.scheme.m = e.at("m").get<unsigned>();
            r.scheme.width_tree = e.at("width_tree").get<unsigned>();
            r.scheme.latency = e.at("latency_core").get<std::uint64_t>();
            r.scheme.latency_e2e = e.at("latency_e2e").get<std::uint64_t>();
            r.scheme.resources = {e.at("brams").get<std::uint64_t>(), e.at("adders").get<std::uint64_t>(),
                                  e.at("subtractors").get<std::uint64_t>()};
            r.scheme.area = e.at("area").get<double>();
            r.scheme.efficiency = e.at("efficiency").get<double>();
            r.pareto = e.at("pareto").get<bool>();
            doc.records.push_back(r);
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed scheme JSON: ") + e.what());
    }
    return doc;
}

}  // namespace allmod
