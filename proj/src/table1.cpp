#include "allmod/table1.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "allmod/hybrid_reduce.hpp"

namespace allmod {

namespace {

using RC = ResourceCount;

const std::vector<Table1Row> kPrinted = {
    {128, {15258.79, 10172.53, 25040.06}, 1.65, {9, 128, 20},
     {RC{16, 3, 1}, RC{0, 0, 64}, RC{15, 8, 8}}, 113, 143,
     "LUT-based adders printed as 3; every other row follows 2d-1, which gives 31"},
    {256, {2111.49, 1326.85, 4521.12}, 2.14, {11, 256, 37},
     {RC{37, 73, 1}, RC{0, 0, 128}, RC{32, 16, 16}}, 224, 288, ""},
    {512, {241.60, 165.86, 550.18}, 2.28, {12, 512, 78},
     {RC{86, 171, 1}, RC{0, 0, 256}, RC{73, 37, 37}}, 438, 586, ""},
    {1024, {25.75, 20.73, 61.05}, 2.37, {13, 1024, 176},
     {RC{205, 409, 1}, RC{0, 0, 512}, RC{171, 86, 86}}, 853, 1195, ""},
    {2048, {2.59, 2.59, 6.45}, 2.49, {14, 2048, 415},
     {RC{512, 1024, 1}, RC{0, 0, 1024}, RC{410, 205, 205}}, 1638, 2458,
     "LUT-based adders printed as 1024; 2d-1 gives 1023"},
    {4096, {0.24, 0.32, 0.65}, 2.71, {16, 4096, 1029},
     {RC{1366, 2731, 1}, RC{0, 0, 2048}, RC{1024, 512, 512}}, 3072, 5120, ""},
    {8192, {0.02, 0.04, 0.06}, 3.00, {17, 8192, 2736},
     {RC{4096, 8191, 1}, RC{0, 0, 4096}, RC{2731, 1366, 1366}}, 5461, 10923, ""},
};

std::vector<std::string> split_fields(const std::string& line, std::size_t max_fields) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (out.size() + 1 < max_fields) {
        auto comma = line.find(',', start);
        if (comma == std::string::npos) break;
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    out.push_back(line.substr(start));
    return out;
}

ResourceCount parse_breakdown(const std::string& s) {
    ResourceCount rc;
    char sep1 = 0, sep2 = 0;
    std::istringstream in(s);
    if (!(in >> rc.brams >> sep1 >> rc.adders >> sep2 >> rc.subtractors) || sep1 != ';' || sep2 != ';')
        throw FormatError("malformed breakdown '" + s + "'");
    return rc;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (s.find_first_not_of(" \t\r", pos) != std::string::npos) throw FormatError("malformed number '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::size_t pos = 0;
    auto v = std::stoull(s, &pos);
    if (s.find_first_not_of(" \t\r", pos) != std::string::npos) throw FormatError("malformed integer '" + s + "'");
    return v;
}

}  // namespace

std::span<const Table1Row> table1_printed() { return kPrinted; }

std::vector<Table1Row> read_table1(std::istream& is) {
    std::vector<Table1Row> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("n,", 0) == 0) continue;
        }
        auto f = split_fields(line, 13);
        if (f.size() != 13) throw FormatError("table row needs 13 fields: " + line);
        try {
            Table1Row r;
            r.n = static_cast<unsigned>(parse_u64(f[0]));
            for (std::size_t i = 0; i < 3; ++i) r.efficiency[i] = parse_double(f[1 + i]);
            r.improvement = parse_double(f[4]);
            for (std::size_t i = 0; i < 3; ++i) r.latency[i] = parse_u64(f[5 + i]);
            for (std::size_t i = 0; i < 3; ++i) r.breakdown[i] = parse_breakdown(f[8 + i]);
            auto colon = f[11].find(':');
            if (colon == std::string::npos) throw FormatError("malformed hybrid workloads '" + f[11] + "'");
            r.hybrid_high = static_cast<unsigned>(parse_u64(f[11].substr(0, colon)));
            r.hybrid_low = static_cast<unsigned>(parse_u64(f[11].substr(colon + 1)));
            r.note = f[12];
            rows.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw FormatError("malformed table row: " + line);
        }
    }
    return rows;
}

void write_table1(std::ostream& os, std::span<const Table1Row> rows) {
    os << "n,eff_lut,eff_iter,eff_allmod,improvement,lat_lut,lat_iter,lat_allmod,"
          "bd_lut,bd_iter,bd_allmod,hybrid_workloads,note\n";
    std::ostringstream num;
    num.setf(std::ios::fixed);
    num.precision(2);
    for (const auto& r : rows) {
        os << r.n;
        for (double e : r.efficiency) {
            num.str("");
            num << e;
            os << ',' << num.str();
        }
        num.str("");
        num << r.improvement;
        os << ',' << num.str();
        for (auto l : r.latency) os << ',' << l;
        for (const auto& b : r.breakdown) os << ',' << b.to_string();
        os << ',' << r.hybrid_high << ':' << r.hybrid_low << ',' << r.note << '\n';
    }
}

Table1Model model_structure(unsigned n, std::uint64_t capacity_bits) {
    Table1Model t;
    t.n = n;
    t.geometry = LutGeometry::derive(n, capacity_bits);
    const unsigned k = t.geometry.k;
    t.m = balanced_m(n, k);
    const Throughput tp = Throughput::max();
    t.latency = {latency_lut_based(n, k), latency_iterative(n), latency_hybrid_end_to_end(n, k, t.m, 0)};
    t.breakdown = {resources_lut_baseline(n, k), resources_iterative_baseline(n, tp),
                   resources_hybrid(n, k, t.m, 0, tp)};
    t.hybrid_high = n - t.m;
    t.hybrid_low = n + t.m;
    return t;
}

Table1Model model_row(unsigned n, const CostTable& costs, std::uint64_t capacity_bits) {
    Table1Model t = model_structure(n, capacity_bits);
    const UnitCosts& c = costs.at(n);
    const double tp = Throughput::max().value();
    for (std::size_t i = 0; i < 3; ++i) {
        t.area[i] = area_estimate(t.breakdown[i], c);
        t.efficiency[i] = area_efficiency(tp, t.area[i]);
    }
    t.improvement = t.efficiency[2] / t.efficiency[0];
    return t;
}

double round_to(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    // nudge by a relative epsilon so exact binary ties (x.xx5) round away from zero
    return std::round(v * scale * (1 + 1e-12)) / scale;
}

}  // namespace allmod
