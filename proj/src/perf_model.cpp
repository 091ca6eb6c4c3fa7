#include "allmod/perf_model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "allmod/errors.hpp"
#include "allmod/modmath.hpp"

namespace allmod {

Throughput::Throughput(std::uint64_t num, std::uint64_t den) {
    if (den == 0 || num == 0) throw ConfigurationError("throughput must be positive");
    const auto g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
    if (2 * num_ > den_) throw ConfigurationError("throughput " + to_string() + " exceeds the 1/2 Ops/cycle bound");
}

Throughput Throughput::parse(std::string_view text) {
    auto parse_u64 = [&](std::string_view s) {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
            throw ConfigurationError("malformed throughput '" + std::string(text) + "'");
        return v;
    };
    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return Throughput(parse_u64(text.substr(0, slash)), parse_u64(text.substr(slash + 1)));
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (frac.size() > 18) throw ConfigurationError("throughput has too many decimals");
        std::uint64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        std::uint64_t w = whole.empty() ? 0 : parse_u64(whole);
        std::uint64_t f = frac.empty() ? 0 : parse_u64(frac);
        return Throughput(w * den + f, den);
    }
    return Throughput(parse_u64(text), 1);
}

std::uint64_t Throughput::replicas(std::uint64_t units) const noexcept {
    return (units * num_ + den_ - 1) / den_;
}

std::string Throughput::to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

std::string ResourceCount::to_string() const {
    return std::to_string(brams) + ";" + std::to_string(adders) + ";" + std::to_string(subtractors);
}

unsigned tree_depth(std::uint64_t width) { return width <= 1 ? 0 : ceil_log2(width); }

namespace {
std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

void check_split(unsigned n, unsigned k, unsigned m, unsigned width_tree) {
    if (k == 0) throw ConfigurationError("k must be positive");
    if (m > n) throw ConfigurationError("m exceeds n");
    if (width_tree > n - m) throw ConfigurationError("width_tree exceeds n - m");
}
}  // namespace

std::uint64_t latency_iterative(unsigned n) {
    if (n < 2) throw ConfigurationError("n must be at least 2");
    return n;
}

std::uint64_t latency_lut_based(unsigned n, unsigned k) {
    if (n < 2 || k == 0) throw ConfigurationError("invalid LUT geometry");
    const std::uint64_t d = ceil_div(n, k);
    return 1 + (ceil_log2(d) + 1) + 1 + 1 + 1;
}

std::uint64_t latency_hybrid_core(unsigned n, unsigned k, unsigned m, unsigned width_tree) {
    check_split(n, k, m, width_tree);
    const std::uint64_t d = ceil_div(n - m, k);
    const std::uint64_t serial = d > width_tree ? d - width_tree : 0;
    const std::uint64_t left = 1 + std::max<std::uint64_t>(serial, tree_depth(width_tree));
    return std::max<std::uint64_t>(left, m);
}

std::uint64_t latency_hybrid_end_to_end(unsigned n, unsigned k, unsigned m, unsigned width_tree) {
    return latency_hybrid_core(n, k, m, width_tree) + 4;
}

ResourceCount resources_hybrid(unsigned n, unsigned k, unsigned m, unsigned width_tree, const Throughput& tp) {
    check_split(n, k, m, width_tree);
    const std::uint64_t d = ceil_div(n - m, k);
    const std::uint64_t tree = width_tree == 0 ? 0 : 2ull * width_tree - 1;
    const std::uint64_t serial = d > width_tree ? d - width_tree : 0;
    return {d, tree + tp.replicas(serial), tp.replicas(m)};
}

ResourceCount resources_lut_baseline(unsigned n, unsigned k) {
    if (n < 2 || k == 0) throw ConfigurationError("invalid LUT geometry");
    const std::uint64_t d = ceil_div(n, k);
    return {d, 2 * d - 1, 1};
}

ResourceCount resources_iterative_baseline(unsigned n, const Throughput& tp) {
    if (n < 2) throw ConfigurationError("n must be at least 2");
    return {0, 0, tp.replicas(n)};
}

void CostTable::set(unsigned n, const UnitCosts& costs) { costs_[n] = costs; }

const UnitCosts& CostTable::at(unsigned n) const {
    auto it = costs_.find(n);
    if (it == costs_.end())
        throw CalibrationRequiredError("no calibrated unit costs for n=" + std::to_string(n) +
                                       "; run `allmod calibrate` or pass --cost-table");
    return it->second;
}

void CostTable::validate() const {
    const UnitCosts* prev = nullptr;
    unsigned prev_n = 0;
    for (const auto& [n, c] : costs_) {
        if (!(c.bram > 0 && c.adder > 0 && c.subtractor > 0))
            throw CalibrationError("non-positive unit cost at n=" + std::to_string(n));
        if (prev && (c.adder < prev->adder || c.subtractor < prev->subtractor))
            throw CalibrationError("adder/subtractor cost decreases from n=" + std::to_string(prev_n) +
                                   " to n=" + std::to_string(n));
        prev = &c;
        prev_n = n;
    }
}

namespace {
std::string format_cost(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}
}  // namespace

void CostTable::write(std::ostream& os) const {
    os << "# n, area_bram, area_adder, area_subtractor (LUT equivalents)\n";
    for (const auto& [n, c] : costs_)
        os << n << ", " << format_cost(c.bram) << ", " << format_cost(c.adder) << ", "
           << format_cost(c.subtractor) << '\n';
}

CostTable CostTable::read(std::istream& is) {
    CostTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        unsigned n = 0;
        UnitCosts c;
        std::string extra;
        if (!(fields >> n >> c.bram >> c.adder >> c.subtractor) || (fields >> extra))
            throw FormatError("cost table line " + std::to_string(lineno) + ": expected 4 fields");
        t.set(n, c);
    }
    t.validate();
    return t;
}

CostTable CostTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CalibrationRequiredError("cannot open cost table '" + path + "'; run `allmod calibrate`");
    return read(in);
}

double area_estimate(const ResourceCount& rc, const UnitCosts& c) {
    return static_cast<double>(rc.brams) * c.bram + static_cast<double>(rc.adders) * c.adder +
           static_cast<double>(rc.subtractors) * c.subtractor;
}

double area_estimate(const ResourceCount& rc, const CostTable& costs, unsigned n) {
    return area_estimate(rc, costs.at(n));
}

double area_efficiency(double tp, double area) {
    if (!(area > 0)) throw UndefinedMetricError("area efficiency is undefined for non-positive area");
    return tp / area * 1e9;
}

}  // namespace allmod
