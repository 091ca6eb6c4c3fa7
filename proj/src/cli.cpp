#include "allmod/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "allmod/calibration.hpp"
#include "allmod/dse.hpp"
#include "allmod/hybrid_reduce.hpp"
#include "allmod/iter_reduce.hpp"
#include "allmod/lut_reduce.hpp"
#include "allmod/table1.hpp"

namespace allmod::cli {

namespace {

struct GlobalOptions {
    std::uint64_t capacity_bits = kDefaultBramCapacityBits;
    std::string cost_table;
    std::string format = "csv";
    std::string out;
};

struct ReduceOptions {
    std::string method;
    unsigned n = 0;
    std::string a_hex;
    std::string m_hex;
    std::optional<unsigned> k;
    std::optional<unsigned> m;
    unsigned width_tree = 0;
    bool trace = false;
};

struct ExploreOptions {
    unsigned n = 0;
    std::optional<unsigned> k;
    std::string tp = "1/2";
    std::optional<std::uint64_t> latency_req;
    std::optional<double> area_req;
    std::vector<std::string> tp_sweep;
};

struct CalibrateOptions {
    std::string table1;
};

/// Output sink: --out file when given, else the fallback stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw FormatError("cannot open '" + path + "' for writing");
            os_ = file_.get();
        }
    }
    std::ostream& get() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open '" + path + "' for writing");
    return f;
}

CostTable load_costs(const GlobalOptions& g) {
    if (g.cost_table.empty()) return default_cost_table();
    return CostTable::load(g.cost_table);
}

LutGeometry geometry_for(unsigned n, std::optional<unsigned> k, std::uint64_t capacity) {
    return k ? LutGeometry::with_k(n, *k, capacity) : LutGeometry::derive(n, capacity);
}

struct ReduceOutcome {
    Operand residue;
    ReductionTrace trace;
    std::uint64_t model_cycles;
};

ReduceOutcome do_reduce(const GlobalOptions& g, const ReduceOptions& o) {
    const Modulus mod = Modulus::from_hex(o.m_hex, o.n);
    const Operand a = Operand::from_hex(o.a_hex, 2 * o.n);
    if (o.method == "iter") {
        auto r = reduce_iterative(a, mod, IterConfig::make(2 * o.n, o.n));
        return {Operand(r.value, o.n), std::move(r.trace), latency_iterative(o.n)};
    }
    const LutGeometry geo = geometry_for(o.n, o.k, g.capacity_bits);
    if (o.method == "lut") {
        auto r = reduce_lut(a, mod, geo);
        return {r.residue, std::move(r.trace), latency_lut_based(o.n, geo.k)};
    }
    const unsigned m = o.m ? *o.m : balanced_m(o.n, geo.k);
    const auto split = HybridSplit::make(o.n, geo.k, m, o.width_tree);
    auto r = reduce_hybrid(a, mod, split, HybridTables::build(mod, split));
    return {r.residue, std::move(r.trace), latency_hybrid_end_to_end(o.n, geo.k, m, o.width_tree)};
}

void print_trace_json(std::ostream& os, const ReduceOptions& o, const ReduceOutcome& r) {
    auto j = nlohmann::json::parse(r.trace.to_json());
    j["method"] = o.method;
    j["residue"] = r.residue.to_hex();
    j["model_cycles"] = r.model_cycles;
    os << j.dump(2) << '\n';
}

int cmd_reduce(const GlobalOptions& g, const ReduceOptions& o, std::ostream& out) {
    auto r = do_reduce(g, o);
    Sink sink(g.out, out);
    if (g.format == "json") {
        if (o.trace) {
            print_trace_json(sink.get(), o, r);
        } else {
            sink.get() << nlohmann::json{{"method", o.method}, {"residue", r.residue.to_hex()}}.dump() << '\n';
        }
        return kSuccess;
    }
    sink.get() << r.residue.to_hex() << '\n';
    if (o.trace) r.trace.write_csv(sink.get());
    return kSuccess;
}

int cmd_trace(const GlobalOptions& g, const ReduceOptions& o, std::ostream& out) {
    auto r = do_reduce(g, o);
    Sink sink(g.out, out);
    if (g.format == "json") {
        print_trace_json(sink.get(), o, r);
    } else {
        r.trace.write_csv(sink.get());
    }
    return kSuccess;
}

std::string fixed2(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << round_to(v, 2);
    return s.str();
}

std::string signed_diff(std::int64_t d) { return d > 0 ? "+" + std::to_string(d) : std::to_string(d); }

std::string breakdown_diff(const Table1Model& model, const Table1Row& printed) {
    static const char* method[] = {"lut", "iter", "allmod"};
    std::string out;
    auto note = [&](const char* m, const char* unit, std::uint64_t a, std::uint64_t b) {
        if (a == b) return;
        if (!out.empty()) out += ';';
        out += std::string(m) + "_" + unit + ":" + signed_diff(static_cast<std::int64_t>(a) - static_cast<std::int64_t>(b));
    };
    for (std::size_t i = 0; i < 3; ++i) {
        note(method[i], "brams", model.breakdown[i].brams, printed.breakdown[i].brams);
        note(method[i], "adders", model.breakdown[i].adders, printed.breakdown[i].adders);
        note(method[i], "subtractors", model.breakdown[i].subtractors, printed.breakdown[i].subtractors);
    }
    return out.empty() ? "0" : out;
}

int cmd_tables(const GlobalOptions& g, bool printed, std::ostream& out) {
    if (printed) {
        Sink sink(g.out, out);
        write_table1(sink.get(), table1_printed());
        return kSuccess;
    }
    const CostTable costs = load_costs(g);
    std::vector<std::pair<Table1Model, Table1Row>> rows;
    for (const auto& p : table1_printed()) rows.emplace_back(model_row(p.n, costs, g.capacity_bits), p);

    Sink sink(g.out, out);
    auto& os = sink.get();
    if (g.format == "json") {
        auto arr = nlohmann::json::array();
        for (const auto& [m, p] : rows) {
            nlohmann::json j;
            j["n"] = m.n;
            j["k"] = m.geometry.k;
            j["m"] = m.m;
            for (std::size_t i = 0; i < 3; ++i) {
                static const char* key[] = {"lut", "iterative", "allmod"};
                j[key[i]] = {{"efficiency", m.efficiency[i]},
                             {"efficiency_printed", p.efficiency[i]},
                             {"latency", m.latency[i]},
                             {"latency_printed", p.latency[i]},
                             {"breakdown", m.breakdown[i].to_string()},
                             {"breakdown_printed", p.breakdown[i].to_string()}};
            }
            j["improvement"] = m.improvement;
            j["improvement_printed"] = p.improvement;
            j["hybrid_workloads"] = std::to_string(m.hybrid_high) + ":" + std::to_string(m.hybrid_low);
            j["hybrid_workloads_printed"] = std::to_string(p.hybrid_high) + ":" + std::to_string(p.hybrid_low);
            j["note"] = p.note;
            arr.push_back(std::move(j));
        }
        os << arr.dump(2) << '\n';
        return kSuccess;
    }

    os << "n,k,m,eff_lut,eff_iter,eff_allmod,improvement,lat_lut,lat_iter,lat_allmod,bd_lut,bd_iter,bd_allmod,"
          "hybrid_workloads,diff_eff_lut,diff_eff_iter,diff_eff_allmod,diff_improvement,diff_lat_lut,diff_lat_iter,"
          "diff_lat_allmod,diff_breakdown,diff_hybrid,note\n";
    for (const auto& [m, p] : rows) {
        os << m.n << ',' << m.geometry.k << ',' << m.m;
        for (double e : m.efficiency) os << ',' << fixed2(e);
        os << ',' << fixed2(m.improvement);
        for (auto l : m.latency) os << ',' << l;
        for (const auto& b : m.breakdown) os << ',' << b.to_string();
        os << ',' << m.hybrid_high << ':' << m.hybrid_low;
        for (std::size_t i = 0; i < 3; ++i) os << ',' << fixed2(round_to(m.efficiency[i], 2) - p.efficiency[i]);
        os << ',' << fixed2(round_to(m.improvement, 2) - p.improvement);
        for (std::size_t i = 0; i < 3; ++i)
            os << ',' << static_cast<std::int64_t>(m.latency[i]) - static_cast<std::int64_t>(p.latency[i]);
        os << ',' << breakdown_diff(m, p);
        os << ',' << static_cast<std::int64_t>(m.hybrid_high) - static_cast<std::int64_t>(p.hybrid_high);
        os << ',' << p.note << '\n';
    }
    return kSuccess;
}

struct ExploreSummary {
    std::uint64_t feasible = 0;
    std::uint64_t pareto = 0;
    std::optional<Scheme> best_efficiency;
    std::optional<Scheme> best_latency;
};

void print_summary(std::ostream& os, unsigned n, unsigned k, const Throughput& tp, const ExploreSummary& s) {
    os << "n=" << n << " k=" << k << " tp=" << tp.to_string() << " feasible=" << s.feasible
       << " pareto=" << s.pareto << '\n';
    if (s.best_efficiency)
        os << "best efficiency: " << s.best_efficiency->efficiency << " (m=" << s.best_efficiency->m
           << " width_tree=" << s.best_efficiency->width_tree << " latency=" << s.best_efficiency->latency << ")\n";
    if (s.best_latency)
        os << "best latency: " << s.best_latency->latency << " (m=" << s.best_latency->m
           << " width_tree=" << s.best_latency->width_tree << " area=" << s.best_latency->area << ")\n";
}

int cmd_explore(const GlobalOptions& g, const ExploreOptions& o, std::ostream& out, std::ostream& err) {
    const CostTable costs = load_costs(g);
    const LutGeometry geo = geometry_for(o.n, o.k, g.capacity_bits);
    Constraints c;
    c.latency_req = o.latency_req;
    c.area_req = o.area_req;
    c.tp = Throughput::parse(o.tp);
    c.validate();
    const UnitCosts& unit = costs.at(o.n);

    // Pass 1: the front, in bounded memory.
    ParetoAccumulator acc;
    for_each_feasible(o.n, geo.k, c, costs, [&](const Scheme& s) { acc.offer(s); });
    const std::vector<Scheme> front = acc.front();

    ExploreSummary summary;
    summary.feasible = acc.offered();
    summary.pareto = front.size();
    for (const auto& s : front) {
        if (!summary.best_efficiency || s.efficiency > summary.best_efficiency->efficiency) summary.best_efficiency = s;
        if (!summary.best_latency) summary.best_latency = s;
    }
    if (summary.feasible == 0) err << "warning: no feasible scheme satisfies the constraints\n";

    std::vector<SchemeRecord> front_records;
    for (const auto& s : front) front_records.push_back({s, true});

    if (g.out.empty()) {
        SchemeCsvWriter w(out);
        for (const auto& s : front) w.write(s, true);
        w.flush();
        print_summary(err, o.n, geo.k, c.tp, summary);
    } else {
        const bool json = g.format == "json";
        const std::string ext = json ? ".json" : ".csv";
        {
            auto f = open_out(g.out + ".pareto" + ext);
            if (json) {
                write_schemes_json(f, o.n, geo.k, c, unit, front_records);
            } else {
                SchemeCsvWriter w(f);
                for (const auto& s : front) w.write(s, true);
            }
        }
        // Pass 2: stream the full feasible set with membership flags.
        auto key = [](unsigned m, unsigned w) { return (static_cast<std::uint64_t>(m) << 32) | w; };
        std::unordered_set<std::uint64_t> on_front;
        for (const auto& s : front) on_front.insert(key(s.m, s.width_tree));
        auto f = open_out(g.out + ".feasible" + ext);
        if (json) {
            std::vector<SchemeRecord> all;
            for_each_feasible(o.n, geo.k, c, costs, [&](const Scheme& s) {
                all.push_back({s, on_front.count(key(s.m, s.width_tree)) != 0});
            });
            write_schemes_json(f, o.n, geo.k, c, unit, all);
        } else {
            SchemeCsvWriter w(f);
            for_each_feasible(o.n, geo.k, c, costs,
                              [&](const Scheme& s) { w.write(s, on_front.count(key(s.m, s.width_tree)) != 0); });
            w.flush();
        }
        print_summary(out, o.n, geo.k, c.tp, summary);
    }

    if (!o.tp_sweep.empty()) {
        std::vector<Throughput> tps;
        for (const auto& t : o.tp_sweep) tps.push_back(Throughput::parse(t));
        const auto entries = frontier_report(o.n, geo.k, tps, costs, c);
        Sink sink(g.out.empty() ? std::string{} : g.out + ".frontier.csv", out);
        SchemeCsvWriter w(sink.get(), true);
        for (const auto& e : entries) w.write(e.scheme, true, &e.tp);
        w.flush();
    }
    return kSuccess;
}

int cmd_calibrate(const GlobalOptions& g, const CalibrateOptions& o, std::ostream& out) {
    std::vector<Table1Row> printed;
    if (o.table1.empty()) {
        printed.assign(table1_printed().begin(), table1_printed().end());
    } else {
        std::ifstream in(o.table1);
        if (!in) throw FormatError("cannot open '" + o.table1 + "'");
        printed = read_table1(in);
    }
    const auto rows = model_calibration_rows(printed, g.capacity_bits);
    const Calibration cal = calibrate_cost_table(rows);
    Sink sink(g.out, out);
    write_calibration(sink.get(), cal);
    return kSuccess;
}

void add_reduce_options(CLI::App* sub, ReduceOptions& o) {
    sub->add_option("--method", o.method, "Reduction engine")
        ->required()
        ->check(CLI::IsMember({"lut", "iter", "hybrid"}));
    sub->add_option("--n", o.n, "Modulus width in bits")->required()->check(CLI::Range(2u, 1u << 20));
    sub->add_option("--A", o.a_hex, "2n-bit operand, hex")->required();
    sub->add_option("--M", o.m_hex, "n-bit modulus with top bit set, hex")->required();
    sub->add_option("--k", o.k, "Table input width (default: largest that fits a BRAM)");
    sub->add_option("--m", o.m, "Hybrid split point (default: balanced)");
    sub->add_option("--width-tree", o.width_tree, "Hybrid adder-tree width");
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bit-exact models of LUT, iterative and hybrid large-number modular reduction"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--capacity-bits", g.capacity_bits, "BRAM capacity in bits")->capture_default_str();
    app.add_option("--cost-table", g.cost_table, "Cost table file (default: built-in calibration)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out, "Output path (explore: file prefix)");

    ReduceOptions red;
    auto* reduce = app.add_subcommand("reduce", "Reduce one operand and print the residue");
    add_reduce_options(reduce, red);
    reduce->add_flag("--trace", red.trace, "Also print the cycle-annotated trace");

    ReduceOptions tr;
    auto* trace = app.add_subcommand("trace", "Print the cycle-annotated trace of one reduction");
    add_reduce_options(trace, tr);

    bool printed = false;
    auto* tables = app.add_subcommand("tables", "Reproduce the method comparison table from the model");
    tables->add_flag("--printed", printed, "Emit the built-in published table instead");

    ExploreOptions ex;
    auto* explore = app.add_subcommand("explore", "Enumerate hybrid design points and extract the Pareto front");
    explore->add_option("--n", ex.n, "Modulus width in bits")->required()->check(CLI::Range(2u, 1u << 20));
    explore->add_option("--k", ex.k, "Table input width (default: largest that fits a BRAM)");
    explore->add_option("--tp", ex.tp, "Throughput in Ops/cycle, e.g. 1/2 or 0.25")->capture_default_str();
    explore->add_option("--latency-req", ex.latency_req, "Core latency bound in cycles");
    explore->add_option("--area-req", ex.area_req, "Area bound in LUT equivalents");
    explore->add_option("--tp-sweep", ex.tp_sweep, "Throughputs for a frontier report")->delimiter(',');

    CalibrateOptions cal;
    auto* calibrate = app.add_subcommand("calibrate", "Fit per-width unit costs to the published efficiencies");
    calibrate->add_option("--table1", cal.table1, "Published table CSV (default: built-in copy)");

    for (auto* sub : {reduce, trace, tables, explore, calibrate}) {
        // global flags are also accepted after the subcommand name
        sub->fallthrough();
    }

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        if (*reduce) return cmd_reduce(g, red, out);
        if (*trace) return cmd_trace(g, tr, out);
        if (*tables) return cmd_tables(g, printed, out);
        if (*explore) return cmd_explore(g, ex, out, err);
        if (*calibrate) return cmd_calibrate(g, cal, out);
    } catch (const CalibrationRequiredError& e) {
        err << "error: " << e.what() << '\n';
        return kCalibrationRequired;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kDomain;
    } catch (const InvariantError& e) {
        err << "internal error: " << e.what() << '\n';
        return kDomain;
    }
    return kUsage;
}

}  // namespace allmod::cli
