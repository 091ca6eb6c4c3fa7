#include <optional>
#include <sstream>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "allmod/calibration.hpp"
#include "allmod/dse.hpp"
#include "allmod/hybrid_reduce.hpp"
#include "allmod/iter_reduce.hpp"
#include "allmod/lut_reduce.hpp"
#include "allmod/table1.hpp"

namespace py = pybind11;
using namespace allmod;

namespace {

BigUint to_big(const py::int_& v) {
    if (v < py::int_(0)) throw py::value_error("value must be non-negative");
    const auto hex = py::str(py::module_::import("builtins").attr("format")(v, "x")).cast<std::string>();
    return parse_hex(hex);
}

py::int_ to_py(const BigUint& v) {
    return py::int_(py::module_::import("builtins").attr("int")(format_hex(v), 16));
}

struct PyReduction {
    py::int_ residue;
    std::uint64_t total_cycles = 0;
    std::vector<std::tuple<std::uint64_t, std::string, std::string>> events;
};

PyReduction wrap(const BigUint& residue, const ReductionTrace& trace) {
    PyReduction r;
    r.residue = to_py(residue);
    r.total_cycles = trace.total_cycles();
    for (const auto& e : trace.events()) r.events.emplace_back(e.cycle, std::string(to_string(e.unit)), e.note);
    return r;
}

LutGeometry geometry(unsigned n, std::optional<unsigned> k, std::uint64_t capacity) {
    return k ? LutGeometry::with_k(n, *k, capacity) : LutGeometry::derive(n, capacity);
}

Constraints make_constraints(std::optional<std::uint64_t> latency_req, std::optional<double> area_req,
                             const std::string& tp) {
    Constraints c;
    c.latency_req = latency_req;
    c.area_req = area_req;
    c.tp = Throughput::parse(tp);
    c.validate();
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "LUT, iterative and hybrid modular reduction with an area/latency model";

    static py::exception<Error> base(mod, "AllmodError", PyExc_ValueError);
    py::register_exception<InvalidModulusError>(mod, "InvalidModulusError", base.ptr());
    py::register_exception<BoundsError>(mod, "BoundsError", base.ptr());
    py::register_exception<ConfigurationError>(mod, "ConfigurationError", base.ptr());
    py::register_exception<InfeasibleGeometryError>(mod, "InfeasibleGeometryError", base.ptr());
    py::register_exception<CalibrationRequiredError>(mod, "CalibrationRequiredError", base.ptr());
    py::register_exception<CalibrationError>(mod, "CalibrationError", base.ptr());
    py::register_exception<UndefinedMetricError>(mod, "UndefinedMetricError", base.ptr());
    py::register_exception<FormatError>(mod, "FormatError", base.ptr());

    py::class_<PyReduction>(mod, "Reduction")
        .def_readonly("residue", &PyReduction::residue)
        .def_readonly("total_cycles", &PyReduction::total_cycles)
        .def_readonly("events", &PyReduction::events)
        .def("__repr__", [](const PyReduction& r) {
            return "Reduction(residue=" + py::repr(r.residue).cast<std::string>() +
                   ", total_cycles=" + std::to_string(r.total_cycles) + ")";
        });

    mod.def(
        "derive_k",
        [](unsigned n, std::uint64_t capacity) { return LutGeometry::derive(n, capacity).k; },
        py::arg("n"), py::arg("capacity_bits") = kDefaultBramCapacityBits);
    mod.def("balanced_m", &balanced_m, py::arg("n"), py::arg("k"));

    mod.def(
        "reduce_lut",
        [](const py::int_& a, const py::int_& m, unsigned n, std::optional<unsigned> k, std::uint64_t cap) {
            const Modulus mod_(to_big(m), n);
            auto r = reduce_lut(Operand(to_big(a), 2 * n), mod_, geometry(n, k, cap));
            return wrap(r.residue.value(), r.trace);
        },
        py::arg("a"), py::arg("m"), py::arg("n"), py::arg("k") = py::none(),
        py::arg("capacity_bits") = kDefaultBramCapacityBits);

    mod.def(
        "reduce_iterative",
        [](const py::int_& a, const py::int_& m, unsigned n) {
            auto r = reduce_iterative(Operand(to_big(a), 2 * n), Modulus(to_big(m), n), IterConfig::make(2 * n, n));
            return wrap(r.value, r.trace);
        },
        py::arg("a"), py::arg("m"), py::arg("n"));

    mod.def(
        "reduce_hybrid",
        [](const py::int_& a, const py::int_& m, unsigned n, std::optional<unsigned> split_m, unsigned width_tree,
           std::optional<unsigned> k, std::uint64_t cap) {
            const Modulus mod_(to_big(m), n);
            const auto geo = geometry(n, k, cap);
            const auto split = HybridSplit::make(n, geo.k, split_m ? *split_m : balanced_m(n, geo.k), width_tree);
            auto r = reduce_hybrid(Operand(to_big(a), 2 * n), mod_, split, HybridTables::build(mod_, split));
            return wrap(r.residue.value(), r.trace);
        },
        py::arg("a"), py::arg("m"), py::arg("n"), py::arg("split_m") = py::none(), py::arg("width_tree") = 0,
        py::arg("k") = py::none(), py::arg("capacity_bits") = kDefaultBramCapacityBits);

    py::class_<Throughput>(mod, "Throughput")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("num"), py::arg("den"))
        .def_static("parse", &Throughput::parse)
        .def_property_readonly("value", &Throughput::value)
        .def("__str__", &Throughput::to_string)
        .def("__repr__", [](const Throughput& t) { return "Throughput('" + t.to_string() + "')"; });

    py::class_<ResourceCount>(mod, "ResourceCount")
        .def_readonly("brams", &ResourceCount::brams)
        .def_readonly("adders", &ResourceCount::adders)
        .def_readonly("subtractors", &ResourceCount::subtractors)
        .def("__str__", &ResourceCount::to_string)
        .def("__eq__", [](const ResourceCount& a, const ResourceCount& b) { return a == b; })
        .def("as_tuple", [](const ResourceCount& r) { return py::make_tuple(r.brams, r.adders, r.subtractors); });

    mod.def("tree_depth", &tree_depth, py::arg("width"));
    mod.def("latency_iterative", &latency_iterative, py::arg("n"));
    mod.def("latency_lut_based", &latency_lut_based, py::arg("n"), py::arg("k"));
    mod.def("latency_hybrid_core", &latency_hybrid_core, py::arg("n"), py::arg("k"), py::arg("m"),
            py::arg("width_tree"));
    mod.def("latency_hybrid_end_to_end", &latency_hybrid_end_to_end, py::arg("n"), py::arg("k"), py::arg("m"),
            py::arg("width_tree"));
    mod.def(
        "resources_hybrid",
        [](unsigned n, unsigned k, unsigned m, unsigned w, const std::string& tp) {
            return resources_hybrid(n, k, m, w, Throughput::parse(tp));
        },
        py::arg("n"), py::arg("k"), py::arg("m"), py::arg("width_tree"), py::arg("tp") = "1/2");
    mod.def("resources_lut_baseline", &resources_lut_baseline, py::arg("n"), py::arg("k"));
    mod.def(
        "resources_iterative_baseline",
        [](unsigned n, const std::string& tp) { return resources_iterative_baseline(n, Throughput::parse(tp)); },
        py::arg("n"), py::arg("tp") = "1/2");
    mod.def("area_efficiency", &area_efficiency, py::arg("tp"), py::arg("area"));

    py::class_<UnitCosts>(mod, "UnitCosts")
        .def(py::init([](double b, double a, double s) { return UnitCosts{b, a, s}; }), py::arg("bram"),
             py::arg("adder"), py::arg("subtractor"))
        .def_readonly("bram", &UnitCosts::bram)
        .def_readonly("adder", &UnitCosts::adder)
        .def_readonly("subtractor", &UnitCosts::subtractor);

    py::class_<CostTable>(mod, "CostTable")
        .def(py::init<>())
        .def("set", &CostTable::set)
        .def("at", &CostTable::at, py::return_value_policy::copy)
        .def("contains", &CostTable::contains)
        .def("validate", &CostTable::validate)
        .def_static("load", &CostTable::load)
        .def_static("parse", [](const std::string& text) {
            std::istringstream is(text);
            return CostTable::read(is);
        })
        .def("dumps", [](const CostTable& t) {
            std::ostringstream os;
            t.write(os);
            return os.str();
        });
    mod.def("default_cost_table", &default_cost_table, py::return_value_policy::copy);
    mod.def("area_estimate", py::overload_cast<const ResourceCount&, const CostTable&, unsigned>(&area_estimate),
            py::arg("resources"), py::arg("costs"), py::arg("n"));

    py::class_<Scheme>(mod, "Scheme")
        .def_readonly("m", &Scheme::m)
        .def_readonly("width_tree", &Scheme::width_tree)
        .def_readonly("latency", &Scheme::latency)
        .def_readonly("latency_e2e", &Scheme::latency_e2e)
        .def_readonly("area", &Scheme::area)
        .def_readonly("resources", &Scheme::resources)
        .def_readonly("efficiency", &Scheme::efficiency)
        .def("__repr__", [](const Scheme& s) {
            return "Scheme(m=" + std::to_string(s.m) + ", width_tree=" + std::to_string(s.width_tree) +
                   ", latency=" + std::to_string(s.latency) + ", area=" + std::to_string(s.area) + ")";
        });

    mod.def(
        "search",
        [](unsigned n, std::optional<std::uint64_t> latency_req, std::optional<double> area_req,
           const std::string& tp, std::optional<unsigned> k, const CostTable* costs) {
            const auto c = make_constraints(latency_req, area_req, tp);
            return search(n, geometry(n, k, kDefaultBramCapacityBits).k, c, costs ? *costs : default_cost_table());
        },
        py::arg("n"), py::arg("latency_req") = py::none(), py::arg("area_req") = py::none(), py::arg("tp") = "1/2",
        py::arg("k") = py::none(), py::arg("costs") = nullptr);
    mod.def("pareto", [](const std::vector<Scheme>& s) { return pareto(s); }, py::arg("schemes"));

    mod.def(
        "calibrate",
        [](std::uint64_t cap) {
            const auto rows = model_calibration_rows(table1_printed(), cap);
            return calibrate_cost_table(rows).table;
        },
        py::arg("capacity_bits") = kDefaultBramCapacityBits);
}
