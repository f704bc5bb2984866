// Python bindings for the main operations: exact rationals and enclosures,
// staircase trees, limit-function evaluation, schedule approximants with
// measure verification, difference-quotient scans, and the JSON/CSV writers.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bmf/bmfunction.hpp"
#include "bmf/io.hpp"
#include "bmf/plmap.hpp"
#include "bmf/probes.hpp"
#include "bmf/staircase.hpp"

namespace py = pybind11;
using namespace bmf;

PYBIND11_MODULE(_bmf, mod) {
    mod.doc() = "Measure-preserving staircase construction: exact evaluation, "
                "approximants, and derivative probes";

    py::class_<Rational>(mod, "Rational")
        .def(py::init(&Rational::parse), py::arg("text"))
        .def(py::init<std::int64_t>(), py::arg("n"))
        .def(py::init<std::int64_t, std::int64_t>(), py::arg("num"), py::arg("den"))
        .def("__str__", &Rational::str)
        .def("__repr__", [](const Rational& r) { return "Rational(\"" + r.str() + "\")"; })
        .def("__float__", &Rational::to_double)
        .def("decimal", &Rational::decimal, py::arg("digits"))
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(py::self / py::self)
        .def(-py::self)
        .def(py::self == py::self)
        .def(py::self != py::self)
        .def(py::self < py::self)
        .def(py::self <= py::self)
        .def(py::self > py::self)
        .def(py::self >= py::self)
        .def("__hash__", [](const Rational& r) { return py::hash(py::str(r.str())); });
    py::implicitly_convertible<py::str, Rational>();
    py::implicitly_convertible<py::int_, Rational>();

    py::class_<Enclosure>(mod, "Enclosure")
        .def(py::init<const Rational&>(), py::arg("point"))
        .def(py::init<Rational, Rational>(), py::arg("lo"), py::arg("hi"))
        .def_readonly("lo", &Enclosure::lo)
        .def_readonly("hi", &Enclosure::hi)
        .def("width", &Enclosure::width)
        .def("exact", &Enclosure::exact)
        .def("__repr__", [](const Enclosure& e) {
            return "Enclosure(\"" + e.lo.str() + "\", \"" + e.hi.str() + "\")";
        });

    py::class_<StaircaseNode>(mod, "StaircaseNode")
        .def_readonly("m", &StaircaseNode::m)
        .def_readonly("p", &StaircaseNode::p)
        .def_readonly("c", &StaircaseNode::c)
        .def_readonly("a", &StaircaseNode::a)
        .def_readonly("b", &StaircaseNode::b)
        .def_readonly("d", &StaircaseNode::d)
        .def_readonly("vc", &StaircaseNode::vc)
        .def_readonly("plateau", &StaircaseNode::plateau)
        .def_readonly("vd", &StaircaseNode::vd)
        .def_readonly("has_split", &StaircaseNode::has_split)
        .def_readonly("split", &StaircaseNode::split);

    py::class_<StaircaseTree>(mod, "StaircaseTree")
        .def(py::init([](int sigma, const std::string& kmode) {
                 return StaircaseTree(sigma, kmode_parse(kmode));
             }),
             py::arg("sigma") = 1, py::arg("kmode") = "exact")
        .def_property_readonly("sigma", &StaircaseTree::sigma)
        .def_property_readonly("depth", &StaircaseTree::depth)
        .def("ensure_depth", &StaircaseTree::ensure_depth, py::arg("depth"))
        .def("node", &StaircaseTree::node, py::arg("m"), py::arg("p"),
             py::return_value_policy::copy)
        .def("level_size",
             [](const StaircaseTree& t, int m) { return t.level(m).size(); }, py::arg("m"))
        .def("expansion_factor", &StaircaseTree::expansion_factor, py::arg("m"),
             py::return_value_policy::copy)
        .def("survivor_length", &StaircaseTree::survivor_length, py::arg("levels"))
        .def("eval", &StaircaseTree::eval, py::arg("x"), py::arg("eps"),
             py::arg("level_cutoff") = StaircaseTree::kDefaultLevelCutoff)
        .def("to_json", &tree_to_json);

    py::class_<BMFunction>(mod, "BMFunction")
        .def(py::init<>())
        .def("eval", &BMFunction::eval, py::arg("x"), py::arg("eps"),
             py::arg("level_cutoff") = BMFunction::kDefaultLevelCutoff)
        .def("eval_n", &BMFunction::eval_n, py::arg("x"), py::arg("n"), py::arg("eps"),
             py::arg("level_cutoff") = BMFunction::kDefaultLevelCutoff);

    py::class_<PLMap>(mod, "PLMap")
        .def_readonly("breakpoints", &PLMap::breakpoints)
        .def_readonly("values", &PLMap::values)
        .def_readonly("gen", &PLMap::gen)
        .def_readonly("cutoff", &PLMap::cutoff)
        .def("__len__", [](const PLMap& g) { return g.breakpoints.size(); })
        .def("to_json", &plmap_to_json)
        .def("to_svg", &plmap_to_svg);

    py::class_<MeasureCell>(mod, "MeasureCell")
        .def_readonly("lo", &MeasureCell::lo)
        .def_readonly("hi", &MeasureCell::hi)
        .def_readonly("sum", &MeasureCell::sum);

    py::class_<MeasureReport>(mod, "MeasureReport")
        .def_readonly("cells", &MeasureReport::cells)
        .def_readonly("preserving", &MeasureReport::preserving)
        .def_readonly("diagnostic", &MeasureReport::diagnostic)
        .def("to_json", &measure_report_to_json);

    py::class_<DiniRow>(mod, "DiniRow")
        .def_readonly("scale", &DiniRow::scale)
        .def_readonly("max_lb", &DiniRow::max_lb)
        .def_readonly("min_ub", &DiniRow::min_ub)
        .def_readonly("samples", &DiniRow::samples);

    py::class_<DiniScan>(mod, "DiniScan")
        .def_readonly("x", &DiniScan::x)
        .def_readonly("rows", &DiniScan::rows)
        .def_property_readonly("side", [](const DiniScan& s) { return side_name(s.side); })
        .def("to_csv", &scan_to_csv);

    py::class_<MorseSide>(mod, "MorseSide")
        .def_readonly("applicable", &MorseSide::applicable)
        .def_readonly("flagged", &MorseSide::flagged)
        .def_readonly("best_lb", &MorseSide::best_lb)
        .def_readonly("worst_ub", &MorseSide::worst_ub)
        .def_readonly("rows", &MorseSide::rows);

    py::class_<MorsePoint>(mod, "MorsePoint")
        .def_readonly("x", &MorsePoint::x)
        .def_readonly("left", &MorsePoint::left)
        .def_readonly("right", &MorsePoint::right);

    py::class_<MorseReport>(mod, "MorseReport")
        .def_readonly("threshold", &MorseReport::threshold)
        .def_readonly("points", &MorseReport::points)
        .def("to_json", &morse_report_to_json);

    mod.def("tent", &tent, "The measure-preserving seed map");
    mod.def("build_g", &build_g, py::arg("gen"), py::arg("cutoff"),
            "Schedule approximant after `gen` generations at the given level cutoff");
    mod.def("eval_pl", &eval_pl, py::arg("g"), py::arg("x"));
    mod.def("verify_measure", &verify_measure, py::arg("g"));
    mod.def("preimage_measure", &preimage_measure, py::arg("g"), py::arg("u"), py::arg("v"));
    mod.def("sup_distance", &sup_distance, py::arg("g"), py::arg("h"));
    mod.def("plmap_from_json", &plmap_from_json, py::arg("text"));
    mod.def(
        "dini_scan",
        [](const Rational& x, const std::string& side, const std::vector<Rational>& scales,
           int samples) { return dini_scan(x, side_parse(side), scales, samples); },
        py::arg("x"), py::arg("side"), py::arg("scales"), py::arg("samples") = 8,
        "One-sided certified difference-quotient scan of the limit function");
    mod.def(
        "dini_scan_pl",
        [](const PLMap& g, const Rational& x, const std::string& side,
           const std::vector<Rational>& scales, int samples) {
            return dini_scan(PLTarget(g), x, side_parse(side), scales, samples);
        },
        py::arg("g"), py::arg("x"), py::arg("side"), py::arg("scales"), py::arg("samples") = 8,
        "Scan a piecewise-linear control map instead of the limit function");
    mod.def(
        "morse_report",
        [](const std::vector<Rational>& points, const std::vector<Rational>& scales,
           const Rational& threshold, int samples) {
            return morse_report(points, scales, threshold, samples);
        },
        py::arg("points"), py::arg("scales"), py::arg("threshold"), py::arg("samples") = 8);
}
