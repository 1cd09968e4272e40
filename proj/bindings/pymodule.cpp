// Python bindings for the main operations: load tangles, compute homology
// tables of closures, and run the twist-family invariant pipeline.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kh/limit.hpp"

namespace py = pybind11;
using namespace kh;

namespace {

py::dict table_dict(const GradedVectorSpace& v) {
    py::dict d;
    for (const auto& [uq, n] : v.dims)
        if (n) d[py::make_tuple(uq.first, uq.second)] = n;
    return d;
}

py::dict kappa_dict(const KappaInvariant& k) {
    py::dict cells;
    for (const auto& [cell, n] : k.table)
        if (n) cells[py::make_tuple(cell.first, cell.second)] = n;
    py::dict out;
    out["cells"] = cells;
    out["total"] = k.total;
    out["window"] = py::make_tuple(k.cert.lo, k.cert.hi);
    out["agreement"] = k.cert.agreement;
    out["top_surjective"] = k.cert.top_surjective;
    out["bottom_injective"] = k.cert.bottom_injective;
    return out;
}

}  // namespace

PYBIND11_MODULE(_khcore, m) {
    m.doc() = "Reduced Khovanov homology of tangle closures and twist-family invariants";

    py::register_exception<InputError>(m, "InputError");
    py::register_exception<ResourceError>(m, "ResourceError");
    py::register_exception<UnstabilizedError>(m, "UnstabilizedError");

    py::class_<SuturedTangle>(m, "SuturedTangle")
        .def_static("load", &SuturedTangle::load, py::arg("path"))
        .def_static("from_json", &SuturedTangle::from_json_text, py::arg("text"))
        .def("to_json", &SuturedTangle::to_json_text)
        .def("validate", &SuturedTangle::validate)
        .def("braid_like", &SuturedTangle::braid_like)
        .def("mirrored", &SuturedTangle::mirrored)
        .def_readwrite("name", &SuturedTangle::name)
        .def("__repr__", [](const SuturedTangle& t) {
            return "<SuturedTangle '" + t.name + "', " + std::to_string(t.crossings.size()) +
                   " crossings>";
        });

    // Homology of closure(t, level) as {(u, q2): dim}; q2 is twice the
    // quantum grading.
    m.def(
        "homology",
        [](const SuturedTangle& t, int level, std::size_t cap) {
            return table_dict(homology(t, level, cap));
        },
        py::arg("tangle"), py::arg("level") = 1, py::arg("cap") = kDefaultCrossingCap);

    m.def(
        "jones",
        [](const SuturedTangle& t, int level, std::size_t cap) {
            return jones_polynomial(homology(t, level, cap));
        },
        py::arg("tangle"), py::arg("level") = 1, py::arg("cap") = kDefaultCrossingCap);

    m.def(
        "determinant",
        [](const SuturedTangle& t, int level, std::size_t cap) {
            return determinant(homology(t, level, cap));
        },
        py::arg("tangle"), py::arg("level") = 1, py::arg("cap") = kDefaultCrossingCap);

    // The stabilized invariant as {"cells": {(u, 2delta): dim}, ...}.
    m.def(
        "kappa",
        [](const SuturedTangle& t, std::size_t cap) {
            TwistSystem sys(t, cap);
            return kappa_dict(compute_kappa(sys));
        },
        py::arg("tangle"), py::arg("cap") = kDefaultCrossingCap);

    m.def(
        "mirror_check",
        [](const SuturedTangle& t, std::size_t cap) {
            const AmphiResult res = amphicheirality_check(t, cap);
            py::dict out;
            out["verdict"] = res.verdict == AmphiVerdict::OBSTRUCTED ? "OBSTRUCTED" : "SILENT";
            out["kappa"] = kappa_dict(res.kappa);
            out["reflected"] = kappa_dict(res.reflected);
            return out;
        },
        py::arg("tangle"), py::arg("cap") = kDefaultCrossingCap);
}
