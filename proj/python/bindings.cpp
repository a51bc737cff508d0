// Copyright 2026 The dynmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dynmap/channel.hpp"
#include "dynmap/commands.hpp"
#include "dynmap/dilation.hpp"
#include "dynmap/errors.hpp"
#include "dynmap/instrument.hpp"
#include "dynmap/matcore.hpp"
#include "dynmap/spec_io.hpp"

#include <sstream>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace dynmap;

namespace {

std::vector<KrausTerm> to_terms(const std::vector<std::pair<double, CMatrix>> &pairs) {
    std::vector<KrausTerm> terms;
    terms.reserve(pairs.size());
    for (const auto &[w, op] : pairs) {
        terms.push_back({w, op});
    }
    return terms;
}

py::dict outcome_dict(const OutcomeResult &o) {
    py::dict d;
    d["label"] = o.label;
    d["probability"] = o.probability;
    d["post_state"] = o.post_state ? py::cast(o.post_state->matrix()) : py::none();
    d["raw_unnormalized"] = o.raw_unnormalized;
    return d;
}

py::list outcome_list(const std::vector<OutcomeResult> &results) {
    py::list out;
    for (const OutcomeResult &o : results) {
        out.append(outcome_dict(o));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_dynmap, m) {
    m.doc() = "Unitary dilations of dynamical maps and quantum instruments";
    m.attr("__version__") = "0.1.0";

    static py::exception<Error> error_type(m, "DynmapError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error &e) {
            py::object instance = py::reinterpret_borrow<py::object>(error_type)(e.what());
            instance.attr("code") = std::string(error_name(e.code()));
            PyErr_SetObject(error_type.ptr(), instance.ptr());
        }
    });

    // matcore
    m.def("dagger", &dagger, "m"_a);
    m.def("kron", &kron, "a"_a, "b"_a);
    m.def(
        "partial_trace_b",
        [](const CMatrix &mat, std::size_t dim_a, std::size_t dim_b) {
            return partial_trace_b(mat, CompositeIndex{dim_a, dim_b});
        },
        "m"_a, "dim_a"_a, "dim_b"_a);
    m.def(
        "hermitian_eig",
        [](const CMatrix &h, double tol) {
            HermitianEigen e = hermitian_eig(h, tol);
            return py::make_tuple(e.values, e.vectors);
        },
        "h"_a, "tol"_a = kDefaultTol, "Returns (eigenvalues descending, eigenvector columns).");
    m.def("psd_sqrt", &psd_sqrt, "m"_a, "tol"_a = kDefaultTol);
    m.def("complete_to_unitary", &complete_to_unitary, "columns"_a, "tol"_a = kDefaultTol);

    // channel
    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def(py::init<CMatrix, double>(), "matrix"_a, "tol"_a = kDefaultTol)
        .def_property_readonly("dim", &DensityMatrix::dim)
        .def_property_readonly("matrix", &DensityMatrix::matrix);

    py::class_<DynamicalMap>(m, "DynamicalMap")
        .def(py::init<std::size_t, CMatrix, double>(), "dim"_a, "bmat"_a, "tol"_a = kDefaultTol)
        .def_property_readonly("dim", &DynamicalMap::dim)
        .def_property_readonly("bmat", &DynamicalMap::bmat);

    py::class_<KrausTerm>(m, "KrausTerm")
        .def_readonly("weight", &KrausTerm::weight)
        .def_readonly("op", &KrausTerm::op);

    py::class_<CanonicalDecomposition>(m, "CanonicalDecomposition")
        .def_readonly("dim", &CanonicalDecomposition::dim)
        .def_readonly("terms", &CanonicalDecomposition::terms)
        .def_property_readonly("rank", &CanonicalDecomposition::rank);

    py::class_<MapProperties>(m, "MapProperties")
        .def_readonly("hermiticity_preserving", &MapProperties::hermiticity_preserving)
        .def_readonly("trace_preserving", &MapProperties::trace_preserving)
        .def_readonly("completely_positive", &MapProperties::completely_positive)
        .def_readonly("min_eigenvalue", &MapProperties::min_eigenvalue)
        .def_readonly("trace_defect", &MapProperties::trace_defect);

    m.def(
        "map_from_kraus",
        [](const std::vector<std::pair<double, CMatrix>> &terms, std::size_t dim) {
            return map_from_kraus(to_terms(terms), dim);
        },
        "terms"_a, "dim"_a, "terms: list of (weight, operator) pairs");
    m.def(
        "apply_map", [](const DynamicalMap &map, const CMatrix &rho) { return apply_map(map, rho); }, "map"_a,
        "rho"_a);
    m.def("effect_operator", &effect_operator, "map"_a);
    m.def("canonical_decompose", &canonical_decompose, "map"_a, "trunc_tol"_a = kTruncationTol);
    m.def("check_properties", &check_properties, "map"_a, "tol"_a = kDefaultTol);
    m.def("random_cptp", &random_cptp, "dim"_a, "kraus_rank"_a, "seed"_a);

    // dilation
    py::class_<DilationUnitary>(m, "DilationUnitary")
        .def_readonly("sys_dim", &DilationUnitary::sys_dim)
        .def_readonly("anc_dim", &DilationUnitary::anc_dim)
        .def_readonly("u", &DilationUnitary::u);

    py::class_<VerificationReport>(m, "VerificationReport")
        .def_readonly("trials", &VerificationReport::trials)
        .def_readonly("anc_dim", &VerificationReport::anc_dim)
        .def_readonly("max_error", &VerificationReport::max_error)
        .def_readonly("unitarity_residual", &VerificationReport::unitarity_residual);

    m.def("build_dilation_isometry", &build_dilation_isometry, "dec"_a);
    m.def(
        "build_dilation_unitary",
        [](const CanonicalDecomposition &dec, std::optional<std::uint64_t> random_seed) {
            return build_dilation_unitary(dec, Completion{random_seed});
        },
        "dec"_a, "random_seed"_a = py::none());
    m.def(
        "simulate_via_dilation",
        [](const DilationUnitary &du, const DensityMatrix &rho) {
            DilationResult r = simulate_via_dilation(du, rho);
            return py::make_tuple(r.joint, r.reduced);
        },
        "du"_a, "rho"_a, "Returns (joint, reduced).");
    m.def("verify_dilation", &verify_dilation, "map"_a, "trials"_a, "seed"_a);

    // instrument
    py::class_<Instrument>(m, "Instrument")
        .def(py::init([](const std::vector<std::pair<std::string, DynamicalMap>> &maps) {
                 std::vector<LabeledMap> labeled;
                 for (const auto &[label, map] : maps) {
                     labeled.push_back({label, map});
                 }
                 return Instrument(std::move(labeled));
             }),
             "maps"_a, "maps: list of (label, DynamicalMap)")
        .def_property_readonly("dim", &Instrument::dim)
        .def_property_readonly("complete", &Instrument::complete)
        .def_property_readonly("padded_index", &Instrument::padded_index)
        .def_property_readonly("labels", [](const Instrument &inst) {
            std::vector<std::string> labels;
            for (const LabeledMap &lm : inst.maps()) {
                labels.push_back(lm.label);
            }
            return labels;
        })
        .def("__len__", &Instrument::size);

    py::class_<Sector>(m, "Sector")
        .def_readonly("label", &Sector::label)
        .def_readonly("begin", &Sector::begin)
        .def_readonly("end", &Sector::end);

    py::class_<InstrumentDilation>(m, "InstrumentDilation")
        .def_readonly("sys_dim", &InstrumentDilation::sys_dim)
        .def_readonly("anc_dim", &InstrumentDilation::anc_dim)
        .def_readonly("u", &InstrumentDilation::u)
        .def_readonly("sectors", &InstrumentDilation::sectors);

    m.def(
        "check_completeness",
        [](const Instrument &inst, double tol) {
            Completeness c = check_completeness(inst, tol);
            return py::make_tuple(c.complete, c.defect);
        },
        "inst"_a, "tol"_a = kCompletenessTol, "Returns (complete, defect).");
    m.def("pad_to_complete", &pad_to_complete, "inst"_a, "tol"_a = kDefaultTol);
    m.def(
        "build_instrument_dilation", [](const Instrument &inst) { return build_instrument_dilation(inst); },
        "inst"_a);
    m.def(
        "measure_via_dilation",
        [](const InstrumentDilation &dil, const DensityMatrix &rho, double threshold) {
            return outcome_list(measure_via_dilation(dil, rho, threshold));
        },
        "dil"_a, "rho"_a, "threshold"_a = kPostSelectThreshold);
    m.def(
        "outcome_statistics",
        [](const Instrument &inst, const DensityMatrix &rho, double threshold) {
            return outcome_list(outcome_statistics(inst, rho, threshold));
        },
        "inst"_a, "rho"_a, "threshold"_a = kPostSelectThreshold);
    m.def(
        "sample_outcomes",
        [](const InstrumentDilation &dil, const DensityMatrix &rho, std::uint64_t shots, std::uint64_t seed) {
            py::dict hist;
            for (const HistogramEntry &e : sample_outcomes(dil, rho, shots, seed)) {
                hist[py::str(e.label)] = e.count;
            }
            return hist;
        },
        "dil"_a, "rho"_a, "shots"_a, "seed"_a);
    m.def("random_instrument", &random_instrument, "dim"_a, "outcomes"_a, "seed"_a);

    // files and CLI
    m.def("load_channel", &io::load_channel, "path"_a);
    m.def("load_instrument", &io::load_instrument, "path"_a);
    m.def("load_state", &io::load_state, "path"_a);
    m.def(
        "run_command",
        [](const std::vector<std::string> &args) {
            std::ostringstream out;
            int status = cli::run_command(args, out);
            return py::make_tuple(status, out.str());
        },
        "args"_a, "Runs a dynmap subcommand; returns (exit status, output text).");
}
