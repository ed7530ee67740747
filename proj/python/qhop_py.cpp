// Copyright 2026 The qhop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qhop/block_encoding.hpp"
#include "qhop/experiments.hpp"
#include "qhop/propagators.hpp"
#include "qhop/qdrift.hpp"
#include "qhop/resources.hpp"

namespace py = pybind11;
using namespace qhop;

namespace {

QuadratureRule rule_from(const std::string& kind, int nodes) { return {parse_quadrature_kind(kind), nodes}; }

py::dict to_dict(const ResourceEstimate& e) {
    py::dict d;
    d["method"] = e.method;
    d["segments"] = e.segments;
    d["nodes"] = e.nodes;
    d["step"] = e.step;
    d["delta"] = e.delta;
    d["step_error"] = e.step_error;
    d["ham_t_queries"] = e.ham_t_queries;
    d["oa_queries"] = e.oa_queries;
    d["ob_queries"] = e.ob_queries;
    d["gate_count"] = e.gate_count;
    d["ancillas"] = e.ancillas;
    return d;
}

}  // namespace

PYBIND11_MODULE(_qhop, m) {
    m.doc() = "qhop numerical library";

    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    m.def(
        "herm_exp", [](const Matrix& h, double t) { return herm_exp(HermitianOperator(h), t).matrix(); },
        py::arg("h"), py::arg("t"), "exp(-i t H) for Hermitian H.");
    m.def(
        "spectral_norm", [](const Matrix& a) { return spectral_norm(a); }, py::arg("a"));

    py::class_<SplitSystem>(m, "SplitSystem")
        .def(py::init([](const Matrix& a, const Matrix& b, double horizon) {
                 return SplitSystem(HermitianOperator(a),
                                    TimeDependentHamiltonian::constant(HermitianOperator(b), horizon));
             }),
             py::arg("a"), py::arg("b"), py::arg("horizon") = 1.0)
        .def_property_readonly("dim", &SplitSystem::dim)
        .def_property_readonly("alpha_b", &SplitSystem::alpha_b)
        .def_property_readonly("beta_b", &SplitSystem::beta_b)
        .def_property_readonly("alpha_ab", &SplitSystem::alpha_ab)
        .def_property_readonly("a", [](const SplitSystem& s) { return s.a().matrix(); })
        .def("b", [](const SplitSystem& s, double t) { return s.b()(t).matrix(); }, py::arg("t") = 0.0);

    m.def(
        "schrodinger_system",
        [](Index n, const std::string& potential, double horizon) {
            return schrodinger_system(Grid{n}, experiments::parse_potential(potential), horizon);
        },
        py::arg("n"), py::arg("potential") = "cos4x", py::arg("horizon") = 1.0);
    m.def(
        "wavepacket",
        [](Index n, double center, double width, double k) {
            return build_wavepacket(Grid{n}, center, width, k).amplitudes();
        },
        py::arg("n"), py::arg("center") = -1.0, py::arg("width") = 20.0, py::arg("k") = 0.0);

    m.def(
        "qhop_evolve",
        [](const SplitSystem& s, double total_time, int segments, const std::string& quadrature, int nodes) {
            const StepPlan plan = StepPlan::make(total_time, segments, rule_from(quadrature, nodes));
            return InteractionPicturePropagator(s, plan).evolve_qhop().matrix();
        },
        py::arg("system"), py::arg("total_time"), py::arg("segments"), py::arg("quadrature") = "trapezoid",
        py::arg("nodes") = 16, "Interaction-picture qHOP approximation of U(T, 0).");
    m.def(
        "dyson1_evolve",
        [](const SplitSystem& s, double total_time, int segments, const std::string& quadrature, int nodes) {
            const StepPlan plan = StepPlan::make(total_time, segments, rule_from(quadrature, nodes));
            return InteractionPicturePropagator(s, plan).evolve_dyson1().matrix();
        },
        py::arg("system"), py::arg("total_time"), py::arg("segments"), py::arg("quadrature") = "trapezoid",
        py::arg("nodes") = 16);
    m.def(
        "trotter2_evolve",
        [](const SplitSystem& s, double total_time, int segments) {
            return matrix_power(trotter2_step(s, total_time / segments).matrix(), segments);
        },
        py::arg("system"), py::arg("total_time"), py::arg("segments"));
    m.def(
        "operator_error", [](const Matrix& a, const Matrix& b) { return operator_error(a, b); }, py::arg("approx"),
        py::arg("exact"));

    m.def(
        "nodes_weights",
        [](const std::string& kind, int nodes, int step, double h) {
            std::vector<std::pair<double, double>> out;
            for (const auto& n : nodes_weights(rule_from(kind, nodes), step, h)) out.emplace_back(n.time, n.weight);
            return out;
        },
        py::arg("kind"), py::arg("nodes"), py::arg("step"), py::arg("h"));

    py::class_<BlockEncoding>(m, "BlockEncoding")
        .def_property_readonly("unitary", [](const BlockEncoding& b) { return b.unitary().matrix(); })
        .def_property_readonly("block", &BlockEncoding::block)
        .def_property_readonly("alpha", &BlockEncoding::alpha)
        .def_property_readonly("ancillas", &BlockEncoding::ancillas)
        .def_property_readonly("epsilon", &BlockEncoding::epsilon);
    m.def(
        "dilate", [](const Matrix& a, double alpha, double epsilon) { return dilate(a, alpha, epsilon); },
        py::arg("a"), py::arg("alpha"), py::arg("epsilon") = 0.0);
    m.def("product", &product, py::arg("a"), py::arg("b"));
    m.def(
        "ham_t", [](const std::vector<Matrix>& samples, double alpha) { return ham_t(samples, alpha); },
        py::arg("samples"), py::arg("alpha"));
    m.def("lcu_average", &lcu_average, py::arg("select"));

    m.def(
        "qhop_plan",
        [](double alpha, double prefactor, int exponent, double max_derivative, double total_time, double epsilon,
           int ancillas) {
            return to_dict(qhop_plan({alpha, prefactor, exponent, max_derivative, total_time, epsilon, ancillas}));
        },
        py::arg("alpha"), py::arg("prefactor"), py::arg("exponent"), py::arg("max_derivative"),
        py::arg("total_time"), py::arg("epsilon"), py::arg("ancillas") = 1);

    m.def(
        "conjugation_superoperator", [](const Matrix& u) { return conjugation_superoperator(u); }, py::arg("u"));

    m.def(
        "_run_csv",
        [](const std::string& subcommand, const std::string& config, bool timing) {
            const auto c = experiments::make_config(subcommand, experiments::Json::parse(config));
            return experiments::to_csv(c, experiments::run(c), timing);
        },
        py::arg("subcommand"), py::arg("config"), py::arg("timing") = false);
    m.def(
        "_estimate",
        [](const std::string& config) {
            std::vector<std::string> out;
            for (const auto& r : experiments::estimate(experiments::make_config("estimate", experiments::Json::parse(config)))) {
                out.push_back(r.dump());
            }
            return out;
        },
        py::arg("config"));
}
