#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "zlab/experiments.hpp"
#include "zlab/functionals.hpp"
#include "zlab/ground_state.hpp"
#include "zlab/normal_form.hpp"
#include "zlab/variational.hpp"
#include "zlab/version.hpp"
#include "zlab/virial.hpp"

namespace py = pybind11;
using namespace zlab;

namespace {

py::array_t<cplx> to_numpy(const RadialField& f) {
    const auto v = f.values();
    return py::array_t<cplx>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<double> nodes(const RadialGrid& g) {
    const auto v = g.nodes();
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

RadialField from_numpy(const RadialGrid& g, py::array_t<cplx, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 1 || static_cast<std::size_t>(a.shape(0)) != g.size())
        throw std::invalid_argument("array length must match the grid size");
    return RadialField(g, std::vector<cplx>(a.data(), a.data() + a.shape(0)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Radial Zakharov system lab";
    m.attr("__version__") = version;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<RadialGrid>(m, "RadialGrid")
        .def(py::init(&make_grid), py::arg("n"), py::arg("r_max"))
        .def_property_readonly("size", &RadialGrid::size)
        .def_property_readonly("r_max", &RadialGrid::r_max)
        .def_property_readonly("spacing", &RadialGrid::spacing)
        .def_property_readonly("nodes", &nodes);

    py::class_<GroundState>(m, "GroundState")
        .def_readonly("q0", &GroundState::q0)
        .def_readonly("mass", &GroundState::mass)
        .def_readonly("e_s", &GroundState::e_s)
        .def_readonly("j", &GroundState::j)
        .def_readonly("threshold", &GroundState::threshold)
        .def_property_readonly("profile", [](const GroundState& gs) { return to_numpy(gs.profile); })
        .def_property_readonly("grid", &GroundState::grid)
        .def("evaluate", &GroundState::evaluate, py::arg("r"));

    m.def("solve_ground_state", &solve_ground_state, py::arg("grid"), py::arg("tol") = 1e-8);

    py::class_<ThresholdConstants>(m, "ThresholdConstants")
        .def_readonly("e_s_q", &ThresholdConstants::e_s_q)
        .def_readonly("m_q", &ThresholdConstants::m_q)
        .def_readonly("j_q", &ThresholdConstants::j_q)
        .def_readonly("product", &ThresholdConstants::product);
    m.def("threshold_constants", &threshold_constants, py::arg("ground_state"));

    m.def("mass", [](const RadialGrid& g, py::array_t<cplx> u) { return mass(from_numpy(g, u)); },
          py::arg("grid"), py::arg("u"));
    m.def("nls_energy", [](const RadialGrid& g, py::array_t<cplx> u) { return nls_energy(from_numpy(g, u)); },
          py::arg("grid"), py::arg("u"));
    m.def("k_functional", [](const RadialGrid& g, py::array_t<cplx> u) { return k_functional(from_numpy(g, u)); },
          py::arg("grid"), py::arg("u"));
    m.def(
        "zakharov_energy",
        [](const RadialGrid& g, py::array_t<cplx> u, py::array_t<cplx> n, double alpha) {
            return zakharov_energy(State(from_numpy(g, u), from_numpy(g, n), alpha));
        },
        py::arg("grid"), py::arg("u"), py::arg("n"), py::arg("alpha") = 1.0);

    m.def(
        "classify",
        [](const RadialGrid& g, py::array_t<cplx> u, py::array_t<cplx> n, const GroundState& gs, double alpha) {
            const auto c = classify(State(from_numpy(g, u), from_numpy(g, n), alpha), gs);
            py::dict d;
            d["verdict"] = to_string(c.verdict);
            d["product"] = c.product;
            d["threshold"] = c.threshold;
            d["k0"] = c.k0;
            d["lambda_star"] = c.lambda_star ? py::object(py::float_(*c.lambda_star)) : py::object(py::none());
            return d;
        },
        py::arg("grid"), py::arg("u"), py::arg("n"), py::arg("ground_state"), py::arg("alpha") = 1.0);

    m.def("b_function", &b_function, py::arg("mu"));
    m.def(
        "lemma24_audit",
        [](const GroundState& gs, long samples, std::uint64_t seed) {
            const auto a = lemma24_audit(gs, samples, seed);
            py::dict d;
            d["samples"] = a.samples;
            d["violations"] = a.violations;
            d["k_nonnegative"] = a.k_nonnegative;
            d["k_negative"] = a.k_negative;
            d["min_margin_nonnegative"] = a.min_margin_nonnegative;
            d["min_margin_negative"] = a.min_margin_negative;
            d["passed"] = a.passed();
            return d;
        },
        py::arg("ground_state"), py::arg("samples") = 10000, py::arg("seed") = 1);

    m.def("default_beta", &default_beta, py::arg("alpha"));
    m.def(
        "resonance_scan",
        [](double beta, double alpha, int samples) {
            const auto s = resonance_scan(beta, alpha, samples);
            py::dict d;
            d["beta"] = s.beta;
            d["alpha"] = s.alpha;
            d["beta_admissible"] = s.beta_admissible;
            d["min_ratio_ll"] = s.min_ratio_ll;
            d["max_ratio_ll"] = s.max_ratio_ll;
            d["min_ratio_xl"] = s.min_ratio_xl;
            d["min_ratio_wave"] = s.min_ratio_wave;
            return d;
        },
        py::arg("beta"), py::arg("alpha"), py::arg("samples") = 24);

    m.def("parse_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
          py::arg("text"), "Validates a scenario and returns it with every key filled in.");
    m.def(
        "run_scenario",
        [](const std::string& text, const std::string& output_dir) {
            auto cfg = parse_config(text);
            if (!output_dir.empty()) cfg.output_dir = output_dir;
            RunArtifacts art;
            {
                py::gil_scoped_release release;
                art = run_scenario(cfg);
            }
            py::dict d;
            d["output_dir"] = art.output_dir;
            d["trajectory_csv"] = art.trajectory_csv;
            d["summary_json"] = art.summary_json;
            d["summary"] = art.summary;
            d["passed"] = art.passed();
            return d;
        },
        py::arg("config"), py::arg("output_dir") = "", "Runs a scenario given as config text.");
}
