#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qwalk/checks.hpp"
#include "qwalk/dynamics.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/io.hpp"
#include "qwalk/open_systems.hpp"
#include "qwalk/phase_space.hpp"
#include "qwalk/scenarios.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/trapping.hpp"

namespace py = pybind11;
using namespace qwalk;

// JSON crosses the boundary as text; the Python side does json.dumps / json.loads.

PYBIND11_MODULE(_core, m) {
    m.doc() = "qwalk core bindings";
    m.attr("__version__") = QWALK_VERSION;

    py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SpectralError>(m, "SpectralError", PyExc_RuntimeError);

    m.def("graph_json", [](const std::string& spec) { return graph_to_json(build_graph(nlohmann::json::parse(spec))).dump(); });
    m.def("coupling_matrix", [](const std::string& spec, double gamma) {
        return coupling_matrix(build_graph(nlohmann::json::parse(spec)), gamma);
    }, py::arg("spec"), py::arg("gamma") = 1.0);

    m.def("eigh", [](const Eigen::MatrixXd& h) {
        const Spectrum s = decompose_symmetric(h);
        return py::make_tuple(s.values, s.vectors);
    });
    m.def("eig_biorthogonal", [](const Eigen::MatrixXcd& h) {
        const BiorthSpectrum s = decompose_biorthogonal(h);
        return py::make_tuple(s.values, s.right, s.left);
    });

    m.def("propagate_quantum", [](const Eigen::MatrixXd& h, int j, const std::vector<double>& t) {
        return propagate_quantum(decompose_symmetric(h), j, t).values;
    });
    m.def("propagate_classical", [](const Eigen::MatrixXd& h, int j, const std::vector<double>& t, double gamma) {
        return propagate_classical(decompose_symmetric(h), j, t, gamma).values;
    }, py::arg("h"), py::arg("j"), py::arg("t"), py::arg("gamma") = 1.0);
    m.def("long_time_average", [](const Eigen::MatrixXd& h) { return long_time_average(decompose_symmetric(h)).chi; });
    m.def("ring_lta_closed", &ring_lta_closed);

    m.def("quantum_survival", [](const Eigen::MatrixXd& h, const std::vector<int>& traps, double gamma,
                                 const std::vector<double>& t) {
        const QuantumSurvival qs(decompose_biorthogonal(trap_hamiltonian(h, {traps, gamma})), traps);
        return qs(t);
    });
    m.def("dark_state_count", [](int n, int m_traps, const std::string& arrangement) {
        if (arrangement != "periodic" && arrangement != "sequential")
            throw ConfigError("arrangement must be periodic or sequential");
        const DarkStates d =
            dark_state_count(n, m_traps, arrangement == "periodic" ? Arrangement::periodic : Arrangement::sequential);
        return py::make_tuple(d.count, d.plateau);
    });

    m.def("wigner_ring", [](int n, int j, double t) { return wigner_ring_closed(n, j, t); });
    m.def("gurvitz_populations", &gurvitz_populations, py::arg("n"), py::arg("lam"), py::arg("m"), py::arg("t"),
          py::arg("start") = 0, py::arg("dim") = 1);
    m.def("dimer_pi_trap", [](double gamma, double v, double t) {
        DimerSpec d;
        d.gamma = gamma;
        d.v = v;
        return dimer_pi_trap(d, t);
    });

    m.def("scenarios", [] {
        std::vector<std::string> names;
        for (const auto& s : list_scenarios()) names.push_back(s.name);
        return names;
    });
    m.def("run_scenario", [](const std::string& cfg) {
        py::gil_scoped_release release;
        return run_scenario(ScenarioConfig::from_json(nlohmann::json::parse(cfg))).manifest.dump();
    });
    m.def("check", [](int id) {
        CriterionReport r;
        {
            py::gil_scoped_release release;
            r = run_criterion(id);
        }
        py::list items;
        for (const auto& it : r.items) items.append(py::make_tuple(it.name, it.pass, it.info, it.detail));
        return py::make_tuple(r.pass(), r.summary(), items);
    });
}
