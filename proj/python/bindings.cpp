#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hhgq/cutoff.hpp"
#include "hhgq/errors.hpp"
#include "hhgq/io.hpp"
#include "hhgq/lattice.hpp"
#include "hhgq/observables.hpp"
#include "hhgq/operators.hpp"

namespace py = pybind11;
using namespace hhgq;

namespace {

py::dict series_dict(const Trajectory& traj) {
    const ObservableSeries s = evaluate_series(traj);
    py::dict out;
    out["t"] = py::array_t<double>(py::cast(s.times));
    py::list modes;
    for (const auto& recs : s.per_mode) {
        std::vector<double> n, q, lp, lm, phase, slope;
        for (const auto& r : recs) {
            n.push_back(r.n_mean);
            q.push_back(r.q);
            lp.push_back(r.ellipse.lambda_plus);
            lm.push_back(r.ellipse.lambda_minus);
            phase.push_back(r.ellipse.phase);
            slope.push_back(r.slope.value_or(std::nan("")));
        }
        py::dict m;
        m["n_mean"] = py::array_t<double>(py::cast(n));
        m["q"] = py::array_t<double>(py::cast(q));
        m["dg2_slope"] = py::array_t<double>(py::cast(slope));
        m["lambda_plus"] = py::array_t<double>(py::cast(lp));
        m["lambda_minus"] = py::array_t<double>(py::cast(lm));
        m["phase"] = py::array_t<double>(py::cast(phase));
        modes.append(m);
    }
    out["modes"] = modes;
    py::list warn;
    for (const auto& w : traj.warnings) warn.append(w);
    out["warnings"] = warn;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "quantum-optical statistics of high-harmonic emission from a two-level system";
    m.attr("__version__") = version_string();

    py::register_exception<ConfigError>(m, "HhgqConfigError", PyExc_ValueError);
    py::register_exception<PhysicsGuardError>(m, "PhysicsGuardError", PyExc_RuntimeError);
    py::register_exception<UndefinedStatisticError>(m, "UndefinedStatisticError",
                                                    PyExc_ArithmeticError);

    py::enum_<DriveShape>(m, "DriveShape")
        .value("sin2_pulse", DriveShape::Sin2Pulse)
        .value("monochromatic", DriveShape::Monochromatic);

    py::class_<DriveConfig>(m, "DriveConfig")
        .def(py::init([](DriveShape shape, double A, double omega_e, double omega_f, double phi) {
                 DriveConfig d;
                 d.shape = shape;
                 d.A = A;
                 d.omega_e = omega_e;
                 d.omega_f = omega_f;
                 d.phi = phi;
                 return d;
             }),
             py::arg("shape") = DriveShape::Sin2Pulse, py::arg("A") = 12.0,
             py::arg("omega_e") = 0.05, py::arg("omega_f") = 1.0, py::arg("phi") = M_PI / 2)
        .def_readwrite("A", &DriveConfig::A)
        .def_readwrite("omega_e", &DriveConfig::omega_e)
        .def_readwrite("omega_f", &DriveConfig::omega_f)
        .def_readwrite("phi", &DriveConfig::phi)
        .def_property_readonly("pulse_end", &DriveConfig::pulse_end);

    py::class_<CouplingRule>(m, "CouplingRule")
        .def(py::init([](double c) {
                 CouplingRule r;
                 r.c = c;
                 return r;
             }),
             py::arg("c") = 0.005)
        .def_readwrite("c", &CouplingRule::c);

    py::class_<ModeSet>(m, "ModeSet")
        .def(py::init([](std::vector<double> omega, std::vector<double> coupling,
                         std::vector<int> n_max) {
                 ModeSet ms;
                 ms.omega = std::move(omega);
                 ms.coupling = std::move(coupling);
                 ms.n_max = std::move(n_max);
                 ms.validate();
                 return ms;
             }),
             py::arg("omega"), py::arg("coupling"), py::arg("n_max"))
        .def_static("from_rule", &ModeSet::from_rule, py::arg("omega"), py::arg("rule"),
                    py::arg("n_max") = 8)
        .def_readonly("omega", &ModeSet::omega)
        .def_readonly("coupling", &ModeSet::coupling)
        .def("gamma", &ModeSet::gamma);

    py::class_<IntegratorOptions>(m, "IntegratorOptions")
        .def(py::init([](int steps_per_cycle, int sample_stride, double dt) {
                 IntegratorOptions o;
                 o.steps_per_cycle = steps_per_cycle;
                 o.sample_stride = sample_stride;
                 o.dt = dt;
                 return o;
             }),
             py::arg("steps_per_cycle") = 200, py::arg("sample_stride") = 20, py::arg("dt") = 0.0);

    py::class_<QuantumState>(m, "QuantumState")
        .def_property_readonly("amplitudes",
                               [](const QuantumState& st) { return Vector(st.amplitudes); })
        .def_property_readonly("norm", &QuantumState::norm)
        .def_property_readonly("n_modes", &QuantumState::n_modes);

    m.def("ground_vacuum", [](const std::vector<int>& n_max) {
        std::vector<FockBasis> b;
        for (int nm : n_max) b.push_back(FockBasis{nm, {0.0, 0.0}});
        return QuantumState::ground_vacuum(b);
    });
    m.def("coherent_state", &QuantumState::coherent, py::arg("alphas"), py::arg("n_max"));

    m.def("displacement_matrix_element", &displacement_matrix_element, py::arg("n"), py::arg("m"),
          py::arg("gamma"));
    m.def("classical_rabi", &classical_rabi, py::arg("t"), py::arg("drive"));
    m.def("coupling_for", &coupling_for, py::arg("omega"), py::arg("rule"));

    m.def("mandel_q", &mandel_q, py::arg("state"), py::arg("mode") = 0);
    m.def("g2_equal_time", &g2_equal_time, py::arg("state"), py::arg("mode") = 0);
    m.def("antibunching_slope", &antibunching_slope, py::arg("state"), py::arg("mode"),
          py::arg("coupling"));
    m.def("cross_correlation", &cross_correlation, py::arg("state"), py::arg("mode_i"),
          py::arg("mode_j"));
    m.def("three_mode_g3", &three_mode_g3, py::arg("state"), py::arg("i") = 0, py::arg("j") = 1,
          py::arg("k") = 2);

    py::class_<NoiseEllipse>(m, "NoiseEllipse")
        .def_readonly("lambda_plus", &NoiseEllipse::lambda_plus)
        .def_readonly("lambda_minus", &NoiseEllipse::lambda_minus)
        .def_readonly("phase", &NoiseEllipse::phase)
        .def_property_readonly("squeezed", &NoiseEllipse::squeezed);
    m.def("noise_ellipse", &noise_ellipse, py::arg("state"), py::arg("mode") = 0);

    m.def(
        "run_classical_drive",
        [](const DriveConfig& drive, const ModeSet& modes, double omega0, double t0, double t1,
           const IntegratorOptions& opts) {
            QuantumState init =
                QuantumState::ground_vacuum(modes.plain_bases());
            return series_dict(propagate_displaced(init, drive, modes, omega0, t0, t1, opts));
        },
        py::arg("drive"), py::arg("modes"), py::arg("omega0") = 1.0, py::arg("t0") = 0.0,
        py::arg("t1") = 0.0, py::arg("options") = IntegratorOptions{});

    m.def(
        "run_fock_direct",
        [](const DriveConfig& drive, const ModeSet& modes, double omega0, double t0, double t1,
           const IntegratorOptions& opts) {
            QuantumState init = QuantumState::ground_vacuum(modes.plain_bases());
            return series_dict(propagate_fock_direct(init, drive, modes, omega0, t0, t1, opts));
        },
        py::arg("drive"), py::arg("modes"), py::arg("omega0") = 1.0, py::arg("t0") = 0.0,
        py::arg("t1") = 0.0, py::arg("options") = IntegratorOptions{});

    py::class_<FloquetSolution>(m, "FloquetSolution")
        .def_readonly("xi", &FloquetSolution::xi)
        .def_readonly("eta", &FloquetSolution::eta)
        .def_readonly("B", &FloquetSolution::B)
        .def_readonly("theta", &FloquetSolution::theta)
        .def_readonly("eps_plus", &FloquetSolution::eps_plus)
        .def_readonly("eps_minus", &FloquetSolution::eps_minus)
        .def_property_readonly("delta_eps", &FloquetSolution::delta_eps)
        .def_property_readonly("xi_offset", &FloquetSolution::xi_offset)
        .def_property_readonly("times", [](const FloquetSolution& s) { return s.c.times; })
        .def_property_readonly("c_plus", [](const FloquetSolution& s) { return s.c.c_plus; })
        .def_property_readonly("c_minus", [](const FloquetSolution& s) { return s.c.c_minus; })
        .def("dipole_expectation", [](const FloquetSolution& s) { return dipole_expectation(s); });

    m.def("solve_xi", &solve_xi, py::arg("A"), py::arg("omega"), py::arg("omega0"));
    m.def(
        "quasi_energies",
        [](double A, double omega, double omega0) {
            FloquetSolution s = solve_floquet(A, omega, omega0);
            return py::make_tuple(s.eps_plus, s.eps_minus, s.theta);
        },
        py::arg("A"), py::arg("omega"), py::arg("omega0"));
    m.def("solve_floquet", &solve_floquet, py::arg("A"), py::arg("omega"), py::arg("omega0"));
    m.def(
        "propagate_c",
        [](FloquetSolution& sol, double cycles, int steps_per_cycle, int sample_stride,
           Complex init_plus, Complex init_minus) {
            propagate_C(sol, cycles, steps_per_cycle, sample_stride, init_plus, init_minus);
            return sol;
        },
        py::arg("solution"), py::arg("cycles"), py::arg("steps_per_cycle") = 2048,
        py::arg("sample_stride") = 8, py::arg("init_plus") = Complex{1.0, 0.0},
        py::arg("init_minus") = Complex{1.0, 0.0});
    m.def("perturbative_cross_correlation", &perturbative_cross_correlation, py::arg("solution"),
          py::arg("omega1"), py::arg("omega2"));

    m.def(
        "run_backaction",
        [](double A, double phi, double omega_f, double omega_e, std::array<double, 3> coupling,
           int points_per_side, double t_end, int steps_per_cycle, int sample_stride,
           double omega0) {
            LatticeSpec spec = LatticeSpec::pulse_modes(A, phi, omega_f, omega_e, coupling,
                                                        points_per_side);
            LatticeState init = init_pulse_state(A, phi, spec);
            if (t_end <= 0.0) t_end = M_PI / omega_e;
            LatticeTrajectory traj =
                evolve_lattice(init, omega0, t_end, steps_per_cycle, sample_stride);
            BackactionSeries s = backaction_observables(traj);
            py::dict out;
            out["t"] = py::array_t<double>(py::cast(s.times));
            out["sigma_x"] = py::array_t<double>(py::cast(s.sigma_x));
            out["e_mean"] = py::array_t<double>(py::cast(s.e_mean));
            out["g3"] = py::array_t<double>(py::cast(s.g3));
            out["norm"] = py::array_t<double>(py::cast(s.norm));
            py::list q;
            for (int j = 0; j < 3; ++j) q.append(py::array_t<double>(py::cast(s.q[j])));
            out["q"] = q;
            py::list n;
            for (int j = 0; j < 3; ++j) n.append(py::array_t<double>(py::cast(s.n_mean[j])));
            out["n_mean"] = n;
            return out;
        },
        py::arg("A"), py::arg("phi"), py::arg("omega_f") = 1.0, py::arg("omega_e") = 0.05,
        py::arg("coupling") = std::array<double, 3>{0.4, 0.4, 0.4}, py::arg("points_per_side") = 5,
        py::arg("t_end") = 0.0, py::arg("steps_per_cycle") = 400, py::arg("sample_stride") = 40,
        py::arg("omega0") = 1.0);
}
