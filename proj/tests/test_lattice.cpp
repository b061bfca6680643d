#include <doctest.h>

#include <cmath>

#include "hhgq/errors.hpp"
#include "hhgq/lattice.hpp"

using namespace hhgq;

namespace {

std::array<Matrix, 3> grams(const LatticeSpec& spec) {
    LatticeState st = init_pulse_state(0.0, 0.0, spec);
    return st.gram;
}

double three_mode_mean_field(double A, double phi, const LatticeSpec& spec, double t) {
    return 0.5 * A *
           (std::sin(spec.omega[0] * t + phi) - 0.5 * std::sin(spec.omega[1] * t + phi) -
            0.5 * std::sin(spec.omega[2] * t + phi));
}

}  // namespace

TEST_CASE("init: vacuum at A = 0 and reconstruction of the pulse amplitudes") {
    LatticeSpec spec = LatticeSpec::pulse_modes(0.0, 0.0, 1.0, 0.05, {0.0, 0.0, 0.0}, 3);
    LatticeState st = init_pulse_state(0.0, 0.0, spec);
    CHECK(std::abs(st.physical_norm() - 1.0) < 1e-10);
    const LatticeMoments m = lattice_moments(st.spec, st.gram, st.c_plus, st.c_minus, 0.0);
    for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(m.n[j] / m.norm2) < 1e-12);
        CHECK(std::abs(m.x[j] / m.norm2) < 1e-12);
    }

    const double A = 10.0, phi = M_PI / 2.0;
    LatticeSpec pulse = LatticeSpec::pulse_modes(A, phi, 1.0, 0.05, {0.0, 0.0, 0.0}, 5);
    LatticeState ps = init_pulse_state(A, phi, pulse);
    const LatticeMoments pm = lattice_moments(ps.spec, ps.gram, ps.c_plus, ps.c_minus, 0.0);
    // resonant-mode occupation of the coherent pulse: (A/2)^2
    CHECK(pm.n[0] / pm.norm2 == doctest::Approx(0.25 * A * A).epsilon(1e-8));
    CHECK(pm.n[1] / pm.norm2 == doctest::Approx(A * A / 16.0).epsilon(1e-8));
}

TEST_CASE("init: amplitude outside the lattice coverage is rejected") {
    LatticeSpec spec = LatticeSpec::pulse_modes(10.0, 0.0, 1.0, 0.05, {0.0, 0.0, 0.0}, 3);
    spec.center = {Complex{0.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0}};  // far from i A/2
    CHECK_THROWS_AS((void)init_pulse_state(10.0, 0.0, spec), PhysicsGuardError);
}

TEST_CASE("overlap condition cap") {
    LatticeSpec spec = LatticeSpec::pulse_modes(4.0, 0.0, 1.0, 0.05, {0.0, 0.0, 0.0}, 5, 0.2);
    spec.condition_cap = 1e6;  // dense lattice -> huge condition number
    CHECK_THROWS_AS((void)init_pulse_state(4.0, 0.0, spec), PhysicsGuardError);
}

TEST_CASE("free three-mode field reproduces the classical pulse mean") {
    const double A = 8.0, phi = M_PI / 2.0, omega_e = 0.05;
    LatticeSpec spec = LatticeSpec::pulse_modes(A, phi, 1.0, omega_e, {0.0, 0.0, 0.0}, 3);
    LatticeState st = init_pulse_state(A, phi, spec);
    LatticeTrajectory traj = evolve_lattice(st, 1.0, M_PI / omega_e, 120, 60);
    BackactionSeries s = backaction_observables(traj);
    for (size_t i = 0; i < s.times.size(); ++i) {
        const double want = three_mode_mean_field(A, phi, spec, s.times[i]);
        CHECK(std::abs(s.e_mean[i] - want) < 1e-6 * std::max(1.0, std::abs(want)));
        // free-field photon numbers stay put
        CHECK(s.n_mean[0][i] == doctest::Approx(0.25 * A * A).epsilon(1e-7));
        CHECK(std::abs(s.q[0][i]) < 1e-8);
        CHECK(std::abs(s.g3[i] - 1.0) < 1e-8);
    }
}

TEST_CASE("carrier analyticity with frozen coefficients") {
    LatticeSpec spec = LatticeSpec::pulse_modes(6.0, 0.3, 1.0, 0.05, {0.4, 0.4, 0.4}, 3);
    LatticeState st = init_pulse_state(6.0, 0.3, spec);
    // single branch: c- = 0
    st.c_minus.setZero();

    const double t_probe = 2.7;
    const LatticeMoments m = lattice_moments(st.spec, st.gram, st.c_plus, st.c_minus, t_probe);
    for (int j = 0; j < 3; ++j) {
        const double g = spec.gamma(j);
        const Complex alpha = spec.center[j];  // the projected state is the center point
        const Complex want = g + (alpha - g) * std::polar(1.0, -spec.omega[j] * t_probe);
        CHECK(std::abs(m.a[j] / m.norm2 - want) < 1e-9);
    }
}

TEST_CASE("omega0 = 0 freezes the lattice coefficients") {
    LatticeSpec spec = LatticeSpec::pulse_modes(6.0, 0.0, 1.0, 0.05, {0.3, 0.3, 0.3}, 3);
    LatticeState st = init_pulse_state(6.0, 0.0, spec);
    LatticeTrajectory traj = evolve_lattice(st, 0.0, 5.0, 100, 100);
    CHECK((traj.c_plus.back() - st.c_plus).norm() < 1e-12);
    CHECK((traj.c_minus.back() - st.c_minus).norm() < 1e-12);
}

TEST_CASE("coupled run conserves the physical norm") {
    LatticeSpec spec = LatticeSpec::pulse_modes(8.0, M_PI / 2.0, 1.0, 0.05, {0.3, 0.3, 0.3}, 5);
    LatticeState st = init_pulse_state(8.0, M_PI / 2.0, spec);
    const double norm0 = st.physical_norm();
    LatticeTrajectory traj = evolve_lattice(st, 1.0, 12.0, 400, 100);
    LatticeState probe = st;
    probe.c_plus = traj.c_plus.back();
    probe.c_minus = traj.c_minus.back();
    CHECK(std::abs(probe.physical_norm() - norm0) < 1e-6);
}
