#include <doctest.h>

#include <cmath>
#include <complex>

#include "hhgq/bessel.hpp"
#include "hhgq/errors.hpp"
#include "hhgq/floquet.hpp"
#include "hhgq/observables.hpp"
#include "hhgq/operators.hpp"

using namespace hhgq;

TEST_CASE("bessel recurrence against the standard library") {
    for (double x : {0.1, 1.0, 5.0, 12.0, 25.0}) {
        const auto J = bessel_j_array(30, x);
        for (int n = 0; n <= 30; ++n) {
            const double ref = std::cyl_bessel_j(double(n), x);
            CHECK(std::abs(J[n] - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
    const auto J0 = bessel_j_array(5, 0.0);
    CHECK(J0[0] == 1.0);
    CHECK(J0[3] == 0.0);
}

TEST_CASE("solve_xi: weak field limit, strong field, defining residual") {
    const double xi_weak = solve_xi(1e-3, 1.0, 1.0);
    CHECK(std::abs(xi_weak - 0.5) < 1e-3 * 0.5);

    const double xi_det = solve_xi(1e-3, 1.3, 0.7);
    CHECK(std::abs(xi_det - 1.3 / 2.0) < 1e-3);

    const double xi_strong = solve_xi(12.0, 1.0, 1.0);
    CHECK(std::abs(xi_strong - 1.0) < 0.2);

    for (double A : {1e-3, 0.5, 4.0, 12.0}) {
        const double xi = solve_xi(A, 1.0, 1.0);
        const double res = bessel_j(1, A * xi) * 1.0 - 0.5 * A * (1.0 - xi);
        CHECK(std::abs(res) <= 1e-12);
    }
    CHECK_THROWS_AS((void)solve_xi(-1.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("quasi-energies: detuning limit, resonance, exact antisymmetry") {
    // A -> 0: eps -> +-|omega0 - omega|/2
    FloquetSolution weak = solve_floquet(1e-4, 1.3, 1.0);
    CHECK(weak.eps_plus == doctest::Approx(0.15).epsilon(1e-3));
    CHECK(weak.eps_minus == -weak.eps_plus);  // bitwise by construction

    // engineered resonance J0(eta) omega0 = omega: theta = pi/4, eps = B/4
    const double A = 2.0, omega = 1.0;
    double lo = 1.0, hi = 3.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        FloquetSolution s = solve_floquet(A, omega, mid);
        const double det = s.besselJ[0] * mid - omega;
        (det < 0.0 ? lo : hi) = mid;
    }
    FloquetSolution res = solve_floquet(A, omega, 0.5 * (lo + hi));
    CHECK(res.theta == doctest::Approx(M_PI / 4.0).epsilon(1e-6));
    CHECK(res.eps_plus == doctest::Approx(res.B / 4.0).epsilon(1e-6));
}

TEST_CASE("dressed matrix elements against direct 2x2 construction") {
    for (double theta : {0.1, 0.7, 1.2, M_PI / 2.0}) {
        const DressedMatrixElements m = dressed_matrix_elements(theta);
        // |~e> = sin t |g> + cos t |e>, |~g> = sin t |e> - cos t |g>, order (g,e)
        Eigen::Vector2cd e{std::sin(theta), std::cos(theta)};
        Eigen::Vector2cd g{-std::cos(theta), std::sin(theta)};
        const Eigen::Matrix2cd sx = atom_matrix(AtomOp::X, AtomLabeling::Energy);
        const Eigen::Matrix2cd sy = atom_matrix(AtomOp::Y, AtomLabeling::Energy);
        const Eigen::Matrix2cd sz = atom_matrix(AtomOp::Z, AtomLabeling::Energy);
        CHECK(std::abs(Complex(e.dot(sx * e)) - m.ee_x) < 1e-15);
        CHECK(std::abs(Complex(g.dot(sx * g)) - m.gg_x) < 1e-15);
        CHECK(std::abs(Complex(e.dot(sx * g)) - m.eg_x) < 1e-15);
        CHECK(std::abs(Complex(e.dot(sz * e)) - m.ee_z) < 1e-15);
        CHECK(std::abs(Complex(g.dot(sz * g)) - m.gg_z) < 1e-15);
        CHECK(std::abs(Complex(e.dot(sz * g)) - m.eg_z) < 1e-15);
        CHECK(std::abs(Complex(e.dot(sy * e))) < 1e-15);
        CHECK(std::abs(Complex(g.dot(sy * g))) < 1e-15);
        CHECK(std::abs(Complex(g.dot(sy * e)) - Complex(0.0, -1.0)) < 1e-15);
        CHECK(std::abs(Complex(e.dot(sy * g)) - Complex(0.0, 1.0)) < 1e-15);
    }
}

TEST_CASE("propagate_C: decoupled at omega0 = 0, norm conservation, Bessel tail") {
    // omega0 = 0 removes the whole drive W(t)
    FloquetSolution s0 = solve_floquet(4.0, 1.0, 1e-12);
    propagate_C(s0, 4.0, 512, 64);
    for (int i = 0; i < s0.c.n_samples(); ++i) {
        CHECK(std::abs(s0.c.c_plus[i] - Complex{1.0, 0.0}) < 1e-9);
        CHECK(std::abs(s0.c.c_minus[i] - Complex{1.0, 0.0}) < 1e-9);
    }

    FloquetSolution sol = solve_floquet(12.0, 1.0, 1.0);
    propagate_C(sol, 64.0, 2048, 32);
    const double n0 = std::sqrt(std::norm(sol.c.c_plus[0]) + std::norm(sol.c.c_minus[0]));
    for (int i = 0; i < sol.c.n_samples(); ++i) {
        const double n = std::sqrt(std::norm(sol.c.c_plus[i]) + std::norm(sol.c.c_minus[i]));
        CHECK(std::abs(n - n0) < 1e-9 * n0);
    }

    // truncation refinement: +5 Bessel terms shifts the endpoint < 1e-10
    FloquetSolution wide = solve_floquet(12.0, 1.0, 1.0);
    wide.n_bessel += 5;
    wide.besselJ = bessel_j_array(wide.n_bessel + 2, wide.eta);
    propagate_C(wide, 64.0, 2048, 32);
    CHECK(std::abs(wide.c.c_plus.back() - sol.c.c_plus.back()) < 1e-10);
    CHECK(std::abs(wide.c.c_minus.back() - sol.c.c_minus.back()) < 1e-10);
}

TEST_CASE("dipole expectation: single-branch zero and wavefunction oracle") {
    FloquetSolution sol = solve_floquet(8.0, 1.0, 1.0);
    // single branch at theta = pi/2 gives an identically vanishing dipole
    FloquetSolution single = sol;
    single.theta = M_PI / 2.0;
    single.c.times = {0.0, 0.4, 1.1};
    single.c.c_plus = {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    single.c.c_minus = {{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}};
    for (double v : dipole_expectation(single)) CHECK(std::abs(v) < 1e-14);

    // equal superposition: compare against the explicit wavefunction
    propagate_C(sol, 6.0, 1024, 16);
    const auto dip = dipole_expectation(sol);
    const Eigen::Matrix2cd sx = atom_matrix(AtomOp::X, AtomLabeling::Energy);
    const Eigen::Matrix2cd sz = atom_matrix(AtomOp::Z, AtomLabeling::Energy);
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Vector2cd etil{std::sin(sol.theta), std::cos(sol.theta)};
    Eigen::Vector2cd gtil{-std::cos(sol.theta), std::sin(sol.theta)};
    for (int i = 0; i < sol.c.n_samples(); i += 7) {
        const double t = sol.c.times[i];
        const double lam = 0.5 * sol.eta * std::sin(sol.omega * t);
        // Psi = exp(-i lam sx) exp(-i (w/2) t sz) Phi undoes the dressing
        const Eigen::Matrix2cd ux = std::cos(lam) * id - Complex(0.0, 1.0) * std::sin(lam) * sx;
        const Eigen::Matrix2cd uz =
            std::cos(0.5 * sol.omega * t) * id - Complex(0.0, 1.0) * std::sin(0.5 * sol.omega * t) * sz;
        Eigen::Vector2cd psi =
            sol.c.c_plus[i] * std::polar(1.0, -sol.eps_plus * t) * (ux * uz * etil) +
            sol.c.c_minus[i] * std::polar(1.0, -sol.eps_minus * t) * (ux * uz * gtil);
        const double want = std::real(Complex(psi.dot(sx * psi)));
        CHECK(dip[i] == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("reconstructed sigma_x matches a direct two-level integrator") {
    const double A = 9.0, omega = 1.0, omega0 = 1.0;
    FloquetSolution sol = solve_floquet(A, omega, omega0);
    propagate_C(sol, 12.0, 4096, 64, std::sin(sol.theta), -std::cos(sol.theta));
    const auto dip = dipole_expectation(sol);

    DriveConfig d;
    d.shape = DriveShape::Monochromatic;
    d.A = A;
    d.omega_f = omega;
    ModeSet none;
    QuantumState init = QuantumState::ground_vacuum({});
    IntegratorOptions opts;
    opts.dt = (2.0 * M_PI / omega) / 4096.0;  // same grid as the C series
    opts.sample_stride = 64;
    Trajectory traj = propagate_fock_direct(init, d, none, omega0, 0.0, 12.0 * 2.0 * M_PI / omega,
                                            opts);
    REQUIRE(traj.times.size() == size_t(sol.c.n_samples()));
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const double want = std::real(expectation(traj.states[i], ops::sigma_x()));
        CHECK(std::abs(dip[i] - want) < 1e-6);
    }
}

TEST_CASE("quasi-energy gap stays near the drive over the strong-field grid") {
    for (double A : {8.0, 12.0, 16.0})
        for (double omega : {0.8, 1.0, 1.2}) {
            FloquetSolution s = solve_floquet(A, omega, 1.0);
            const double delta = s.delta_eps() / omega - 1.0;
            CHECK(std::abs(delta) < 1.0);
            CHECK(std::abs(s.xi - 1.0) < 0.2);
        }
}

TEST_CASE("cpm spectrum: constant series and conjugation identity") {
    FloquetSolution sol = solve_floquet(4.0, 1.0, 1.0);
    sol.c.times.clear();
    sol.c.c_plus.clear();
    sol.c.c_minus.clear();
    for (int k = 0; k < 256; ++k) {
        sol.c.times.push_back(0.1 * k);
        sol.c.c_plus.push_back({0.8, 0.1});
        sol.c.c_minus.push_back({0.5, -0.4});
    }
    const Complex peak = spectrum_value_pm(sol, 0.0);
    CHECK(std::abs(peak) > 20.0 * std::abs(spectrum_value_pm(sol, 1.0)));

    for (double x : {0.3, 1.7, -2.2}) {
        const Complex a = spectrum_value_pm(sol, x);
        const Complex b = std::conj(spectrum_value_mp(sol, -x));
        CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("plateau line structure of the C product spectra") {
    FloquetSolution sol = solve_floquet(12.0, 1.0, 1.0);
    propagate_C(sol, 96.0, 2048, 8);
    const double xi = sol.xi_offset();
    // plateau harmonics: compare even lines and conjugate-mirrored odd lines
    for (int even : {4, 6, 8}) {
        const Complex mp = spectrum_value_mp(sol, double(even));
        const Complex pm = spectrum_value_pm(sol, double(even));
        CHECK(std::abs(mp + pm) <= 0.3 * std::max(std::abs(mp), std::abs(pm)));
    }
    for (int odd : {5, 7, 9}) {
        const Complex a = spectrum_value_mp(sol, double(odd) - xi);
        const Complex b = std::conj(spectrum_value_pm(sol, double(odd) + xi));
        CHECK(std::abs(a - b) <= 0.3 * std::max(std::abs(a), std::abs(b)));
    }
}
