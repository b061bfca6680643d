#include <doctest.h>

#include <cmath>

#include "hhgq/cutoff.hpp"
#include "hhgq/errors.hpp"

using namespace hhgq;

namespace {

FloquetSolution strong_sol() {
    FloquetSolution sol = solve_floquet(12.0, 1.0, 1.0);
    propagate_C(sol, 64.0, 2048, 4);
    return sol;
}

}  // namespace

TEST_CASE("cutoff: decoupled modes freeze the coefficients") {
    FloquetSolution sol = solve_floquet(6.0, 1.0, 1.0);
    CutoffModes m;
    m.omega1 = 6.0;
    m.omega2 = 7.0;
    CutoffTrajectory traj = propagate_cutoff(sol, m, 4.0, 512, 64);
    for (const auto& d : traj.d) {
        CHECK(std::abs(d(0) - Complex{1.0, 0.0}) < 1e-12);
        CHECK(std::abs(d(1) - Complex{1.0, 0.0}) < 1e-12);
        for (int k = 2; k < 8; ++k) CHECK(std::abs(d(k)) < 1e-12);
    }
}

TEST_CASE("cutoff: norm 2 conserved and mode swap symmetry") {
    FloquetSolution sol = strong_sol();
    CutoffModes m;
    m.omega1 = 6.0;
    m.omega2 = 7.0;
    m.coupling1 = 0.012;
    m.coupling2 = 0.014;
    CutoffTrajectory a = propagate_cutoff(sol, m, 24.0, 2048, 64);
    for (const auto& d : a.d) CHECK(std::abs(d.squaredNorm() - 2.0) < 1e-8);

    CutoffModes swapped;
    swapped.omega1 = m.omega2;
    swapped.omega2 = m.omega1;
    swapped.coupling1 = m.coupling2;
    swapped.coupling2 = m.coupling1;
    CutoffTrajectory b = propagate_cutoff(sol, swapped, 24.0, 2048, 64);
    REQUIRE(a.times.size() == b.times.size());
    for (size_t i = 0; i < a.times.size(); ++i) {
        CHECK(std::abs(a.d[i](2) - b.d[i](4)) < 1e-12);  // e01 <-> e10
        CHECK(std::abs(a.d[i](3) - b.d[i](5)) < 1e-12);  // g01 <-> g10
        CHECK(std::abs(a.d[i](6) - b.d[i](6)) < 1e-12);  // e11 invariant
    }
}

TEST_CASE("perturbative first order: zero coupling, resonant growth, bounded off resonance") {
    FloquetSolution sol = strong_sol();
    const auto zero = perturbative_first_order(sol, 7.0, 0.0, 10.0);
    CHECK(std::abs(zero.first) == 0.0);
    CHECK(std::abs(zero.second) == 0.0);

    const double period = 2.0 * M_PI;
    const double t1 = 16.0 * period, t2 = 32.0 * period;

    // on an odd line (resonant for d^e): secular, roughly linear growth
    const double w_odd = 7.0 - sol.xi_offset();
    const double r1 = std::abs(perturbative_first_order(sol, w_odd, 1e-3, t1).first);
    const double r2 = std::abs(perturbative_first_order(sol, w_odd, 1e-3, t2).first);
    CHECK(r2 / r1 > 1.6);
    CHECK(r2 / r1 < 2.4);

    // far from every line: bounded, no secular growth
    const double w_off = 7.47;
    const double b1 = std::abs(perturbative_first_order(sol, w_off, 1e-3, t1).first);
    const double b2 = std::abs(perturbative_first_order(sol, w_off, 1e-3, t2).first);
    CHECK(b2 < 2.0 * std::max(b1, 1e-6));
    CHECK(b2 < 0.5 * r2);
}

TEST_CASE("weak-coupling cutoff dynamics matches first-order perturbation") {
    FloquetSolution sol = strong_sol();
    CutoffModes m;
    m.omega1 = 6.0;
    m.omega2 = 7.0;
    m.coupling1 = 1e-3;
    m.coupling2 = 1e-3;
    CutoffTrajectory traj = propagate_cutoff(sol, m, 16.0, 2048, 32);
    // t <= 0.1 / Omega = 100: compare the growing amplitudes at mid run
    const int i = int(traj.times.size()) - 1;
    const double t = traj.times[i];
    REQUIRE(t <= 0.1 / m.coupling1);
    const auto [de01, dg01] = perturbative_first_order(sol, m.omega2, m.coupling2, t);
    const auto [de10, dg10] = perturbative_first_order(sol, m.omega1, m.coupling1, t);
    CHECK(std::abs(traj.d[i](2) - de01) <= 0.05 * std::abs(de01));
    CHECK(std::abs(traj.d[i](3) - dg01) <= 0.05 * std::abs(dg01));
    CHECK(std::abs(traj.d[i](4) - de10) <= 0.05 * std::abs(de10));
    CHECK(std::abs(traj.d[i](5) - dg10) <= 0.05 * std::abs(dg10));
}

TEST_CASE("even-odd line formula extremes and range") {
    CHECK(even_odd_cross_from_line({0.7, 0.0}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(even_odd_cross_from_line({0.0, -1.3}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(even_odd_cross_from_line({0.3, 0.4}) >= 0.0);
    CHECK(even_odd_cross_from_line({0.3, 0.4}) <= 1.0);
    CHECK_THROWS_AS((void)even_odd_cross_from_line({0.0, 0.0}), UndefinedStatisticError);
}

TEST_CASE("perturbative cross-correlation: parity rules") {
    FloquetSolution sol = strong_sol();
    CHECK(perturbative_cross_correlation(sol, 5.0, 7.0) == 1.0);
    const double eo = perturbative_cross_correlation(sol, 6.0, 7.0);
    CHECK(eo >= 0.0);
    CHECK(eo <= 1.0);
    // symmetric in the argument order
    CHECK(perturbative_cross_correlation(sol, 7.0, 6.0) == doctest::Approx(eo));
    CHECK_THROWS_AS((void)perturbative_cross_correlation(sol, 6.0, 8.0), ConfigError);
    CHECK_THROWS_AS((void)classify_parity(sol, 6.6), ConfigError);
}

TEST_CASE("cutoff cross-correlation from the coefficients") {
    CutoffTrajectory traj;
    traj.times = {0.0};
    traj.c_plus = {{1.0, 0.0}};
    traj.c_minus = {{0.0, 0.0}};
    Eigen::Vector<Complex, 8> d;

    // no joint occupation -> 0
    d.setZero();
    d(0) = 1.0;
    d(2) = 0.1;
    d(4) = 0.2;
    traj.d = {d};
    CHECK(cutoff_cross_correlation(traj, 0) == doctest::Approx(0.0).epsilon(1e-14));

    // factorized single-branch coefficients -> 1
    const Complex a{0.21, 0.08}, b{-0.13, 0.27};
    d.setZero();
    d(0) = 1.0;
    d(2) = a;
    d(4) = b;
    d(6) = a * b;
    traj.d = {d};
    CHECK(cutoff_cross_correlation(traj, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("even-odd pair: full cutoff near the perturbative predictor") {
    FloquetSolution sol = strong_sol();
    CutoffModes m;
    m.omega1 = 6.0;  // even
    m.omega2 = 7.0;  // odd
    m.coupling1 = 1e-3;
    m.coupling2 = 1e-3;
    CutoffTrajectory traj = propagate_cutoff(sol, m, 48.0, 2048, 64);
    const double predicted = perturbative_cross_correlation(sol, m.omega1, m.omega2);
    const int last = int(traj.times.size()) - 1;
    const double full = cutoff_cross_correlation(traj, last);
    CHECK(full < 1.0);
    CHECK(std::abs(full - predicted) <= 0.25);
}
