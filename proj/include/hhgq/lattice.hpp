#pragma once

#include <array>

#include "hhgq/propagator_a.hpp"

namespace hhgq {

// Three-mode quantized pulse (resonant carrier plus two sidebands) expanded
// per mode on a square von Neumann lattice of coherent states co-moving
// with the branch-displaced free evolution.
struct LatticeSpec {
    std::array<double, 3> omega{1.0, 1.1, 0.9};   // omega_f, omega_f + 2 omega_e, omega_f - 2 omega_e
    std::array<double, 3> coupling{0.0, 0.0, 0.0};  // Omega_j
    std::array<Complex, 3> center{};                // initial coherent amplitudes
    int points_per_side = 5;
    double spacing_factor = 0.9;  // spacing = factor * sqrt(pi)
    double condition_cap = 1e8;

    double spacing() const;
    double gamma(int j) const { return -coupling[j] / (2.0 * omega[j]); }
    int points_per_mode() const { return points_per_side * points_per_side; }
    long n_lattice() const;
    // lattice point p of mode j (row-major over the re/im offsets)
    Complex point(int j, int p) const;

    static LatticeSpec pulse_modes(double A, double phi, double omega_f, double omega_e,
                                   const std::array<double, 3>& couplings, int points_per_side = 5,
                                   double spacing_factor = 0.9);
};

struct LatticeState {
    LatticeSpec spec;
    Vector c_plus, c_minus;  // coefficients over lattice triples, per sigma_x branch
    double t = 0.0;
    std::array<Matrix, 3> gram;      // per-mode coherent Gram matrices (constant in time)
    std::array<Matrix, 3> gram_inv;  // biorthogonal duals
    double condition_number = 0.0;

    double physical_norm() const;  // sqrt(<Psi|Psi>) via the Gram form
};

// |g> (x) |alpha_1>|alpha_2>|alpha_3> projected onto the lattice frame.
// Amplitudes outside the lattice coverage are rejected with the required
// extension; reconstruction overlap must reach 1 - 1e-6.
LatticeState init_pulse_state(double A, double phi, const LatticeSpec& spec);

struct LatticeTrajectory {
    LatticeSpec spec;
    double omega0 = 1.0;
    std::vector<double> times;
    std::vector<Vector> c_plus, c_minus;
};

LatticeTrajectory evolve_lattice(const LatticeState& init, double omega0, double t_end,
                                 int steps_per_cycle = 400, int sample_stride = 20);

// Per-sample observables evaluated treating lattice elements as exact
// coherent states.
struct BackactionSeries {
    std::vector<double> times;
    std::vector<double> sigma_x;
    std::array<std::vector<double>, 3> n_mean;
    std::array<std::vector<double>, 3> q;
    std::vector<double> g3;
    std::vector<double> e_mean;          // sum_j <X_j>
    std::vector<double> dg2_sum;         // sum_j slope_j * tau
    std::vector<double> norm;            // physical norm
    double antibunching_tau = 0.05;
};

BackactionSeries backaction_observables(const LatticeTrajectory& traj,
                                        double antibunching_tau = 0.05);

// <a_j>, <N_j>, <N_j^2>, <X_j>, pair/triple moments of one sample; shared
// by the series builder and the tests.
struct LatticeMoments {
    double norm2 = 0.0;
    double sigma_x = 0.0;
    std::array<Complex, 3> a{};
    std::array<double, 3> n{}, n2{}, x{};
    std::array<double, 3> u_minus{}, u_nminus{};  // per-mode <U^->, <U^{N-}>
    double n12 = 0.0, n13 = 0.0, n23 = 0.0, n123 = 0.0;
};

LatticeMoments lattice_moments(const LatticeSpec& spec, const std::array<Matrix, 3>& gram,
                               const Vector& c_plus, const Vector& c_minus, double t);

}  // namespace hhgq
