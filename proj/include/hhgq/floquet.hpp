#pragma once

#include <complex>
#include <vector>

#include "hhgq/fock.hpp"

namespace hhgq {

// Analytic treatment of the monochromatically driven two-level atom:
// H = (omega0/2) sigma_z + (A/2) cos(omega t) sigma_x  (hbar = 1).
// The transformation exp(i (A xi / 2 omega) sin(omega t) sigma_x) with xi
// fixed by J_1(A xi / omega) omega0 = A(1 - xi)/2 splits the drive into a
// solvable dressed block plus a Bessel-series perturbation W(t).

// Root of the xi equation on the branch continuous in A from the weak-field
// limit xi -> omega / (omega + omega0). Residual <= 1e-12.
double solve_xi(double A, double omega, double omega0);

struct DressedMatrixElements {
    double ee_x, gg_x, eg_x;  // <~e|sigma_x|~e>, <~g|sigma_x|~g>, <~e|sigma_x|~g>
    double ee_z, gg_z, eg_z;
    // sigma_y: diagonals vanish, <~g|sigma_y|~e> = -i, <~e|sigma_y|~g> = +i
};

DressedMatrixElements dressed_matrix_elements(double theta);

struct CSeries {
    std::vector<double> times;
    std::vector<Complex> c_plus, c_minus;
    int n_samples() const { return int(times.size()); }
};

struct FloquetSolution {
    double A = 0.0, omega = 1.0, omega0 = 1.0;
    double xi = 0.0;
    double eta = 0.0;       // A xi / omega
    double B = 0.0;         // B/4 = J_1(eta) omega0
    double theta = 0.0;
    double eps_plus = 0.0;  // quasi-energies, eps_minus = -eps_plus
    double eps_minus = 0.0;
    int n_bessel = 0;
    std::vector<double> besselJ;  // J_0 .. J_{n_bessel}
    CSeries c;

    double delta_eps() const { return eps_plus - eps_minus; }
    double xi_offset() const { return delta_eps() - omega; }  // delta_eps ~ omega + xi_offset
};

// xi, eta, B, theta, quasi-energies; no C integration yet.
FloquetSolution solve_floquet(double A, double omega, double omega0);

// Integrates the coupled C+- equations with the Bessel-series drive over
// `cycles` periods of the drive. init_* defaults: the atom starting in |g>
// gives (sin theta, -cos theta); the cross-correlation analysis uses (1, 1).
void propagate_C(FloquetSolution& sol, double cycles, int steps_per_cycle = 2048,
                 int sample_stride = 8, Complex init_plus = {1.0, 0.0},
                 Complex init_minus = {1.0, 0.0});

// <sigma_x>(t) reconstructed from the dressed-state solution on the C grid.
std::vector<double> dipole_expectation(const FloquetSolution& sol);

// Windowed (Hann) Fourier transform of C+*C- and C-*C+ on a frequency grid,
// plus direct evaluation at arbitrary frequency.
struct CpmSpectrum {
    std::vector<double> freq;
    std::vector<Complex> pm;  // F[C+* C-]
    std::vector<Complex> mp;  // F[C-* C+]
};

CpmSpectrum cpm_spectrum(const FloquetSolution& sol, double freq_max, int n_freq);

// F[f](x) = sum w_k f(t_k) e^{i x t_k} dt / sum w_k dt with a Hann window.
Complex spectrum_value_pm(const FloquetSolution& sol, double x);
Complex spectrum_value_mp(const FloquetSolution& sol, double x);

}  // namespace hhgq
