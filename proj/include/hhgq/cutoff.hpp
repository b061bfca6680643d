#pragma once

#include "hhgq/floquet.hpp"

namespace hhgq {

// Two quantized modes truncated to {|0>, |1>} on the Floquet-dressed atom.
struct CutoffModes {
    double omega1 = 0.0, omega2 = 0.0;
    double coupling1 = 0.0, coupling2 = 0.0;
};

// Eight coefficients, ordered e00, g00, e01, g01, e10, g10, e11, g11.
// With the standard initial condition d^g00 = d^e00 = 1 the conserved
// sum |d|^2 is 2 (state normalization <Psi|Psi> = 2).
struct CutoffState {
    Eigen::Vector<Complex, 8> d;
    double t = 0.0;

    static CutoffState standard_init();
    double quadratic_norm() const { return d.squaredNorm(); }
};

struct CutoffTrajectory {
    std::vector<double> times;
    std::vector<Eigen::Vector<Complex, 8>> d;
    std::vector<Complex> c_plus, c_minus;  // co-integrated Floquet coefficients
    CutoffModes modes;
};

// Integrates the eight cutoff ODEs; the Floquet C+- pair is co-integrated
// on the same grid (no interpolation). When strong_field_neglect is set the
// diagonal dressed matrix elements (prop. to sin(theta) cos(theta)) are
// dropped, which is the approximation behind the perturbative formulas.
CutoffTrajectory propagate_cutoff(const FloquetSolution& sol, const CutoffModes& modes,
                                  double cycles, int steps_per_cycle = 2048,
                                  int sample_stride = 32,
                                  CutoffState init = CutoffState::standard_init(),
                                  Complex c_plus0 = {1.0, 0.0}, Complex c_minus0 = {1.0, 0.0},
                                  bool strong_field_neglect = false);

// First-order perturbative amplitudes (d^e_{0k}, d^g_{0k}) for a mode at
// omega_k with coupling Omega_k, by composite-Simpson quadrature of the
// oscillatory integrals of C+*C- and C-*C+.
std::pair<Complex, Complex> perturbative_first_order(const FloquetSolution& sol, double omega_k,
                                                     double coupling_k, double t);

enum class HarmonicParity { Even, Odd };

// Classification by proximity to the multiples of the drive frequency
// (within a quarter of the line spacing).
HarmonicParity classify_parity(const FloquetSolution& sol, double freq);

// 1/2 - (1/2) Re[z^2] / |z|^2 for a line amplitude z; always in [0, 1].
double even_odd_cross_from_line(Complex z);

// Plateau cross-correlation predictor: odd-odd pairs give 1 (the printed
// cancellation); even-odd pairs evaluate even_odd_cross_from_line at
// z = C-*C+(w_odd - xi) with xi the quasi-energy offset delta_eps - omega.
double perturbative_cross_correlation(const FloquetSolution& sol, double omega_1, double omega_2);

// g^2_12 assembled from the cutoff coefficients and C weights.
double cutoff_cross_correlation(const CutoffTrajectory& traj, int sample);

}  // namespace hhgq
