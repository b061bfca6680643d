#pragma once

#include <optional>
#include <vector>

#include "hhgq/fock.hpp"

namespace hhgq {

enum class DriveShape { Sin2Pulse, Monochromatic };

// Classical drive. Sin2Pulse: Omega(t) = A sin^2(omega_e t) sin(omega_f t + phi)
// on [0, pi/omega_e], zero outside. Monochromatic: Omega(t) = A cos(omega_f t).
// All frequencies in units of omega0, which is 1 unless overridden.
struct DriveConfig {
    DriveShape shape = DriveShape::Sin2Pulse;
    double A = 12.0;
    double omega_e = 0.05;
    double omega_f = 1.0;
    double phi = 1.5707963267948966;  // pi/2 preset; pi is the other figure preset

    double pulse_end() const;  // pi/omega_e for the pulse, +inf for monochromatic
};

// Peak Rabi amplitude of the pulse envelope, Omega(t) itself.
double classical_rabi(double t, const DriveConfig& cfg);

// phi_d(t) = (1/2) int_0^t Omega(s) ds, in closed form. Constant after the
// pulse support ends.
double rabi_phase_integral(double t, const DriveConfig& cfg);

// Omega(omega) = c sqrt(omega), or an explicit per-mode table.
struct CouplingRule {
    double c = 0.005;
    std::vector<std::pair<double, double>> table;  // (omega, Omega) pairs
};

double coupling_for(double omega, const CouplingRule& rule);

}  // namespace hhgq
