#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hhgq/drive.hpp"
#include "hhgq/state.hpp"

namespace hhgq {

// Quantized mode set. gamma_j = -Omega_j / (2 omega_j) diagonalizes the
// mode + linear-coupling block branch-wise in sigma_x.
struct ModeSet {
    std::vector<double> omega;
    std::vector<double> coupling;  // Omega_n
    std::vector<int> n_max;

    static ModeSet from_rule(const std::vector<double>& omegas, const CouplingRule& rule,
                             int n_max_default = 8);

    int size() const { return int(omega.size()); }
    double gamma(int j) const { return -coupling[j] / (2.0 * omega[j]); }
    std::vector<FockBasis> displaced_bases() const;
    std::vector<FockBasis> plain_bases(int pad = 0) const;
    void validate() const;
};

struct IntegratorOptions {
    double dt = 0.0;             // explicit step; 0 = derive from steps_per_cycle
    int steps_per_cycle = 200;   // per 2*pi/rate_max when dt == 0
    int sample_stride = 20;      // trajectory sampling in steps
    double norm_abort = 1e-6;    // abort when |norm - 1| exceeds this
    double occupation_warn = 1e-6;  // top Fock level occupation warning
};

// Fastest coupled rate of the model: omega0 + peak Rabi + fastest mode or
// carrier. Step rules (dt, residual grids) are expressed against this.
double rate_max(const DriveConfig& drive, const ModeSet& modes, double omega0);

// Number of fixed steps covering [t0, t1] at magnitude dt (shared by the
// propagators and the residual grids).
long integration_steps(double t0, double t1, double dt_magnitude);

struct Trajectory {
    std::vector<double> times;
    std::vector<QuantumState> states;
    DriveConfig drive;
    ModeSet modes;
    double omega0 = 1.0;
    IntegratorOptions options;
    std::vector<std::string> warnings;

    int n_samples() const { return int(times.size()); }
};

// Callback receives (step index, time, physical state on the integration
// basis). Returning is cheap; the state reference is only valid during the
// call.
using SampleSink = std::function<void(long step, double t, const QuantumState&)>;

// Model A propagation on the branch-displaced Fock basis (interaction
// picture of the diagonalized mode + drive block; the sigma_z term drives
// the branch coupling). init may be on any basis convertible to it.
// t1 < t0 integrates backwards.
Trajectory propagate_displaced(const QuantumState& init, const DriveConfig& drive,
                               const ModeSet& modes, double omega0, double t0, double t1,
                               const IntegratorOptions& opts = {});

void propagate_displaced_cb(const QuantumState& init, const DriveConfig& drive,
                            const ModeSet& modes, double omega0, double t0, double t1,
                            const IntegratorOptions& opts, long sink_stride,
                            const SampleSink& sink, std::vector<std::string>* warnings = nullptr);

// Brute-force reference propagation of the full Hamiltonian on the plain
// Fock basis (energy labeling); oracle for propagate_displaced.
Trajectory propagate_fock_direct(const QuantumState& init, const DriveConfig& drive,
                                 const ModeSet& modes, double omega0, double t0, double t1,
                                 const IntegratorOptions& opts = {});

// Full joint two-mode propagation (no independent-mode approximation).
Trajectory propagate_two_mode_joint(const QuantumState& init, const DriveConfig& drive,
                                    const ModeSet& modes, double omega0, double t0, double t1,
                                    const IntegratorOptions& opts = {});

}  // namespace hhgq
