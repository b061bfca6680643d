#pragma once

#include "hhgq/operators.hpp"
#include "hhgq/propagator_a.hpp"

namespace hhgq {

// One exact Heisenberg equation d<lhs>/dt = <rhs_static> + Omega(t) <rhs_drive>
// of the multi-mode Rabi model with classical excitation.
struct ResidualEquation {
    std::string name;
    OperatorSpec lhs;
    OperatorSpec rhs_static;
    OperatorSpec rhs_drive;
};

// The full operator-equation system (photon number, first and second order
// atom-field operators, N-weighted combinations). Equations close exactly;
// each is unit-checked against i<[H, O]> on random states.
std::vector<ResidualEquation> build_operator_equations(const ModeSet& modes, double omega0);

// Hamiltonian as an OperatorSpec pair: H(t) = h_static + Omega(t) h_drive.
std::pair<OperatorSpec, OperatorSpec> hamiltonian_spec(const ModeSet& modes, double omega0);

struct ResidualEntry {
    std::string name;
    double max_residual = 0.0;
    double scale = 0.0;  // max |d<lhs>/dt| seen, for relative context
};

struct ResidualReport {
    double dt = 0.0;  // central-difference step
    std::vector<ResidualEntry> entries;
    double max_residual() const;
};

// Residuals evaluated on the stored samples of a trajectory (the stored
// spacing is the differencing step; it must be uniform).
ResidualReport appb_residuals(const Trajectory& traj);

// Streaming variant: propagates on the displaced basis with step dt and
// evaluates the residuals at n_eval interior times without storing the
// trajectory.
ResidualReport appb_residuals_run(const QuantumState& init, const DriveConfig& drive,
                                  const ModeSet& modes, double omega0, double t0, double t1,
                                  double dt, int n_eval);

struct ConvergenceReport {
    ResidualReport at_dt;
    ResidualReport at_half_dt;
    std::vector<double> ratios;  // per equation, expected ~4 for O(dt^2) differencing
};

ConvergenceReport appb_convergence(const QuantumState& init, const DriveConfig& drive,
                                   const ModeSet& modes, double omega0, double t0, double t1,
                                   double dt, int n_eval);

}  // namespace hhgq
