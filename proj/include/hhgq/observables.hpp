#pragma once

#include <optional>

#include "hhgq/propagator_a.hpp"

namespace hhgq {

// Below this mean photon number, ratio statistics are reported by
// convention (Q -> 0) or marked undefined instead of dividing.
inline constexpr double kEpsilonN = 1e-12;

// Principal quadrature variances and axes of the (X, Y) covariance matrix.
// Vacuum gives lambda_plus = lambda_minus = 1/4 with the X = (a^dag + a)/2
// convention; lambda_minus < 1/4 flags squeezing.
struct NoiseEllipse {
    double lambda_plus = 0.25;
    double lambda_minus = 0.25;
    Eigen::Vector2d u_plus{1.0, 0.0};
    Eigen::Vector2d u_minus{0.0, 1.0};
    double phase = 0.0;
    bool squeezed() const { return lambda_minus < 0.25 - 1e-12; }
};

double mandel_q(const QuantumState& state, int mode);
double g2_equal_time(const QuantumState& state, int mode);

// tau-coefficient of g^2(t,tau) - g^2(t,0) in the small-tau expansion:
// (Omega/2) [<U^{N-}><N> - <N^2><U^->] / <N>^3. Positive sign means
// antibunching.
double antibunching_slope(const QuantumState& state, int mode, double coupling);

NoiseEllipse noise_ellipse(const QuantumState& state, int mode);

// g^2_ij = <N_i N_j> / (<N_i><N_j>), symmetric in (i, j).
double cross_correlation(const QuantumState& state, int mode_i, int mode_j);

// g^3 = <N_1 N_2 N_3> / (<N_1><N_2><N_3>).
double three_mode_g3(const QuantumState& state, int i, int j, int k);

// Per-time-sample record for one mode. Undefined ratio statistics are
// stored as nullopt and serialized as empty CSV cells.
struct ModeRecord {
    double n_mean = 0.0;
    double q = 0.0;
    std::optional<double> g2;
    std::optional<double> slope;
    NoiseEllipse ellipse;
};

struct ObservableSeries {
    std::vector<double> times;
    std::vector<std::vector<ModeRecord>> per_mode;  // [mode][sample]
    long undefined_count = 0;
};

// Evaluates all single-mode statistics over a stored trajectory; one basis
// conversion per sample.
ObservableSeries evaluate_series(const Trajectory& traj);

// All statistics of one state, sharing a single conversion to plain Fock.
std::vector<ModeRecord> evaluate_state(const QuantumState& state,
                                       const std::vector<double>& couplings);

// Independent single-mode sweeps over a frequency grid. Each column equals
// a standalone single-mode run at that frequency (the modes are propagated
// one at a time, never jointly). Distributed over `workers` threads
// (0 = HHGQ_WORKERS or hardware concurrency); assembly preserves grid order.
struct SpectrogramTable {
    std::vector<double> omegas;
    std::vector<ObservableSeries> per_omega;
};

SpectrogramTable scan_modes(const std::vector<double>& omegas, const DriveConfig& drive,
                            const CouplingRule& rule, double omega0, int n_max, double t0,
                            double t1, const IntegratorOptions& opts, int workers = 0);

}  // namespace hhgq
