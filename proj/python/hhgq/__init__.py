"""Photon statistics of a driven two-level emitter with quantized field modes.

Thin wrapper around the compiled core; see the project README for the
physics conventions (hbar = 1, frequencies in units of the transition
frequency omega0).
"""

from ._core import (  # noqa: F401
    CouplingRule,
    DriveConfig,
    FloquetSolution,
    IntegratorOptions,
    ModeSet,
    NoiseEllipse,
    QuantumState,
    __version__,
    antibunching_slope,
    classical_rabi,
    coherent_state,
    coupling_for,
    cross_correlation,
    displacement_matrix_element,
    g2_equal_time,
    ground_vacuum,
    mandel_q,
    noise_ellipse,
    perturbative_cross_correlation,
    propagate_c,
    quasi_energies,
    run_backaction,
    run_classical_drive,
    run_fock_direct,
    solve_floquet,
    solve_xi,
    three_mode_g3,
)
