#pragma once

#include <string>
#include <vector>

#include "hhgq/fock.hpp"

namespace hhgq {

// Atomic basis tag. Index order is fixed as (ground-like, excited-like):
// Energy: index 0 = |g>, 1 = |e>;  SigmaX: index 0 = |->, 1 = |+>.
enum class AtomLabeling { Energy, SigmaX };

// Pure state of atom (x) modes on truncated (optionally displaced) Fock
// bases. Amplitude layout is row-major with the atom slowest:
//   index = s * prod(dim_j) + ((n_1 * dim_2 + n_2) * dim_3 + ...) .
// When branch_displacement is set (SigmaX labeling only), the basis vector
// for atom index s is |s> (x)_j D(sign_s * gamma_j)|n_j> with sign
// +1 for |+> (s = 1) and -1 for |-> (s = 0); otherwise all branches share
// D(gamma_j). Immutable by convention after construction.
struct QuantumState {
    AtomLabeling labeling = AtomLabeling::Energy;
    bool branch_displacement = false;
    std::vector<FockBasis> mode_bases;
    Vector amplitudes;

    int n_modes() const { return int(mode_bases.size()); }
    int mode_dim() const;                  // prod of per-mode dims
    int dim() const { return 2 * mode_dim(); }
    double norm() const { return amplitudes.norm(); }

    // |g> (x) |0...0> on the requested bases (SigmaX labeling expresses the
    // same physical state in the sigma_x eigenbasis).
    static QuantumState ground_vacuum(std::vector<FockBasis> bases,
                                      AtomLabeling labeling = AtomLabeling::Energy,
                                      bool branch_displacement = false);

    // |g> (x)_j |alpha_j> expanded on plain Fock bases.
    static QuantumState coherent(const std::vector<Complex>& alphas,
                                 const std::vector<int>& n_max);
};

struct BasisTarget {
    AtomLabeling labeling = AtomLabeling::Energy;
    bool branch_displacement = false;
    std::vector<FockBasis> mode_bases;
};

// Exact linear change of basis (mode displacements and/or atomic labeling).
// Throws PhysicsGuardError when the target truncation holds less than
// 1 - lost_weight_tol of the norm.
QuantumState convert_basis(const QuantumState& state, const BasisTarget& target,
                           double lost_weight_tol = 1e-10);

// Convenience: plain Fock bases (gamma = 0), Energy labeling, padded
// n_max chosen adaptively so the lost weight stays below tol.
QuantumState to_plain_energy(const QuantumState& state, double lost_weight_tol = 1e-10);

// Text snapshot, format documented in the README (round-trips exactly).
void save_state(const QuantumState& state, const std::string& path);
QuantumState load_state(const std::string& path);

}  // namespace hhgq
