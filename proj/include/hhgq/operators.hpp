#pragma once

#include <vector>

#include "hhgq/state.hpp"

namespace hhgq {

enum class AtomOp { I, X, Y, Z };
enum class ModeFactor { A, Adag, N };

// One product  coeff * sigma (x) prod_m (factor chain on mode m).
// Factor chains are written left-to-right as in operator notation,
// i.e. {A, N} means a*N (N hits the ket first).
struct OperatorTerm {
    Complex coeff{1.0, 0.0};
    AtomOp atom = AtomOp::I;
    std::vector<std::vector<ModeFactor>> mode_factors;  // indexed by mode

    void ensure_modes(int n_modes) {
        if (int(mode_factors.size()) < n_modes) mode_factors.resize(n_modes);
    }
};

// A sum of OperatorTerm products. Every operator appearing in the model
// (first/second order atom-field combinations, photon-number moments,
// quadratures) is representable as one OperatorSpec.
struct OperatorSpec {
    std::vector<OperatorTerm> terms;

    OperatorSpec() = default;
    explicit OperatorSpec(OperatorTerm t) : terms{std::move(t)} {}

    OperatorSpec operator+(const OperatorSpec& rhs) const;
    OperatorSpec operator-(const OperatorSpec& rhs) const;
    OperatorSpec operator*(const OperatorSpec& rhs) const;
    OperatorSpec operator*(Complex scale) const;
    OperatorSpec adjoint() const;

    int max_mode_index() const;
};

inline OperatorSpec operator*(Complex scale, const OperatorSpec& op) { return op * scale; }

// 2x2 matrix of a Pauli in the given atomic labeling (index order g,e or -,+).
Eigen::Matrix2cd atom_matrix(AtomOp op, AtomLabeling labeling);

// op|state>. The state must live on plain (undisplaced) modes; expectation()
// below converts displaced states automatically.
Vector apply_operator(const QuantumState& state, const OperatorSpec& op);

// <state|op|state>. Rejects operators addressing nonexistent modes.
Complex expectation(const QuantumState& state, const OperatorSpec& op);

// Named operators, following U = sigma_x, V = -sigma_y, W = sigma_z.
namespace ops {

enum class Axis { U, V, W };

OperatorSpec identity();
OperatorSpec sigma_x();
OperatorSpec sigma_y();
OperatorSpec sigma_z();
OperatorSpec atom_axis(Axis ax);  // U, V or W

OperatorSpec a(int mode);
OperatorSpec adag(int mode);
OperatorSpec n(int mode);
OperatorSpec n_sq(int mode);
OperatorSpec x1(int mode);  // a^dag + a
OperatorSpec p1(int mode);  // i(a^dag - a)
OperatorSpec x2(int mode);  // a^dag^2 + a^2
OperatorSpec p2(int mode);  // i(a^dag^2 - a^2)
OperatorSpec quad_x(int mode);  // (a^dag + a)/2
OperatorSpec quad_y(int mode);  // i(a^dag - a)/2

// First-order atom-field operators, e.g. U_n^- = i sigma_x (a - a^dag).
OperatorSpec axis_pm(Axis ax, int mode, int sign);
// Second-order, e.g. U_n^{++} = sigma_x (a^2 + a^dag^2).
OperatorSpec axis_pp_mm(Axis ax, int mode, int sign);
// sigma * N_n.
OperatorSpec axis_n(Axis ax, int mode);
// e.g. U_n^{N+-} = (i)^... sigma_x (a N +- N a^dag).
OperatorSpec axis_npm(Axis ax, int mode, int sign);

}  // namespace ops

}  // namespace hhgq
