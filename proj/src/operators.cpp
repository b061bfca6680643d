#include "hhgq/operators.hpp"

#include <cmath>

#include "hhgq/errors.hpp"

namespace hhgq {

OperatorSpec OperatorSpec::operator+(const OperatorSpec& rhs) const {
    OperatorSpec out = *this;
    out.terms.insert(out.terms.end(), rhs.terms.begin(), rhs.terms.end());
    return out;
}

OperatorSpec OperatorSpec::operator-(const OperatorSpec& rhs) const {
    return *this + rhs * Complex(-1.0, 0.0);
}

namespace {

// Product of two Paulis as (coefficient, Pauli).
std::pair<Complex, AtomOp> pauli_mul(AtomOp a, AtomOp b) {
    using enum AtomOp;
    const Complex i{0.0, 1.0};
    if (a == I) return {1.0, b};
    if (b == I) return {1.0, a};
    if (a == b) return {1.0, I};
    if (a == X && b == Y) return {i, Z};
    if (a == Y && b == X) return {-i, Z};
    if (a == Y && b == Z) return {i, X};
    if (a == Z && b == Y) return {-i, X};
    if (a == Z && b == X) return {i, Y};
    return {-i, Y};  // X * Z
}

}  // namespace

OperatorSpec OperatorSpec::operator*(const OperatorSpec& rhs) const {
    OperatorSpec out;
    for (const auto& lt : terms)
        for (const auto& rt : rhs.terms) {
            OperatorTerm t;
            auto [c, atom] = pauli_mul(lt.atom, rt.atom);
            t.coeff = lt.coeff * rt.coeff * c;
            t.atom = atom;
            const size_t n = std::max(lt.mode_factors.size(), rt.mode_factors.size());
            t.mode_factors.resize(n);
            for (size_t m = 0; m < n; ++m) {
                if (m < lt.mode_factors.size())
                    t.mode_factors[m] = lt.mode_factors[m];
                if (m < rt.mode_factors.size())
                    t.mode_factors[m].insert(t.mode_factors[m].end(), rt.mode_factors[m].begin(),
                                             rt.mode_factors[m].end());
            }
            out.terms.push_back(std::move(t));
        }
    return out;
}

OperatorSpec OperatorSpec::operator*(Complex scale) const {
    OperatorSpec out = *this;
    for (auto& t : out.terms) t.coeff *= scale;
    return out;
}

OperatorSpec OperatorSpec::adjoint() const {
    OperatorSpec out = *this;
    for (auto& t : out.terms) {
        t.coeff = std::conj(t.coeff);  // Paulis are Hermitian
        for (auto& chain : t.mode_factors) {
            std::reverse(chain.begin(), chain.end());
            for (auto& f : chain) {
                if (f == ModeFactor::A)
                    f = ModeFactor::Adag;
                else if (f == ModeFactor::Adag)
                    f = ModeFactor::A;
            }
        }
    }
    return out;
}

int OperatorSpec::max_mode_index() const {
    int mx = -1;
    for (const auto& t : terms)
        for (size_t m = 0; m < t.mode_factors.size(); ++m)
            if (!t.mode_factors[m].empty()) mx = std::max(mx, int(m));
    return mx;
}

Eigen::Matrix2cd atom_matrix(AtomOp op, AtomLabeling labeling) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    const Complex i{0.0, 1.0};
    if (labeling == AtomLabeling::Energy) {
        // order (g, e)
        switch (op) {
            case AtomOp::I: m.setIdentity(); break;
            case AtomOp::X: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
            case AtomOp::Y: m(0, 1) = i; m(1, 0) = -i; break;
            case AtomOp::Z: m(0, 0) = -1.0; m(1, 1) = 1.0; break;
        }
    } else {
        // order (-, +): sigma_x diagonal, sigma_z swaps branches
        switch (op) {
            case AtomOp::I: m.setIdentity(); break;
            case AtomOp::X: m(0, 0) = -1.0; m(1, 1) = 1.0; break;
            case AtomOp::Y: m(0, 1) = -i; m(1, 0) = i; break;
            case AtomOp::Z: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        }
    }
    return m;
}

namespace {

// In-place application of a single elementary factor on mode m of both
// atom blocks. Plain Fock basis only.
void apply_factor(Vector& v, const std::vector<int>& dims, int mode, ModeFactor f) {
    int inner = 1;
    for (size_t j = mode + 1; j < dims.size(); ++j) inner *= dims[j];
    int outer = 2;  // atom factor
    for (int j = 0; j < mode; ++j) outer *= dims[j];
    const int d = dims[mode];
    Vector out = Vector::Zero(v.size());
    for (int o = 0; o < outer; ++o) {
        const int base = o * d * inner;
        switch (f) {
            case ModeFactor::A:
                // (a v)[n] = sqrt(n+1) v[n+1]
                for (int n = 0; n + 1 < d; ++n)
                    out.segment(base + n * inner, inner) =
                        std::sqrt(double(n + 1)) * v.segment(base + (n + 1) * inner, inner);
                break;
            case ModeFactor::Adag:
                for (int n = 1; n < d; ++n)
                    out.segment(base + n * inner, inner) =
                        std::sqrt(double(n)) * v.segment(base + (n - 1) * inner, inner);
                break;
            case ModeFactor::N:
                for (int n = 0; n < d; ++n)
                    out.segment(base + n * inner, inner) = double(n) * v.segment(base + n * inner, inner);
                break;
        }
    }
    v.swap(out);
}

}  // namespace

Vector apply_operator(const QuantumState& state, const OperatorSpec& op) {
    for (const auto& b : state.mode_bases)
        if (b.displaced())
            throw ConfigError("apply_operator: state must be on plain Fock bases");
    if (op.max_mode_index() >= state.n_modes())
        throw ConfigError("apply_operator: operator addresses mode beyond the state");

    std::vector<int> dims;
    for (const auto& b : state.mode_bases) dims.push_back(b.dim());
    const int D = state.mode_dim();

    Vector result = Vector::Zero(state.dim());
    for (const auto& term : op.terms) {
        Vector v = state.amplitudes;
        for (int m = 0; m < int(term.mode_factors.size()); ++m) {
            const auto& chain = term.mode_factors[m];
            for (auto it = chain.rbegin(); it != chain.rend(); ++it) apply_factor(v, dims, m, *it);
        }
        if (term.atom != AtomOp::I) {
            const Eigen::Matrix2cd A = atom_matrix(term.atom, state.labeling);
            Vector w = Vector::Zero(v.size());
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    if (A(r, c) != Complex{0.0, 0.0})
                        w.segment(r * D, D) += A(r, c) * v.segment(c * D, D);
            v.swap(w);
        }
        result += term.coeff * v;
    }
    return result;
}

namespace {

// Extra levels needed per mode so raising chains act exactly on a state
// with no support above n_max: the largest intermediate excursion above
// the top level over all factor chains.
std::vector<int> required_padding(const OperatorSpec& op, int n_modes) {
    std::vector<int> pad(n_modes, 0);
    for (const auto& term : op.terms)
        for (int m = 0; m < int(term.mode_factors.size()) && m < n_modes; ++m) {
            int level = 0, peak = 0;
            const auto& chain = term.mode_factors[m];
            for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
                if (*it == ModeFactor::Adag) ++level;
                if (*it == ModeFactor::A) --level;
                peak = std::max(peak, level);
            }
            pad[m] = std::max(pad[m], peak);
        }
    return pad;
}

QuantumState zero_pad(const QuantumState& state, const std::vector<int>& pad) {
    QuantumState out;
    out.labeling = state.labeling;
    out.branch_displacement = false;
    std::vector<int> src_dims, dst_dims;
    for (int m = 0; m < state.n_modes(); ++m) {
        const int d = state.mode_bases[m].dim();
        src_dims.push_back(d);
        dst_dims.push_back(d + pad[m]);
        out.mode_bases.push_back(FockBasis{state.mode_bases[m].n_max + pad[m], {0.0, 0.0}});
    }
    out.amplitudes = Vector::Zero(out.dim());
    const int Ds = state.mode_dim();
    for (int s = 0; s < 2; ++s)
        for (int i = 0; i < Ds; ++i) {
            int rem = i, dst = 0;
            for (int m = 0; m < state.n_modes(); ++m) {
                int stride = 1;
                for (int k = m + 1; k < state.n_modes(); ++k) stride *= src_dims[k];
                const int n = rem / stride;
                rem %= stride;
                dst = dst * dst_dims[m] + n;
            }
            out.amplitudes(s * out.mode_dim() + dst) = state.amplitudes(s * Ds + i);
        }
    return out;
}

}  // namespace

Complex expectation(const QuantumState& state, const OperatorSpec& op) {
    bool displaced = false;
    for (const auto& b : state.mode_bases) displaced |= b.displaced();
    QuantumState converted;
    const QuantumState* plain = &state;
    if (displaced) {
        converted = to_plain_energy(state);
        plain = &converted;
    }
    const std::vector<int> pad = required_padding(op, plain->n_modes());
    bool needs_pad = false;
    for (int p : pad) needs_pad |= (p > 0);
    if (!needs_pad) return plain->amplitudes.dot(apply_operator(*plain, op));
    const QuantumState padded = zero_pad(*plain, pad);
    return padded.amplitudes.dot(apply_operator(padded, op));
}

namespace ops {

OperatorSpec identity() { return OperatorSpec(OperatorTerm{}); }

namespace {
OperatorSpec atom_only(AtomOp a, Complex c = 1.0) {
    OperatorTerm t;
    t.coeff = c;
    t.atom = a;
    return OperatorSpec(t);
}
OperatorSpec mode_chain(int mode, std::vector<ModeFactor> chain, Complex c = 1.0,
                        AtomOp a = AtomOp::I) {
    OperatorTerm t;
    t.coeff = c;
    t.atom = a;
    t.mode_factors.resize(mode + 1);
    t.mode_factors[mode] = std::move(chain);
    return OperatorSpec(t);
}
AtomOp axis_pauli(Axis ax) {
    switch (ax) {
        case Axis::U: return AtomOp::X;
        case Axis::V: return AtomOp::Y;
        default: return AtomOp::Z;
    }
}
Complex axis_sign(Axis ax) { return ax == Axis::V ? Complex(-1.0, 0.0) : Complex(1.0, 0.0); }
}  // namespace

OperatorSpec sigma_x() { return atom_only(AtomOp::X); }
OperatorSpec sigma_y() { return atom_only(AtomOp::Y); }
OperatorSpec sigma_z() { return atom_only(AtomOp::Z); }
OperatorSpec atom_axis(Axis ax) { return atom_only(axis_pauli(ax), axis_sign(ax)); }

OperatorSpec a(int mode) { return mode_chain(mode, {ModeFactor::A}); }
OperatorSpec adag(int mode) { return mode_chain(mode, {ModeFactor::Adag}); }
OperatorSpec n(int mode) { return mode_chain(mode, {ModeFactor::N}); }
OperatorSpec n_sq(int mode) { return mode_chain(mode, {ModeFactor::N, ModeFactor::N}); }

OperatorSpec x1(int mode) { return adag(mode) + a(mode); }
OperatorSpec p1(int mode) { return (adag(mode) - a(mode)) * Complex(0.0, 1.0); }
OperatorSpec x2(int mode) {
    return mode_chain(mode, {ModeFactor::Adag, ModeFactor::Adag}) +
           mode_chain(mode, {ModeFactor::A, ModeFactor::A});
}
OperatorSpec p2(int mode) {
    return (mode_chain(mode, {ModeFactor::Adag, ModeFactor::Adag}) -
            mode_chain(mode, {ModeFactor::A, ModeFactor::A})) *
           Complex(0.0, 1.0);
}
OperatorSpec quad_x(int mode) { return x1(mode) * Complex(0.5, 0.0); }
OperatorSpec quad_y(int mode) { return p1(mode) * Complex(0.5, 0.0); }

OperatorSpec axis_pm(Axis ax, int mode, int sign) {
    // (i)^{(1 -+ 1)/2} sigma (a +- a^dag)
    const Complex pre = (sign > 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    OperatorSpec field = (sign > 0) ? (a(mode) + adag(mode)) : (a(mode) - adag(mode));
    return atom_axis(ax) * field * pre;
}

OperatorSpec axis_pp_mm(Axis ax, int mode, int sign) {
    const Complex pre = (sign > 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    OperatorSpec a2 = mode_chain(mode, {ModeFactor::A, ModeFactor::A});
    OperatorSpec ad2 = mode_chain(mode, {ModeFactor::Adag, ModeFactor::Adag});
    OperatorSpec field = (sign > 0) ? (a2 + ad2) : (a2 - ad2);
    return atom_axis(ax) * field * pre;
}

OperatorSpec axis_n(Axis ax, int mode) { return atom_axis(ax) * n(mode); }

OperatorSpec axis_npm(Axis ax, int mode, int sign) {
    const Complex pre = (sign > 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    OperatorSpec an = mode_chain(mode, {ModeFactor::A, ModeFactor::N});
    OperatorSpec nad = mode_chain(mode, {ModeFactor::N, ModeFactor::Adag});
    OperatorSpec field = (sign > 0) ? (an + nad) : (an - nad);
    return atom_axis(ax) * field * pre;
}

}  // namespace ops

}  // namespace hhgq
