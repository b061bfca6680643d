#include "hhgq/state.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hhgq/errors.hpp"

namespace hhgq {

namespace {

// Applies a per-mode matrix T (rows x cols) on mode `m` of a tensor vector
// whose per-mode dims are `dims` (row-major, mode 0 slowest).
Vector apply_mode_matrix(const Vector& v, const std::vector<int>& dims, int m, const Matrix& T) {
    int inner = 1;
    for (size_t j = m + 1; j < dims.size(); ++j) inner *= dims[j];
    int outer = 1;
    for (int j = 0; j < m; ++j) outer *= dims[j];
    const int ds = dims[m];
    const int dt = int(T.rows());

    std::vector<int> out_dims = dims;
    out_dims[m] = dt;
    Vector out = Vector::Zero(v.size() / ds * dt);
    for (int o = 0; o < outer; ++o) {
        const int src_base = o * ds * inner;
        const int dst_base = o * dt * inner;
        for (int r = 0; r < dt; ++r)
            for (int c = 0; c < ds; ++c) {
                const Complex t = T(r, c);
                if (t == Complex{0.0, 0.0}) continue;
                out.segment(dst_base + r * inner, inner) += t * v.segment(src_base + c * inner, inner);
            }
    }
    return out;
}

double branch_sign(int s) { return s == 1 ? 1.0 : -1.0; }

}  // namespace

int QuantumState::mode_dim() const {
    int d = 1;
    for (const auto& b : mode_bases) d *= b.dim();
    return d;
}

QuantumState QuantumState::ground_vacuum(std::vector<FockBasis> bases, AtomLabeling labeling,
                                         bool branch_displacement) {
    if (branch_displacement && labeling != AtomLabeling::SigmaX)
        throw ConfigError("branch displacement requires sigma_x labeling");
    QuantumState st;
    st.labeling = labeling;
    st.branch_displacement = branch_displacement;
    st.mode_bases = std::move(bases);
    st.amplitudes = Vector::Zero(st.dim());
    const int D = st.mode_dim();
    if (labeling == AtomLabeling::Energy) {
        st.amplitudes(0) = 1.0;  // |g>|0...0>
    } else {
        // |g> = (|+> - |->)/sqrt(2)
        const double r = 1.0 / std::sqrt(2.0);
        st.amplitudes(0) = -r;   // |->
        st.amplitudes(D) = r;    // |+>
    }
    return st;
}

QuantumState QuantumState::coherent(const std::vector<Complex>& alphas,
                                    const std::vector<int>& n_max) {
    if (alphas.size() != n_max.size()) throw ConfigError("coherent: size mismatch");
    QuantumState st;
    st.labeling = AtomLabeling::Energy;
    for (int nm : n_max) st.mode_bases.push_back(FockBasis{nm, {0.0, 0.0}});
    const int D = st.mode_dim();
    st.amplitudes = Vector::Zero(2 * D);
    // fill mode product amplitudes recursively over the row-major layout
    std::vector<Vector> per_mode;
    for (size_t j = 0; j < alphas.size(); ++j) {
        const int d = n_max[j] + 1;
        Vector v(d);
        for (int n = 0; n < d; ++n) v(n) = displacement_matrix_element(n, 0, alphas[j]);
        per_mode.push_back(v);
    }
    for (int idx = 0; idx < D; ++idx) {
        int rem = idx;
        Complex amp = 1.0;
        for (int j = int(alphas.size()) - 1; j >= 0; --j) {
            const int d = n_max[j] + 1;
            amp *= per_mode[j](rem % d);
            rem /= d;
        }
        st.amplitudes(idx) = amp;  // atom block 0 = |g>
    }
    return st;
}

QuantumState convert_basis(const QuantumState& state, const BasisTarget& target,
                           double lost_weight_tol) {
    if (target.mode_bases.size() != state.mode_bases.size())
        throw ConfigError("convert_basis: mode count mismatch");
    if (target.branch_displacement && target.labeling != AtomLabeling::SigmaX)
        throw ConfigError("convert_basis: branch displacement requires sigma_x labeling");

    const int M = state.n_modes();
    std::vector<int> src_dims(M), dst_dims(M);
    for (int j = 0; j < M; ++j) {
        src_dims[j] = state.mode_bases[j].dim();
        dst_dims[j] = target.mode_bases[j].dim();
    }
    const int Ds = state.mode_dim();

    // Per-branch mode transform. The relabeling between atomic bases mixes
    // branches, so it is only legal once both branches share mode bases;
    // branch-resolved displacements therefore must be removed (or attached)
    // while the labeling is unchanged.
    const bool relabel = target.labeling != state.labeling;
    if (relabel && state.branch_displacement && target.branch_displacement)
        throw ConfigError("convert_basis: cannot relabel between two branch-displaced bases");

    // Attaching a branch-resolved displacement only makes sense after the
    // atomic relabeling, so split that case into relabel-then-displace.
    if (relabel && target.branch_displacement) {
        BasisTarget mid;
        mid.labeling = target.labeling;
        mid.branch_displacement = false;
        mid.mode_bases = state.mode_bases;
        return convert_basis(convert_basis(state, mid, lost_weight_tol), target, lost_weight_tol);
    }

    auto branch_gamma = [](const FockBasis& b, bool branched, int s) {
        return branched ? branch_sign(s) * b.displacement : b.displacement;
    };

    // Step 1: per-branch displacement change onto the target mode bases.
    std::vector<Vector> branch(2);
    for (int s = 0; s < 2; ++s) {
        Vector v = state.amplitudes.segment(s * Ds, Ds);
        std::vector<int> dims = src_dims;
        for (int j = 0; j < M; ++j) {
            const Complex gs = branch_gamma(state.mode_bases[j], state.branch_displacement, s);
            const Complex gt = branch_gamma(target.mode_bases[j], target.branch_displacement, s);
            if (gs == gt && src_dims[j] == dst_dims[j]) continue;
            // |n, gt><n, gt| ... |m, gs>: <n|D(-gt)D(gs)|m> = phase * <n|D(gs-gt)|m>
            const Complex rel = gs - gt;
            const Complex phase = std::exp(Complex(0.0, std::imag(-gt * std::conj(gs))));
            Matrix T = phase * displacement_matrix(dst_dims[j], src_dims[j], rel);
            v = apply_mode_matrix(v, dims, j, T);
            dims[j] = dst_dims[j];
        }
        branch[s] = std::move(v);
    }

    QuantumState out;
    out.labeling = target.labeling;
    out.branch_displacement = target.branch_displacement;
    out.mode_bases = target.mode_bases;
    const int Dt = out.mode_dim();
    out.amplitudes = Vector::Zero(2 * Dt);

    if (!relabel) {
        out.amplitudes.segment(0, Dt) = branch[0];
        out.amplitudes.segment(Dt, Dt) = branch[1];
    } else {
        const double r = 1.0 / std::sqrt(2.0);
        if (state.labeling == AtomLabeling::Energy) {
            // (g,e) -> (-,+): c_- = (c_e - c_g)/sqrt2, c_+ = (c_g + c_e)/sqrt2
            out.amplitudes.segment(0, Dt) = r * (branch[1] - branch[0]);
            out.amplitudes.segment(Dt, Dt) = r * (branch[0] + branch[1]);
        } else {
            // (-,+) -> (g,e): c_g = (c_+ - c_-)/sqrt2, c_e = (c_+ + c_-)/sqrt2
            out.amplitudes.segment(0, Dt) = r * (branch[1] - branch[0]);
            out.amplitudes.segment(Dt, Dt) = r * (branch[1] + branch[0]);
        }
    }

    const double n0 = state.amplitudes.squaredNorm();
    const double n1 = out.amplitudes.squaredNorm();
    if (n0 > 0 && n0 - n1 > lost_weight_tol * n0) {
        std::ostringstream os;
        os << "convert_basis: target truncation lost weight " << (n0 - n1) / n0
           << " (tolerance " << lost_weight_tol << ")";
        throw PhysicsGuardError(os.str());
    }
    return out;
}

QuantumState to_plain_energy(const QuantumState& state, double lost_weight_tol) {
    bool plain = !state.branch_displacement && state.labeling == AtomLabeling::Energy;
    if (plain)
        for (const auto& b : state.mode_bases) plain &= !b.displaced();
    if (plain) return state;

    // Padding sized for the displacement spread; grown if weight is lost.
    int pad = 6;
    for (int attempt = 0; attempt < 6; ++attempt) {
        BasisTarget tgt;
        tgt.labeling = AtomLabeling::Energy;
        tgt.branch_displacement = false;
        for (const auto& b : state.mode_bases) {
            const double g = std::abs(b.displacement);
            const int extra = int(std::ceil(4.0 * g * g + 4.0 * g * std::sqrt(double(b.n_max)))) + pad;
            tgt.mode_bases.push_back(FockBasis{b.n_max + extra, {0.0, 0.0}});
        }
        try {
            return convert_basis(state, tgt, lost_weight_tol);
        } catch (const PhysicsGuardError&) {
            pad *= 2;
            if (attempt == 5) throw;
        }
    }
    throw PhysicsGuardError("to_plain_energy: padding exhausted");
}

void save_state(const QuantumState& state, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("save_state: cannot open " + path);
    f << "HHGQ-STATE 1\n";
    f << "labeling " << (state.labeling == AtomLabeling::Energy ? "energy" : "sigma_x") << "\n";
    f << "branch_displacement " << (state.branch_displacement ? 1 : 0) << "\n";
    f << "modes " << state.n_modes() << "\n";
    char buf[128];
    for (const auto& b : state.mode_bases) {
        std::snprintf(buf, sizeof buf, "mode %d %.17g %.17g\n", b.n_max,
                      std::real(b.displacement), std::imag(b.displacement));
        f << buf;
    }
    f << "amplitudes " << state.amplitudes.size() << "\n";
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", std::real(state.amplitudes(i)),
                      std::imag(state.amplitudes(i)));
        f << buf;
    }
}

QuantumState load_state(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("load_state: cannot open " + path);
    std::string tag;
    int version = 0;
    f >> tag >> version;
    if (tag != "HHGQ-STATE" || version != 1) throw ConfigError("load_state: bad header");
    QuantumState st;
    std::string key, val;
    f >> key >> val;
    st.labeling = (val == "energy") ? AtomLabeling::Energy : AtomLabeling::SigmaX;
    int bd = 0, nmodes = 0;
    f >> key >> bd;
    st.branch_displacement = bd != 0;
    f >> key >> nmodes;
    for (int j = 0; j < nmodes; ++j) {
        int nm;
        double re, im;
        f >> key >> nm >> re >> im;
        st.mode_bases.push_back(FockBasis{nm, {re, im}});
    }
    Eigen::Index count = 0;
    f >> key >> count;
    if (count != st.dim()) throw ConfigError("load_state: amplitude count mismatch");
    st.amplitudes.resize(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        double re, im;
        f >> re >> im;
        st.amplitudes(i) = Complex(re, im);
    }
    if (!f) throw ConfigError("load_state: truncated file");
    return st;
}

}  // namespace hhgq
