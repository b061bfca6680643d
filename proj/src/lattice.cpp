#include "hhgq/lattice.hpp"

#include <cmath>
#include <sstream>

#include "hhgq/errors.hpp"
#include "hhgq/observables.hpp"

namespace hhgq {

double LatticeSpec::spacing() const { return spacing_factor * std::sqrt(M_PI); }

long LatticeSpec::n_lattice() const {
    const long p = points_per_mode();
    return p * p * p;
}

Complex LatticeSpec::point(int j, int p) const {
    const int side = points_per_side;
    const double s = spacing();
    const int re_idx = p / side, im_idx = p % side;
    const double half = 0.5 * double(side - 1);
    return center[j] + Complex((re_idx - half) * s, (im_idx - half) * s);
}

LatticeSpec LatticeSpec::pulse_modes(double A, double phi, double omega_f, double omega_e,
                                     const std::array<double, 3>& couplings, int points_per_side,
                                     double spacing_factor) {
    LatticeSpec spec;
    spec.omega = {omega_f, omega_f + 2.0 * omega_e, omega_f - 2.0 * omega_e};
    spec.coupling = couplings;
    spec.points_per_side = points_per_side;
    spec.spacing_factor = spacing_factor;
    // Coherent amplitudes chosen so the free-field mean reproduces
    // A sin^2(omega_e t) sin(omega_f t + phi) through sum_j <X_j>.
    const Complex rot = std::polar(1.0, -phi);
    spec.center = {Complex(0.0, 0.5 * A) * rot, Complex(0.0, -0.25 * A) * rot,
                   Complex(0.0, -0.25 * A) * rot};
    for (double w : spec.omega)
        if (w <= 0.0) throw ConfigError("LatticeSpec: sideband frequency must stay positive");
    return spec;
}

namespace {

Matrix coherent_gram(const LatticeSpec& spec, int j) {
    const int P = spec.points_per_mode();
    Matrix S(P, P);
    for (int k = 0; k < P; ++k)
        for (int q = 0; q < P; ++q) {
            const Complex a = spec.point(j, k), b = spec.point(j, q);
            S(k, q) = std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
        }
    return S;
}

// y = (A on mode `mode`) x for a P x P x P tensor vector, mode 0 slowest.
void contract3(const Vector& x, Vector& y, const Matrix& A, int mode, int P) {
    y.resize(x.size());
    if (mode == 2) {
        Eigen::Map<const Matrix> in(x.data(), P, P * P);
        Eigen::Map<Matrix> out(y.data(), P, P * P);
        out.noalias() = A * in;
    } else if (mode == 0) {
        Eigen::Map<const Matrix> in(x.data(), P * P, P);
        Eigen::Map<Matrix> out(y.data(), P * P, P);
        out.noalias() = in * A.transpose();
    } else {
        for (int p0 = 0; p0 < P; ++p0) {
            Eigen::Map<const Matrix> in(x.data() + p0 * P * P, P, P);
            Eigen::Map<Matrix> out(y.data() + p0 * P * P, P, P);
            out.noalias() = in * A.transpose();
        }
    }
}

Vector apply_tensor(const Vector& x, const std::array<Matrix, 3>& A, int P) {
    Vector u, v;
    contract3(x, u, A[0], 0, P);
    contract3(u, v, A[1], 1, P);
    contract3(v, u, A[2], 2, P);
    return u;
}

// branch labels and phase factors of (coh2t)
Complex branch_label(const LatticeSpec& spec, int j, int p, int branch_sign, double t) {
    const double g = spec.gamma(j);
    const Complex alpha = spec.point(j, p);
    const Complex rot = std::polar(1.0, -spec.omega[j] * t);
    return double(branch_sign) * g + (alpha - double(branch_sign) * g) * rot;
}

double branch_phase(const LatticeSpec& spec, int j, int p, int branch_sign, double t) {
    const double g = spec.gamma(j);
    const Complex alpha = spec.point(j, p);
    const Complex rot = std::polar(1.0, -spec.omega[j] * t);
    return double(branch_sign) * g *
           std::imag(alpha - (alpha - double(branch_sign) * g) * rot);
}

// <beta^+_k | beta^-_q> with the relative delta phases, per mode.
Matrix cross_matrix(const LatticeSpec& spec, int j, double t) {
    const int P = spec.points_per_mode();
    Matrix C(P, P);
    std::vector<Complex> bp(P), bm(P);
    std::vector<double> dp(P), dm(P);
    for (int p = 0; p < P; ++p) {
        bp[p] = branch_label(spec, j, p, +1, t);
        bm[p] = branch_label(spec, j, p, -1, t);
        dp[p] = branch_phase(spec, j, p, +1, t);
        dm[p] = branch_phase(spec, j, p, -1, t);
    }
    for (int k = 0; k < P; ++k)
        for (int q = 0; q < P; ++q) {
            const Complex ov = std::exp(-0.5 * std::norm(bp[k]) - 0.5 * std::norm(bm[q]) +
                                        std::conj(bp[k]) * bm[q]);
            C(k, q) = std::polar(1.0, dm[q] - dp[k]) * ov;
        }
    return C;
}

}  // namespace

double LatticeState::physical_norm() const {
    const int P = spec.points_per_mode();
    std::array<Matrix, 3> S = gram;
    const Vector sp = apply_tensor(c_plus, S, P);
    const Vector sm = apply_tensor(c_minus, S, P);
    const double n2 = std::real(c_plus.dot(sp)) + std::real(c_minus.dot(sm));
    return std::sqrt(std::max(0.0, n2));
}

LatticeState init_pulse_state(double A, double phi, const LatticeSpec& spec_in) {
    LatticeState st;
    st.spec = spec_in;
    bool has_center = false;
    for (const auto& c : st.spec.center) has_center |= (c != Complex{0.0, 0.0});
    if (!has_center && A != 0.0)
        st.spec = LatticeSpec::pulse_modes(A, phi, st.spec.omega[0],
                                           0.5 * (st.spec.omega[1] - st.spec.omega[0]),
                                           st.spec.coupling, st.spec.points_per_side,
                                           st.spec.spacing_factor);

    // target amplitudes of the three-mode pulse
    const Complex rot = std::polar(1.0, -phi);
    const std::array<Complex, 3> target = {Complex(0.0, 0.5 * A) * rot,
                                           Complex(0.0, -0.25 * A) * rot,
                                           Complex(0.0, -0.25 * A) * rot};

    const int P = st.spec.points_per_mode();
    st.condition_number = 0.0;
    std::array<Vector, 3> coeff;
    for (int j = 0; j < 3; ++j) {
        // coverage: nearest lattice point within one spacing
        double best = 1e300;
        for (int p = 0; p < P; ++p)
            best = std::min(best, std::abs(st.spec.point(j, p) - target[j]));
        if (best > st.spec.spacing() + 1e-9) {
            std::ostringstream os;
            os << "init_pulse_state: amplitude " << target[j] << " of mode " << j + 1
               << " lies outside the lattice; extend the grid by "
               << int(std::ceil(best / st.spec.spacing())) << " points per side";
            throw PhysicsGuardError(os.str());
        }

        st.gram[j] = coherent_gram(st.spec, j);
        Eigen::SelfAdjointEigenSolver<Matrix> es(st.gram[j]);
        const double lmin = es.eigenvalues().minCoeff();
        const double lmax = es.eigenvalues().maxCoeff();
        if (lmin <= 0.0 || lmax / lmin > st.spec.condition_cap) {
            std::ostringstream os;
            os << "init_pulse_state: overlap matrix condition " << lmax / std::max(lmin, 1e-300)
               << " exceeds the cap " << st.spec.condition_cap
               << "; use a smaller or denser lattice";
            throw PhysicsGuardError(os.str());
        }
        st.condition_number = std::max(st.condition_number, lmax / lmin);
        st.gram_inv[j] = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();

        Vector v(P);
        for (int p = 0; p < P; ++p) {
            const Complex a = st.spec.point(j, p);
            v(p) = std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(target[j]) +
                            std::conj(a) * target[j]);
        }
        coeff[j] = st.gram_inv[j] * v;
        const double fidelity = std::real(v.dot(coeff[j]));
        if (fidelity < 1.0 - 1e-6) {
            std::ostringstream os;
            os << "init_pulse_state: reconstruction fidelity " << fidelity << " of mode " << j + 1
               << " below 1 - 1e-6; densify the lattice";
            throw PhysicsGuardError(os.str());
        }
    }

    const long K = st.spec.n_lattice();
    st.c_plus.resize(K);
    st.c_minus.resize(K);
    long idx = 0;
    const double r = 1.0 / std::sqrt(2.0);
    for (int p0 = 0; p0 < P; ++p0)
        for (int p1 = 0; p1 < P; ++p1)
            for (int p2 = 0; p2 < P; ++p2, ++idx) {
                const Complex prod = coeff[0](p0) * coeff[1](p1) * coeff[2](p2);
                st.c_plus(idx) = r * prod;    // |g> = (|+> - |->)/sqrt(2)
                st.c_minus(idx) = -r * prod;
            }
    st.t = 0.0;
    return st;
}

LatticeTrajectory evolve_lattice(const LatticeState& init, double omega0, double t_end,
                                 int steps_per_cycle, int sample_stride) {
    const LatticeSpec& spec = init.spec;
    const int P = spec.points_per_mode();
    const double w_max = *std::max_element(spec.omega.begin(), spec.omega.end());
    const double dt = (2.0 * M_PI / std::max(w_max, omega0)) / double(steps_per_cycle);
    const long n_steps = integration_steps(0.0, t_end, dt);
    const double h = t_end / double(n_steps);

    LatticeTrajectory traj;
    traj.spec = spec;
    traj.omega0 = omega0;

    Vector cp = init.c_plus, cm = init.c_minus;
    const long K = spec.n_lattice();
    Vector dcp(K), dcm(K);

    std::array<Matrix, 3> Apm, Amp;
    auto build = [&](double t) {
        for (int j = 0; j < 3; ++j) {
            const Matrix C = cross_matrix(spec, j, t);
            Apm[j].noalias() = init.gram_inv[j] * C;
            Amp[j].noalias() = init.gram_inv[j] * C.adjoint();
        }
    };

    auto rhs = [&](double t, const Vector& yp, const Vector& ym, Vector& dp, Vector& dm) {
        build(t);
        const Complex pre{0.0, -0.5 * omega0};
        dp = pre * apply_tensor(ym, Apm, P);
        dm = pre * apply_tensor(yp, Amp, P);
    };

    const double norm0 = init.physical_norm();
    auto sample = [&](long s, double t) {
        if (s % sample_stride != 0 && s != n_steps) return;
        traj.times.push_back(t);
        traj.c_plus.push_back(cp);
        traj.c_minus.push_back(cm);
    };

    Vector k1p(K), k1m(K), k2p(K), k2m(K), k3p(K), k3m(K), k4p(K), k4m(K), tp(K), tm(K);
    sample(0, 0.0);
    for (long s = 0; s < n_steps; ++s) {
        const double t = h * double(s);
        rhs(t, cp, cm, k1p, k1m);
        tp = cp + 0.5 * h * k1p;
        tm = cm + 0.5 * h * k1m;
        rhs(t + 0.5 * h, tp, tm, k2p, k2m);
        tp = cp + 0.5 * h * k2p;
        tm = cm + 0.5 * h * k2m;
        rhs(t + 0.5 * h, tp, tm, k3p, k3m);
        tp = cp + h * k3p;
        tm = cm + h * k3m;
        rhs(t + h, tp, tm, k4p, k4m);
        cp += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        cm += (h / 6.0) * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
        if ((s + 1) % sample_stride == 0 || s + 1 == n_steps) {
            LatticeState probe;
            probe.spec = spec;
            probe.gram = init.gram;
            probe.c_plus = cp;
            probe.c_minus = cm;
            const double nr = probe.physical_norm();
            if (std::abs(nr - norm0) > 1e-5 * std::max(1.0, norm0)) {
                std::ostringstream os;
                os << "evolve_lattice: physical norm drift " << nr - norm0 << " at t = " << t + h
                   << "; reduce the step or densify the lattice";
                throw PhysicsGuardError(os.str());
            }
        }
        sample(s + 1, t + h);
    }
    return traj;
}

LatticeMoments lattice_moments(const LatticeSpec& spec, const std::array<Matrix, 3>& gram,
                               const Vector& c_plus, const Vector& c_minus, double t) {
    const int P = spec.points_per_mode();
    LatticeMoments m;

    // per-branch label tables
    std::array<std::array<std::vector<Complex>, 3>, 2> labels;  // [branch 0=-,1=+][mode][point]
    for (int b = 0; b < 2; ++b) {
        const int sign = (b == 1) ? +1 : -1;
        for (int j = 0; j < 3; ++j) {
            labels[b][j].resize(P);
            for (int p = 0; p < P; ++p) labels[b][j][p] = branch_label(spec, j, p, sign, t);
        }
    }

    enum class Op { One, A, N, N2, X, UField, UNField };
    auto weight = [&](Op op, Complex bk, Complex bq) -> Complex {
        const Complex cb = std::conj(bk) * bq;
        switch (op) {
            case Op::One: return 1.0;
            case Op::A: return bq;
            case Op::N: return cb;
            case Op::N2: return cb * cb + cb;
            case Op::X: return 0.5 * (bq + std::conj(bk));
            // i(a - adag) and i(aN - N adag) reduced to normal order
            case Op::UField: return Complex(0.0, 1.0) * (bq - std::conj(bk));
            case Op::UNField:
                return Complex(0.0, 1.0) *
                       (std::conj(bk) * bq * bq + bq - std::conj(bk) * std::conj(bk) * bq -
                        std::conj(bk));
        }
        return 0.0;
    };

    auto quad = [&](std::array<Op, 3> ops, bool sigma_x_weight) {
        Complex total{0.0, 0.0};
        for (int b = 0; b < 2; ++b) {
            std::array<Matrix, 3> Q;
            for (int j = 0; j < 3; ++j) {
                if (ops[j] == Op::One) {
                    Q[j] = gram[j];
                } else {
                    Q[j].resize(P, P);
                    for (int k = 0; k < P; ++k)
                        for (int q = 0; q < P; ++q)
                            Q[j](k, q) =
                                gram[j](k, q) * weight(ops[j], labels[b][j][k], labels[b][j][q]);
                }
            }
            const Vector& c = (b == 1) ? c_plus : c_minus;
            const Complex val = c.dot(apply_tensor(c, Q, P));
            total += sigma_x_weight ? ((b == 1) ? val : -val) : val;
        }
        return total;
    };

    m.norm2 = std::real(quad({Op::One, Op::One, Op::One}, false));
    m.sigma_x = std::real(quad({Op::One, Op::One, Op::One}, true));
    for (int j = 0; j < 3; ++j) {
        std::array<Op, 3> sel{Op::One, Op::One, Op::One};
        sel[j] = Op::A;
        m.a[j] = quad(sel, false);
        sel[j] = Op::N;
        m.n[j] = std::real(quad(sel, false));
        sel[j] = Op::N2;
        m.n2[j] = std::real(quad(sel, false));
        sel[j] = Op::X;
        m.x[j] = std::real(quad(sel, false));
        sel[j] = Op::UField;
        m.u_minus[j] = std::real(quad(sel, true));
        sel[j] = Op::UNField;
        m.u_nminus[j] = std::real(quad(sel, true));
    }
    m.n12 = std::real(quad({Op::N, Op::N, Op::One}, false));
    m.n13 = std::real(quad({Op::N, Op::One, Op::N}, false));
    m.n23 = std::real(quad({Op::One, Op::N, Op::N}, false));
    m.n123 = std::real(quad({Op::N, Op::N, Op::N}, false));
    return m;
}

BackactionSeries backaction_observables(const LatticeTrajectory& traj, double antibunching_tau) {
    BackactionSeries out;
    out.antibunching_tau = antibunching_tau;

    std::array<Matrix, 3> gram;
    for (int j = 0; j < 3; ++j) gram[j] = coherent_gram(traj.spec, j);

    for (size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const LatticeMoments m =
            lattice_moments(traj.spec, gram, traj.c_plus[i], traj.c_minus[i], t);
        const double norm2 = m.norm2;
        out.times.push_back(t);
        out.norm.push_back(std::sqrt(std::max(0.0, norm2)));
        out.sigma_x.push_back(m.sigma_x / norm2);

        double e_mean = 0.0, dg2 = 0.0;
        std::array<double, 3> nmean{};
        for (int j = 0; j < 3; ++j) {
            const double n = m.n[j] / norm2;
            const double n2 = m.n2[j] / norm2;
            nmean[j] = n;
            out.n_mean[j].push_back(n);
            out.q[j].push_back(n > kEpsilonN ? (n2 - n - n * n) / n : 0.0);
            e_mean += m.x[j] / norm2;
            if (traj.spec.coupling[j] != 0.0 && n > kEpsilonN) {
                const double um = m.u_minus[j] / norm2;
                const double unm = m.u_nminus[j] / norm2;
                dg2 += 0.5 * traj.spec.coupling[j] * (unm * n - n2 * um) / (n * n * n);
            }
        }
        out.e_mean.push_back(e_mean);
        out.dg2_sum.push_back(dg2 * antibunching_tau);

        const double denom = nmean[0] * nmean[1] * nmean[2];
        out.g3.push_back(denom > 0.0 ? (m.n123 / norm2) / denom : 0.0);
    }
    return out;
}

}  // namespace hhgq
