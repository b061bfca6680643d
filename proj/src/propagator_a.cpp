#include "hhgq/propagator_a.hpp"

#include <cmath>
#include <sstream>

#include "hhgq/errors.hpp"

namespace hhgq {

ModeSet ModeSet::from_rule(const std::vector<double>& omegas, const CouplingRule& rule,
                           int n_max_default) {
    ModeSet ms;
    ms.omega = omegas;
    for (double w : omegas) ms.coupling.push_back(coupling_for(w, rule));
    ms.n_max.assign(omegas.size(), n_max_default);
    ms.validate();
    return ms;
}

std::vector<FockBasis> ModeSet::displaced_bases() const {
    std::vector<FockBasis> b;
    for (int j = 0; j < size(); ++j) b.push_back(FockBasis{n_max[j], Complex(gamma(j), 0.0)});
    return b;
}

std::vector<FockBasis> ModeSet::plain_bases(int pad) const {
    std::vector<FockBasis> b;
    for (int j = 0; j < size(); ++j) b.push_back(FockBasis{n_max[j] + pad, {0.0, 0.0}});
    return b;
}

void ModeSet::validate() const {
    if (omega.size() != coupling.size() || omega.size() != n_max.size())
        throw ConfigError("ModeSet: inconsistent field lengths");
    for (size_t j = 0; j < omega.size(); ++j) {
        if (omega[j] <= 0.0) throw ConfigError("ModeSet: omega must be positive");
        if (coupling[j] < 0.0) throw ConfigError("ModeSet: coupling must be nonnegative");
        if (n_max[j] < 1) throw ConfigError("ModeSet: n_max must be >= 1");
    }
}

double rate_max(const DriveConfig& drive, const ModeSet& modes, double omega0) {
    double w = drive.omega_f;
    for (double wj : modes.omega) w = std::max(w, wj);
    return omega0 + std::abs(drive.A) + w;
}

long integration_steps(double t0, double t1, double dt_magnitude) {
    return std::max(1L, long(std::ceil(std::abs(t1 - t0) / dt_magnitude - 1e-12)));
}

namespace {

struct Dims {
    std::vector<int> d;
    int total = 1;
};

Dims mode_dims(const ModeSet& modes) {
    Dims out;
    for (int j = 0; j < modes.size(); ++j) {
        out.d.push_back(modes.n_max[j] + 1);
        out.total *= out.d.back();
    }
    return out;
}

// Multi-index mode energy sum(omega_j n_j) per flat index.
std::vector<double> mode_energies(const ModeSet& modes, const Dims& dims) {
    std::vector<double> e(dims.total, 0.0);
    for (int idx = 0; idx < dims.total; ++idx) {
        int rem = idx;
        double sum = 0.0;
        for (int j = modes.size() - 1; j >= 0; --j) {
            sum += modes.omega[j] * (rem % dims.d[j]);
            rem /= dims.d[j];
        }
        e[idx] = sum;
    }
    return e;
}

// y += T (applied on mode m) x, per-branch tensor contraction.
void contract_mode(const Vector& x, Vector& y, const Matrix& T, const Dims& dims, int m) {
    int inner = 1;
    for (size_t j = m + 1; j < dims.d.size(); ++j) inner *= dims.d[j];
    int outer = 1;
    for (int j = 0; j < m; ++j) outer *= dims.d[j];
    const int d = dims.d[m];
    if (inner == 1) {
        // contiguous blocks of length d: matrix-vector per outer block
        for (int o = 0; o < outer; ++o)
            y.segment(o * d, d).noalias() = T * x.segment(o * d, d);
        return;
    }
    for (int o = 0; o < outer; ++o) {
        Eigen::Map<const Eigen::MatrixXcd> xin(x.data() + o * d * inner, inner, d);
        Eigen::Map<Eigen::MatrixXcd> yout(y.data() + o * d * inner, inner, d);
        yout.noalias() = xin * T.transpose();
    }
}


// Shared RK4 driver over complex state vectors.
template <typename Rhs, typename Sample>
void rk4_drive(Vector& y, double t0, double t1, long n_steps, Rhs&& rhs, Sample&& sample) {
    const double h = (t1 - t0) / double(n_steps);
    Vector k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
    sample(0L, t0, y);
    for (long s = 0; s < n_steps; ++s) {
        const double t = t0 + h * double(s);
        rhs(t, y, k1);
        tmp = y + (0.5 * h) * k1;
        rhs(t + 0.5 * h, tmp, k2);
        tmp = y + (0.5 * h) * k2;
        rhs(t + 0.5 * h, tmp, k3);
        tmp = y + h * k3;
        rhs(t + h, tmp, k4);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        sample(s + 1, t0 + h * double(s + 1), y);
    }
}

void check_norm(double nrm, double t, double norm_abort) {
    if (std::abs(nrm - 1.0) > norm_abort) {
        std::ostringstream os;
        os << "norm drift " << nrm - 1.0 << " at t = " << t
           << " exceeds abort threshold; reduce the step size";
        throw PhysicsGuardError(os.str());
    }
}

double resolve_dt(const IntegratorOptions& opts, const DriveConfig& drive, const ModeSet& modes,
                  double omega0) {
    if (opts.dt > 0.0) return opts.dt;
    return (2.0 * M_PI / rate_max(drive, modes, omega0)) / double(opts.steps_per_cycle);
}

}  // namespace

void propagate_displaced_cb(const QuantumState& init, const DriveConfig& drive,
                            const ModeSet& modes, double omega0, double t0, double t1,
                            const IntegratorOptions& opts, long sink_stride,
                            const SampleSink& sink, std::vector<std::string>* warnings) {
    modes.validate();
    const Dims dims = mode_dims(modes);
    const int D = dims.total;

    // Bring the initial state onto the integration basis.
    BasisTarget tgt;
    tgt.labeling = AtomLabeling::SigmaX;
    tgt.branch_displacement = true;
    tgt.mode_bases = modes.displaced_bases();
    QuantumState work = convert_basis(init, tgt);

    // Constant overlap blocks <n|D(-+2 gamma_j)|m> per mode; branch +
    // couples through D(-2g), branch - through D(+2g).
    std::vector<Matrix> Dm_minus, Dm_plus;
    for (int j = 0; j < modes.size(); ++j) {
        const Complex g(2.0 * modes.gamma(j), 0.0);
        Dm_minus.push_back(displacement_matrix(dims.d[j], dims.d[j], -g));
        Dm_plus.push_back(displacement_matrix(dims.d[j], dims.d[j], g));
    }
    const std::vector<double> energies = mode_energies(modes, dims);

    // Interaction picture: strip the diagonal phases of the initial state.
    // theta_{s,n}(t) = sum_j omega_j n_j t + sign(s) phi_d(t).
    auto phases = [&](double t, int s) {
        Vector ph(D);
        const double pd = rabi_phase_integral(t, drive) * (s == 1 ? 1.0 : -1.0);
        for (int i = 0; i < D; ++i) ph(i) = std::polar(1.0, -(energies[i] * t + pd));
        return ph;
    };

    Vector b(2 * D);
    {
        const Vector ph0 = phases(t0, 0), ph1 = phases(t0, 1);
        for (int i = 0; i < D; ++i) {
            b(i) = work.amplitudes(i) / ph0(i);
            b(D + i) = work.amplitudes(D + i) / ph1(i);
        }
    }

    Vector scratch_u(D), scratch_v(D), mode_ph(D);
    auto rhs = [&](double t, const Vector& y, Vector& dy) {
        for (int i = 0; i < D; ++i) mode_ph(i) = std::polar(1.0, -energies[i] * t);
        const double pd2 = 2.0 * rabi_phase_integral(t, drive);
        const Complex cminus = Complex(0.0, -0.5 * omega0) * std::polar(1.0, pd2);
        const Complex cplus = Complex(0.0, -0.5 * omega0) * std::polar(1.0, -pd2);
        // db+ = -i w0/2 e^{+2i phi_d} P(t) K- P*(t) b-
        scratch_u = mode_ph.cwiseProduct(y.segment(0, D));
        if (modes.size() == 0)
            scratch_v = scratch_u;
        else {
            for (int j = 0; j < modes.size(); ++j) {
                contract_mode(scratch_u, scratch_v, Dm_minus[j], dims, j);
                if (j + 1 < modes.size()) scratch_u.swap(scratch_v);
            }
        }
        dy.segment(D, D) = cminus * mode_ph.conjugate().cwiseProduct(scratch_v);
        // db- = -i w0/2 e^{-2i phi_d} P(t) K+ P*(t) b+
        scratch_u = mode_ph.cwiseProduct(y.segment(D, D));
        if (modes.size() == 0)
            scratch_v = scratch_u;
        else {
            for (int j = 0; j < modes.size(); ++j) {
                contract_mode(scratch_u, scratch_v, Dm_plus[j], dims, j);
                if (j + 1 < modes.size()) scratch_u.swap(scratch_v);
            }
        }
        dy.segment(0, D) = cplus * mode_ph.conjugate().cwiseProduct(scratch_v);
    };

    const double dt = resolve_dt(opts, drive, modes, omega0);
    const long n_steps = integration_steps(t0, t1, dt);
    bool warned_occupation = false;

    QuantumState sample_state = work;
    auto sample = [&](long s, double t, const Vector& y) {
        if (s % sink_stride != 0 && s != n_steps) return;
        check_norm(y.norm(), t, opts.norm_abort);
        const Vector ph0 = phases(t, 0), ph1 = phases(t, 1);
        for (int i = 0; i < D; ++i) {
            sample_state.amplitudes(i) = y(i) * ph0(i);
            sample_state.amplitudes(D + i) = y(D + i) * ph1(i);
        }
        if (!warned_occupation && warnings) {
            // occupation of any top Fock level
            double top = 0.0;
            for (int j = 0; j < modes.size(); ++j) {
                int inner = 1;
                for (int k = j + 1; k < modes.size(); ++k) inner *= dims.d[k];
                for (int i = 0; i < 2 * D; ++i)
                    if ((i % (dims.d[j] * inner)) / inner == dims.d[j] - 1) top += std::norm(y(i));
            }
            if (top > opts.occupation_warn) {
                std::ostringstream os;
                os << "top-level Fock occupation " << top << " at t = " << t
                   << "; increase n_max";
                warnings->push_back(os.str());
                warned_occupation = true;
            }
        }
        sink(s, t, sample_state);
    };

    rk4_drive(b, t0, t1, n_steps, rhs, sample);
}

Trajectory propagate_displaced(const QuantumState& init, const DriveConfig& drive,
                               const ModeSet& modes, double omega0, double t0, double t1,
                               const IntegratorOptions& opts) {
    Trajectory traj;
    traj.drive = drive;
    traj.modes = modes;
    traj.omega0 = omega0;
    traj.options = opts;
    propagate_displaced_cb(
        init, drive, modes, omega0, t0, t1, opts, opts.sample_stride,
        [&](long, double t, const QuantumState& st) {
            traj.times.push_back(t);
            traj.states.push_back(st);
        },
        &traj.warnings);
    return traj;
}

namespace {

constexpr int kDirectDimCap = 200000;

}  // namespace

Trajectory propagate_fock_direct(const QuantumState& init, const DriveConfig& drive,
                                 const ModeSet& modes, double omega0, double t0, double t1,
                                 const IntegratorOptions& opts) {
    modes.validate();
    const Dims dims = mode_dims(modes);
    const int D = dims.total;
    if (2 * D > kDirectDimCap) {
        std::ostringstream os;
        os << "propagate_fock_direct: dimension " << 2 * D << " exceeds cap " << kDirectDimCap;
        throw ConfigError(os.str());
    }

    BasisTarget tgt;
    tgt.labeling = AtomLabeling::Energy;
    tgt.branch_displacement = false;
    tgt.mode_bases = modes.plain_bases();
    QuantumState work = convert_basis(init, tgt);

    std::vector<Matrix> Xop;  // a + adag per mode
    for (int j = 0; j < modes.size(); ++j) {
        ModeOperators mo = build_mode_operators(work.mode_bases[j]);
        Xop.push_back(mo.a + mo.adag);
    }
    const std::vector<double> energies = mode_energies(modes, dims);

    Vector hpsi(2 * D), scratch(D), scratch2(D);
    auto rhs = [&](double t, const Vector& y, Vector& dy) {
        const double om = classical_rabi(t, drive);
        // diagonal: +-(w0/2) on atom, mode energies
        for (int i = 0; i < D; ++i) {
            hpsi(i) = (-0.5 * omega0 + energies[i]) * y(i);
            hpsi(D + i) = (0.5 * omega0 + energies[i]) * y(D + i);
        }
        // sigma_x blocks: (Omega(t)/2 + sum Omega_n/2 (a+adag)) swaps atom blocks
        for (int blk = 0; blk < 2; ++blk) {
            const int src = blk * D, dst = (1 - blk) * D;
            scratch = (0.5 * om) * y.segment(src, D);
            for (int j = 0; j < modes.size(); ++j) {
                if (modes.coupling[j] == 0.0) continue;
                contract_mode(y.segment(src, D), scratch2, Xop[j], dims, j);
                scratch += (0.5 * modes.coupling[j]) * scratch2;
            }
            hpsi.segment(dst, D) += scratch;
        }
        dy = Complex(0.0, -1.0) * hpsi;
    };

    const double dt = resolve_dt(opts, drive, modes, omega0);
    const long n_steps = integration_steps(t0, t1, dt);

    Trajectory traj;
    traj.drive = drive;
    traj.modes = modes;
    traj.omega0 = omega0;
    traj.options = opts;

    QuantumState sample_state = work;
    Vector y = work.amplitudes;
    rk4_drive(y, t0, t1, n_steps, rhs, [&](long s, double t, const Vector& v) {
        if (s % opts.sample_stride != 0 && s != n_steps) return;
        check_norm(v.norm(), t, opts.norm_abort);
        sample_state.amplitudes = v;
        traj.times.push_back(t);
        traj.states.push_back(sample_state);
    });
    return traj;
}

Trajectory propagate_two_mode_joint(const QuantumState& init, const DriveConfig& drive,
                                    const ModeSet& modes, double omega0, double t0, double t1,
                                    const IntegratorOptions& opts) {
    if (modes.size() != 2) throw ConfigError("propagate_two_mode_joint: exactly two modes required");
    return propagate_displaced(init, drive, modes, omega0, t0, t1, opts);
}

}  // namespace hhgq
