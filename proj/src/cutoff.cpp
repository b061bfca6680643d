#include "hhgq/cutoff.hpp"

#include <cmath>
#include <sstream>

#include "hhgq/errors.hpp"
#include "hhgq/observables.hpp"

namespace hhgq {

CutoffState CutoffState::standard_init() {
    CutoffState st;
    st.d.setZero();
    st.d(0) = 1.0;  // e00
    st.d(1) = 1.0;  // g00
    return st;
}

namespace {

enum DIdx { E00 = 0, G00 = 1, E01 = 2, G01 = 3, E10 = 4, G10 = 5, E11 = 6, G11 = 7 };

struct FloquetRhs {
    const FloquetSolution& sol;
    double c2t, s2t;

    void operator()(double t, Complex yp, Complex ym, Complex& dp, Complex& dm) const;
};

// same drive sums as floquet.cpp; kept local to the C co-integration
struct DriveSums {
    double sc, ss, si;
};

DriveSums drive_sums(const FloquetSolution& sol, double t) {
    const double wt = sol.omega * t;
    const double c1 = std::cos(wt), s1 = std::sin(wt);
    const int kmax = sol.n_bessel + 2;
    static thread_local std::vector<double> ck, sk;
    ck.assign(kmax + 1, 0.0);
    sk.assign(kmax + 1, 0.0);
    ck[0] = 1.0;
    if (kmax >= 1) {
        ck[1] = c1;
        sk[1] = s1;
    }
    for (int k = 2; k <= kmax; ++k) {
        ck[k] = 2.0 * c1 * ck[k - 1] - ck[k - 2];
        sk[k] = 2.0 * c1 * sk[k - 1] - sk[k - 2];
    }
    DriveSums out{0.0, 0.0, 0.0};
    for (int n = 1; 2 * n <= sol.n_bessel; ++n) out.sc += sol.besselJ[2 * n] * ck[2 * n];
    for (int n = 1; 2 * n + 1 <= sol.n_bessel; ++n) {
        const double j = 0.5 * sol.besselJ[2 * n + 1];
        out.ss += j * (sk[2 * n] + sk[2 * n + 2]);
        out.si += j * (ck[2 * n + 2] - ck[2 * n]);
    }
    return out;
}

void FloquetRhs::operator()(double t, Complex yp, Complex ym, Complex& dp, Complex& dm) const {
    const DriveSums s = drive_sums(sol, t);
    // W = w0 (Sc sz - Si sx + Ss sy) in dressed matrix elements
    const double diag = sol.omega0 * (s.sc * c2t - s.si * s2t);
    const double off = sol.omega0 * (s.sc * s2t + s.si * c2t);
    const Complex iu{0.0, 1.0};
    const Complex eplus = std::polar(1.0, sol.delta_eps() * t);
    dp = -iu * (diag * yp + eplus * (off + iu * sol.omega0 * s.ss) * ym);
    dm = -iu * (-diag * ym + std::conj(eplus) * (off - iu * sol.omega0 * s.ss) * yp);
}

}  // namespace

CutoffTrajectory propagate_cutoff(const FloquetSolution& sol, const CutoffModes& modes,
                                  double cycles, int steps_per_cycle, int sample_stride,
                                  CutoffState init, Complex c_plus0, Complex c_minus0,
                                  bool strong_field_neglect) {
    const double period = 2.0 * M_PI / sol.omega;
    const long n_steps = std::max(1L, long(std::llround(cycles * steps_per_cycle)));
    const double h = cycles * period / double(n_steps);
    const double de = sol.delta_eps();
    const DressedMatrixElements me = dressed_matrix_elements(sol.theta);
    const double diag_scale = strong_field_neglect ? 0.0 : 1.0;
    FloquetRhs crhs{sol, std::cos(2.0 * sol.theta), std::sin(2.0 * sol.theta)};

    using State = Eigen::Vector<Complex, 10>;  // C+, C-, d[8]
    State y;
    y(0) = c_plus0;
    y(1) = c_minus0;
    y.segment<8>(2) = init.d;

    const double dnorm0 = init.d.squaredNorm();

    auto rhs = [&](double t, const State& s, State& ds) {
        crhs(t, s(0), s(1), ds(0), ds(1));
        const Complex cp = s(0), cm = s(1);
        const double pp = std::norm(cp), mm = std::norm(cm);
        const Complex pm = std::conj(cp) * cm;  // C+* C-
        const Complex mp = std::conj(pm);
        const double wt = sol.omega * t;
        const double cwt = std::cos(wt), swt = std::sin(wt);
        const double ee = diag_scale * me.ee_x * cwt;
        const double gg = diag_scale * me.gg_x * cwt;
        const Complex eg = Complex(me.eg_x * cwt, -swt);  // <~e|sigma'_x|~g>
        const Complex ge = std::conj(eg);
        const Complex iu{0.0, 1.0};
        const double P1 = 0.5 * modes.coupling1, P2 = 0.5 * modes.coupling2;
        auto ph = [&](double w) { return std::polar(1.0, w * t); };

        Complex d[8];
        for (int k = 0; k < 8; ++k) d[k] = s(2 + k);
        Complex out[8];
        out[E00] = ee * P2 * pp * ph(-modes.omega2) * d[E01] +
                   eg * P2 * pm * ph(-(modes.omega2 - de)) * d[G01] +
                   ee * P1 * pp * ph(-modes.omega1) * d[E10] +
                   eg * P1 * pm * ph(-(modes.omega1 - de)) * d[G10];
        out[G00] = ge * P2 * mp * ph(-(modes.omega2 + de)) * d[E01] +
                   gg * P2 * mm * ph(-modes.omega2) * d[G01] +
                   ge * P1 * mp * ph(-(modes.omega1 + de)) * d[E10] +
                   gg * P1 * mm * ph(-modes.omega1) * d[G10];
        out[E01] = ee * P2 * pp * ph(modes.omega2) * d[E00] +
                   eg * P2 * pm * ph(modes.omega2 + de) * d[G00] +
                   ee * P1 * pp * ph(-modes.omega1) * d[E11] +
                   eg * P1 * pm * ph(-(modes.omega1 - de)) * d[G11];
        out[G01] = ge * P2 * mp * ph(modes.omega2 - de) * d[E00] +
                   gg * P2 * mm * ph(modes.omega2) * d[G00] +
                   ge * P1 * mp * ph(-(modes.omega1 + de)) * d[E11] +
                   gg * P1 * mm * ph(-modes.omega1) * d[G11];
        out[E10] = ee * P1 * pp * ph(modes.omega1) * d[E00] +
                   eg * P1 * pm * ph(modes.omega1 + de) * d[G00] +
                   ee * P2 * pp * ph(-modes.omega2) * d[E11] +
                   eg * P2 * pm * ph(-(modes.omega2 - de)) * d[G11];
        out[G10] = ge * P1 * mp * ph(modes.omega1 - de) * d[E00] +
                   gg * P1 * mm * ph(modes.omega1) * d[G00] +
                   ge * P2 * mp * ph(-(modes.omega2 + de)) * d[E11] +
                   gg * P2 * mm * ph(-modes.omega2) * d[G11];
        out[E11] = ee * P1 * pp * ph(modes.omega1) * d[E01] +
                   eg * P1 * pm * ph(modes.omega1 + de) * d[G01] +
                   ee * P2 * pp * ph(modes.omega2) * d[E10] +
                   eg * P2 * pm * ph(modes.omega2 + de) * d[G10];
        out[G11] = ge * P1 * mp * ph(modes.omega1 - de) * d[E01] +
                   gg * P1 * mm * ph(modes.omega1) * d[G01] +
                   ge * P2 * mp * ph(modes.omega2 - de) * d[E10] +
                   gg * P2 * mm * ph(modes.omega2) * d[G10];
        for (int k = 0; k < 8; ++k) ds(2 + k) = -iu * out[k];
    };

    CutoffTrajectory traj;
    traj.modes = modes;
    auto sample = [&](long s, double t) {
        if (s % sample_stride != 0 && s != n_steps) return;
        traj.times.push_back(t);
        traj.c_plus.push_back(y(0));
        traj.c_minus.push_back(y(1));
        traj.d.push_back(y.segment<8>(2));
    };

    State k1, k2, k3, k4, tmp;
    sample(0, 0.0);
    for (long s = 0; s < n_steps; ++s) {
        const double t = h * double(s);
        rhs(t, y, k1);
        tmp = y + 0.5 * h * k1;
        rhs(t + 0.5 * h, tmp, k2);
        tmp = y + 0.5 * h * k2;
        rhs(t + 0.5 * h, tmp, k3);
        tmp = y + h * k3;
        rhs(t + h, tmp, k4);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double dn = y.segment<8>(2).squaredNorm();
        if (std::abs(dn - dnorm0) > 1e-5 * std::max(1.0, dnorm0)) {
            std::ostringstream os;
            os << "propagate_cutoff: |d|^2 drift " << dn - dnorm0 << " at t = " << t + h;
            throw PhysicsGuardError(os.str());
        }
        sample(s + 1, t + h);
    }
    return traj;
}

std::pair<Complex, Complex> perturbative_first_order(const FloquetSolution& sol, double omega_k,
                                                     double coupling_k, double t) {
    if (coupling_k == 0.0) return {Complex{0.0, 0.0}, Complex{0.0, 0.0}};
    if (sol.c.n_samples() < 3) throw ConfigError("perturbative_first_order: propagate_C first");
    if (t > sol.c.times.back() + 1e-12)
        throw ConfigError("perturbative_first_order: t beyond the stored C series");
    const double de = sol.delta_eps();

    // composite Simpson over the stored (uniform) C grid up to t
    int last = 0;
    while (last + 1 < sol.c.n_samples() && sol.c.times[last + 1] <= t + 1e-12) ++last;
    if (last % 2 == 1) --last;  // even number of panels
    if (last < 2) throw ConfigError("perturbative_first_order: t too small for the C grid");

    const double h = sol.c.times[1] - sol.c.times[0];
    Complex acc_e{0.0, 0.0}, acc_g{0.0, 0.0};
    for (int k = 0; k <= last; ++k) {
        const double w = (k == 0 || k == last) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        const double tau = sol.c.times[k];
        const Complex pm = std::conj(sol.c.c_plus[k]) * sol.c.c_minus[k];
        const Complex mp = std::conj(pm);
        acc_e += w * std::polar(1.0, (omega_k - sol.omega + de) * tau) * pm;
        acc_g += w * std::polar(1.0, (omega_k + sol.omega - de) * tau) * mp;
    }
    const Complex pre{0.0, -0.5 * coupling_k};
    return {pre * acc_e * (h / 3.0), pre * acc_g * (h / 3.0)};
}

HarmonicParity classify_parity(const FloquetSolution& sol, double freq) {
    const long m = std::lround(freq / sol.omega);
    const double dist = std::abs(freq - double(m) * sol.omega);
    if (m < 1 || dist > 0.25 * sol.omega) {
        std::ostringstream os;
        os << "frequency " << freq << " is not close to a harmonic line; nearest lines are "
           << double(std::max(1L, m)) * sol.omega << " and "
           << double(std::max(1L, m) + 1) * sol.omega;
        throw ConfigError(os.str());
    }
    return (m % 2 == 0) ? HarmonicParity::Even : HarmonicParity::Odd;
}

double even_odd_cross_from_line(Complex z) {
    const double mag2 = std::norm(z);
    if (mag2 <= 0.0)
        throw UndefinedStatisticError("even_odd_cross_from_line: vanishing line amplitude");
    return 0.5 - 0.5 * std::real(z * z) / mag2;
}

double perturbative_cross_correlation(const FloquetSolution& sol, double omega_1, double omega_2) {
    const HarmonicParity p1 = classify_parity(sol, omega_1);
    const HarmonicParity p2 = classify_parity(sol, omega_2);
    if (p1 == HarmonicParity::Odd && p2 == HarmonicParity::Odd) return 1.0;
    if (p1 == HarmonicParity::Even && p2 == HarmonicParity::Even)
        throw ConfigError(
            "perturbative_cross_correlation: even-even pairs are outside the predictor");
    const double w_odd = (p1 == HarmonicParity::Odd) ? omega_1 : omega_2;
    return even_odd_cross_from_line(spectrum_value_mp(sol, w_odd - sol.xi_offset()));
}

double cutoff_cross_correlation(const CutoffTrajectory& traj, int sample) {
    if (sample < 0 || sample >= int(traj.times.size()))
        throw ConfigError("cutoff_cross_correlation: sample index out of range");
    const auto& d = traj.d[sample];
    const double pp = std::norm(traj.c_plus[sample]);
    const double mm = std::norm(traj.c_minus[sample]);
    const double norm = pp * (std::norm(d(E00)) + std::norm(d(E01)) + std::norm(d(E10)) +
                              std::norm(d(E11))) +
                        mm * (std::norm(d(G00)) + std::norm(d(G01)) + std::norm(d(G10)) +
                              std::norm(d(G11)));
    const double nn = pp * std::norm(d(E11)) + mm * std::norm(d(G11));
    const double n1 = pp * (std::norm(d(E10)) + std::norm(d(E11))) +
                      mm * (std::norm(d(G10)) + std::norm(d(G11)));
    const double n2 = pp * (std::norm(d(E01)) + std::norm(d(E11))) +
                      mm * (std::norm(d(G01)) + std::norm(d(G11)));
    if (n1 <= kEpsilonN * norm || n2 <= kEpsilonN * norm)
        throw UndefinedStatisticError("cutoff_cross_correlation: vanishing mode mean");
    return norm * nn / (n1 * n2);
}

}  // namespace hhgq
