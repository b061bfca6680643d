#include "hhgq/floquet.hpp"

#include <cmath>
#include <sstream>

#include "hhgq/bessel.hpp"
#include "hhgq/errors.hpp"

namespace hhgq {

namespace {

double xi_residual(double xi, double A, double omega, double omega0) {
    return bessel_j(1, A * xi / omega) * omega0 - 0.5 * A * (1.0 - xi);
}

// One bracketed root near the seed: scan, bisect, Newton polish.
double refine_root(double A, double omega, double omega0, double seed) {
    const double lo = 0.0, hi = 1.5, step = 1e-3;
    double best_a = -1.0, best_b = -1.0, best_dist = 1e300;
    double fa = xi_residual(lo, A, omega, omega0);
    for (double x = lo; x < hi; x += step) {
        const double xb = x + step;
        const double fb = xi_residual(xb, A, omega, omega0);
        if ((fa <= 0.0 && fb >= 0.0) || (fa >= 0.0 && fb <= 0.0)) {
            const double mid = 0.5 * (x + xb);
            const double dist = std::abs(mid - seed);
            if (dist < best_dist) {
                best_dist = dist;
                best_a = x;
                best_b = xb;
            }
        }
        fa = fb;
    }
    if (best_a < 0.0) {
        std::ostringstream os;
        os << "solve_xi: no sign change of J1(A xi/omega) omega0 - A(1-xi)/2 in [0, 1.5]"
           << " (A = " << A << ", omega = " << omega << ", omega0 = " << omega0 << ")";
        throw PhysicsGuardError(os.str());
    }
    double a = best_a, b = best_b;
    double va = xi_residual(a, A, omega, omega0);
    for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + b);
        const double vm = xi_residual(m, A, omega, omega0);
        if ((va <= 0.0) == (vm <= 0.0)) {
            a = m;
            va = vm;
        } else {
            b = m;
        }
    }
    double x = 0.5 * (a + b);
    // Newton polish: d/dxi J1(A xi/w) w0 = (A/w) w0 (J0 - J2)/2
    for (int it = 0; it < 4; ++it) {
        const double eta = A * x / omega;
        const auto J = bessel_j_array(2, eta);
        const double deriv = 0.5 * (A / omega) * omega0 * (J[0] - J[2]) + 0.5 * A;
        if (deriv == 0.0) break;
        x -= xi_residual(x, A, omega, omega0) / deriv;
    }
    if (std::abs(xi_residual(x, A, omega, omega0)) > 1e-12) {
        std::ostringstream os;
        os << "solve_xi: residual " << xi_residual(x, A, omega, omega0) << " did not converge";
        throw PhysicsGuardError(os.str());
    }
    return x;
}

}  // namespace

double solve_xi(double A, double omega, double omega0) {
    if (A <= 0.0 || omega <= 0.0 || omega0 <= 0.0)
        throw ConfigError("solve_xi: A, omega, omega0 must be positive");
    // weak-field branch, continued in A by homotopy
    double xi = omega / (omega + omega0);
    double a = std::min(A, 1e-3);
    while (true) {
        xi = refine_root(a, omega, omega0, xi);
        if (a >= A) break;
        a = std::min(A, a * 1.2);
    }
    return xi;
}

DressedMatrixElements dressed_matrix_elements(double theta) {
    const double s = std::sin(theta), c = std::cos(theta);
    DressedMatrixElements m;
    m.ee_x = 2.0 * s * c;
    m.gg_x = -2.0 * s * c;
    m.eg_x = s * s - c * c;
    m.ee_z = c * c - s * s;
    m.gg_z = s * s - c * c;
    m.eg_z = 2.0 * s * c;
    return m;
}

FloquetSolution solve_floquet(double A, double omega, double omega0) {
    FloquetSolution sol;
    sol.A = A;
    sol.omega = omega;
    sol.omega0 = omega0;
    sol.xi = solve_xi(A, omega, omega0);
    sol.eta = A * sol.xi / omega;
    sol.n_bessel = std::max(20, int(std::ceil(sol.eta)) + 15);
    sol.besselJ = bessel_j_array(sol.n_bessel + 2, sol.eta);
    sol.B = 4.0 * sol.besselJ[1] * omega0;
    const double detune = sol.besselJ[0] * omega0 - omega;
    const double r = std::sqrt(detune * detune + 0.25 * sol.B * sol.B);
    sol.eps_plus = 0.5 * r;
    sol.eps_minus = -sol.eps_plus;
    if (sol.B == 0.0)
        sol.theta = detune >= 0.0 ? 0.0 : 0.5 * M_PI;
    else
        sol.theta = std::atan((r - detune) / (0.5 * sol.B));
    return sol;
}

namespace {

// The three Bessel sums of the interaction-picture drive W(t). The
// Anger-Jacobi split of the transformed Hamiltonian puts the odd-J series
// on sigma_y (the same axis as its n = 0 term), so after the rotating
// frame W(t) = omega0 [Sc sigma_z - Si sigma_x + Ss sigma_y] with
//   Sc = sum J_{2n} cos(2n w t)
//   Ss = sum J_{2n+1}/2 [sin(2n w t) + sin((2n+2) w t)]
//   Si = sum J_{2n+1}/2 [cos((2n+2) w t) - cos(2n w t)]
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

}  // namespace

void propagate_C(FloquetSolution& sol, double cycles, int steps_per_cycle, int sample_stride,
                 Complex init_plus, Complex init_minus) {
    const double period = 2.0 * M_PI / sol.omega;
    const long n_steps = std::max(1L, long(std::llround(cycles * steps_per_cycle)));
    const double h = cycles * period / double(n_steps);
    const double de = sol.delta_eps();
    const double c2t = std::cos(2.0 * sol.theta), s2t = std::sin(2.0 * sol.theta);

    sol.c.times.clear();
    sol.c.c_plus.clear();
    sol.c.c_minus.clear();

    Complex cp = init_plus, cm = init_minus;
    const double norm0 = std::sqrt(std::norm(cp) + std::norm(cm));

    auto rhs = [&](double t, Complex yp, Complex ym, Complex& dp, Complex& dm) {
        const DriveSums s = drive_sums(sol, t);
        // dressed matrix elements of W = w0 (Sc sz - Si sx + Ss sy)
        const double diag = sol.omega0 * (s.sc * c2t - s.si * s2t);
        const double off = sol.omega0 * (s.sc * s2t + s.si * c2t);
        const Complex iu{0.0, 1.0};
        const Complex eplus = std::polar(1.0, de * t);   // e^{-i(eps_- - eps_+)t}
        const Complex eminus = std::conj(eplus);
        dp = -iu * (diag * yp + eplus * (off + iu * sol.omega0 * s.ss) * ym);
        dm = -iu * (-diag * ym + eminus * (off - iu * sol.omega0 * s.ss) * yp);
    };

    auto sample = [&](long s, double t) {
        if (s % sample_stride != 0 && s != n_steps) return;
        sol.c.times.push_back(t);
        sol.c.c_plus.push_back(cp);
        sol.c.c_minus.push_back(cm);
    };

    sample(0, 0.0);
    for (long s = 0; s < n_steps; ++s) {
        const double t = h * double(s);
        Complex k1p, k1m, k2p, k2m, k3p, k3m, k4p, k4m;
        rhs(t, cp, cm, k1p, k1m);
        rhs(t + 0.5 * h, cp + 0.5 * h * k1p, cm + 0.5 * h * k1m, k2p, k2m);
        rhs(t + 0.5 * h, cp + 0.5 * h * k2p, cm + 0.5 * h * k2m, k3p, k3m);
        rhs(t + h, cp + h * k3p, cm + h * k3m, k4p, k4m);
        cp += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        cm += (h / 6.0) * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
        const double nr = std::sqrt(std::norm(cp) + std::norm(cm));
        if (std::abs(nr - norm0) > 1e-6 * std::max(1.0, norm0)) {
            std::ostringstream os;
            os << "propagate_C: norm drift " << nr - norm0 << " at t = " << t + h;
            throw PhysicsGuardError(os.str());
        }
        sample(s + 1, t + h);
    }
}

std::vector<double> dipole_expectation(const FloquetSolution& sol) {
    // <sigma_x> = cos(wt) <sigma_x>_Phi - sin(wt) <sigma_y>_Phi in the
    // rotating dressed frame (the lab sigma_x maps onto sigma'_x).
    const double s = std::sin(sol.theta), c = std::cos(sol.theta);
    const double de = sol.delta_eps();
    std::vector<double> out;
    out.reserve(sol.c.n_samples());
    for (int i = 0; i < sol.c.n_samples(); ++i) {
        const double t = sol.c.times[i];
        const Complex cp = sol.c.c_plus[i], cm = sol.c.c_minus[i];
        const Complex cross = std::conj(cp) * cm * std::polar(1.0, de * t);
        const double sx = (std::norm(cp) - std::norm(cm)) * 2.0 * s * c +
                          2.0 * std::real(cross) * (s * s - c * c);
        const double sy = -2.0 * std::imag(cross);
        out.push_back(sx * std::cos(sol.omega * t) - sy * std::sin(sol.omega * t));
    }
    return out;
}

namespace {

Complex windowed_transform(const CSeries& c, const std::vector<Complex>& f, double x) {
    const int n = c.n_samples();
    if (n < 2) throw ConfigError("spectrum: C series too short");
    Complex acc{0.0, 0.0};
    double wsum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double w = 0.5 * (1.0 - std::cos(2.0 * M_PI * double(k) / double(n - 1)));
        acc += w * f[k] * std::polar(1.0, x * c.times[k]);
        wsum += w;
    }
    return acc / wsum;
}

std::vector<Complex> product_pm(const CSeries& c) {
    std::vector<Complex> f(c.n_samples());
    for (int k = 0; k < c.n_samples(); ++k) f[k] = std::conj(c.c_plus[k]) * c.c_minus[k];
    return f;
}

std::vector<Complex> product_mp(const CSeries& c) {
    std::vector<Complex> f(c.n_samples());
    for (int k = 0; k < c.n_samples(); ++k) f[k] = std::conj(c.c_minus[k]) * c.c_plus[k];
    return f;
}

}  // namespace

CpmSpectrum cpm_spectrum(const FloquetSolution& sol, double freq_max, int n_freq) {
    if (sol.c.n_samples() < 2) throw ConfigError("cpm_spectrum: propagate_C first");
    CpmSpectrum sp;
    const auto fpm = product_pm(sol.c);
    const auto fmp = product_mp(sol.c);
    for (int i = 0; i < n_freq; ++i) {
        const double x = -freq_max + 2.0 * freq_max * double(i) / double(n_freq - 1);
        sp.freq.push_back(x);
        sp.pm.push_back(windowed_transform(sol.c, fpm, x));
        sp.mp.push_back(windowed_transform(sol.c, fmp, x));
    }
    return sp;
}

Complex spectrum_value_pm(const FloquetSolution& sol, double x) {
    return windowed_transform(sol.c, product_pm(sol.c), x);
}

Complex spectrum_value_mp(const FloquetSolution& sol, double x) {
    return windowed_transform(sol.c, product_mp(sol.c), x);
}

}  // namespace hhgq
