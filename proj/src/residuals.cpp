#include "hhgq/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hhgq/errors.hpp"

namespace hhgq {

using ops::Axis;

namespace {

OperatorSpec zero_spec() { return OperatorSpec{}; }

std::string mode_tag(int n) { return "_" + std::to_string(n + 1); }

}  // namespace

std::pair<OperatorSpec, OperatorSpec> hamiltonian_spec(const ModeSet& modes, double omega0) {
    OperatorSpec h = ops::sigma_z() * Complex(0.5 * omega0, 0.0);
    for (int j = 0; j < modes.size(); ++j) {
        h = h + ops::n(j) * Complex(modes.omega[j], 0.0);
        if (modes.coupling[j] != 0.0)
            h = h + ops::sigma_x() * ops::x1(j) * Complex(0.5 * modes.coupling[j], 0.0);
    }
    return {h, ops::sigma_x() * Complex(0.5, 0.0)};
}

std::vector<ResidualEquation> build_operator_equations(const ModeSet& modes, double omega0) {
    const int M = modes.size();
    const Complex I{0.0, 1.0};
    auto U = ops::atom_axis(Axis::U);
    auto V = ops::atom_axis(Axis::V);
    auto W = ops::atom_axis(Axis::W);
    auto Upm = [](int n, int s) { return ops::axis_pm(Axis::U, n, s); };
    auto Vpm = [](int n, int s) { return ops::axis_pm(Axis::V, n, s); };
    auto Wpm = [](int n, int s) { return ops::axis_pm(Axis::W, n, s); };
    auto U2 = [](int n, int s) { return ops::axis_pp_mm(Axis::U, n, s); };
    auto V2 = [](int n, int s) { return ops::axis_pp_mm(Axis::V, n, s); };
    auto W2 = [](int n, int s) { return ops::axis_pp_mm(Axis::W, n, s); };
    auto UN = [](int n) { return ops::axis_n(Axis::U, n); };
    auto VN = [](int n) { return ops::axis_n(Axis::V, n); };
    auto WN = [](int n) { return ops::axis_n(Axis::W, n); };
    auto UNpm = [](int n, int s) { return ops::axis_npm(Axis::U, n, s); };
    auto VNpm = [](int n, int s) { return ops::axis_npm(Axis::V, n, s); };
    auto WNpm = [](int n, int s) { return ops::axis_npm(Axis::W, n, s); };
    // a^3 + adag^3 and i(a^3 - adag^3)
    auto cube_p = [](int n) {
        return ops::a(n) * ops::a(n) * ops::a(n) + ops::adag(n) * ops::adag(n) * ops::adag(n);
    };
    auto cube_m_i = [&](int n) {
        return (ops::a(n) * ops::a(n) * ops::a(n) - ops::adag(n) * ops::adag(n) * ops::adag(n)) * I;
    };
    // N adag^2 +- a^2 N (with i on the minus combination)
    auto nquad_p = [](int n) {
        return ops::n(n) * ops::adag(n) * ops::adag(n) + ops::a(n) * ops::a(n) * ops::n(n);
    };
    auto nquad_m_i = [&](int n) {
        return (ops::n(n) * ops::adag(n) * ops::adag(n) - ops::a(n) * ops::a(n) * ops::n(n)) * I;
    };

    // sum over the other modes of coupling_j * op * (a_j + adag_j)
    auto cross = [&](const OperatorSpec& op, int n) {
        OperatorSpec s = zero_spec();
        for (int j = 0; j < M; ++j) {
            if (j == n || modes.coupling[j] == 0.0) continue;
            s = s + op * ops::x1(j) * Complex(modes.coupling[j], 0.0);
        }
        return s;
    };

    std::vector<ResidualEquation> eqs;
    auto add = [&](std::string name, OperatorSpec lhs, OperatorSpec stat, OperatorSpec drv) {
        eqs.push_back({std::move(name), std::move(lhs), std::move(stat), std::move(drv)});
    };
    const Complex w0{omega0, 0.0};

    add("U", U, V * w0, zero_spec());
    {
        OperatorSpec sv = U * (-w0);
        OperatorSpec sw = zero_spec();
        for (int n = 0; n < M; ++n) {
            sv = sv + Wpm(n, +1) * Complex(modes.coupling[n], 0.0);
            sw = sw - Vpm(n, +1) * Complex(modes.coupling[n], 0.0);
        }
        add("V", V, sv, W);
        add("W", W, sw, V * Complex(-1.0, 0.0));
    }

    for (int n = 0; n < M; ++n) {
        const Complex on{modes.coupling[n], 0.0};
        const Complex wn{modes.omega[n], 0.0};
        const std::string t = mode_tag(n);

        add("N" + t, ops::n(n), Upm(n, -1) * (0.5 * on), zero_spec());

        add("U+" + t, Upm(n, +1), Vpm(n, +1) * w0 - Upm(n, -1) * wn, zero_spec());
        add("U-" + t, Upm(n, -1), Vpm(n, -1) * w0 + Upm(n, +1) * wn + ops::identity() * on,
            zero_spec());
        add("V+" + t, Vpm(n, +1),
            Upm(n, +1) * (-w0) - Vpm(n, -1) * wn + (W + W2(n, +1) + WN(n) * 2.0) * on +
                cross(Wpm(n, +1), n),
            Wpm(n, +1));
        add("W+" + t, Wpm(n, +1),
            Wpm(n, -1) * (-wn) - (V + V2(n, +1) + VN(n) * 2.0) * on - cross(Vpm(n, +1), n),
            Vpm(n, +1) * Complex(-1.0, 0.0));
        add("V-" + t, Vpm(n, -1),
            Upm(n, -1) * (-w0) + Vpm(n, +1) * wn + W2(n, -1) * on + cross(Wpm(n, -1), n),
            Wpm(n, -1));
        add("W-" + t, Wpm(n, -1), Wpm(n, +1) * wn - V2(n, -1) * on - cross(Vpm(n, -1), n),
            Vpm(n, -1) * Complex(-1.0, 0.0));

        add("x1" + t, ops::x1(n), ops::p1(n) * wn, zero_spec());
        add("p1" + t, ops::p1(n), U * (-on) - ops::x1(n) * wn, zero_spec());
        add("p2" + t, ops::p2(n), Upm(n, +1) * (-on) - ops::x2(n) * (2.0 * wn), zero_spec());
        add("x2" + t, ops::x2(n), Upm(n, -1) * (-on) + ops::p2(n) * (2.0 * wn), zero_spec());

        add("UN" + t, UN(n), VN(n) * w0 - ops::p1(n) * (0.5 * on), zero_spec());
        add("VN" + t, VN(n),
            UN(n) * (-w0) + WNpm(n, +1) * on - Wpm(n, +1) * (0.5 * on) + cross(WN(n), n), WN(n));
        add("WN" + t, WN(n),
            VNpm(n, +1) * (-on) + Vpm(n, +1) * (0.5 * on) - cross(VN(n), n),
            VN(n) * Complex(-1.0, 0.0));

        add("U++" + t, U2(n, +1), V2(n, +1) * w0 + ops::p1(n) * on - U2(n, -1) * (2.0 * wn),
            zero_spec());
        add("U--" + t, U2(n, -1), V2(n, -1) * w0 + ops::x1(n) * on + U2(n, +1) * (2.0 * wn),
            zero_spec());
        add("V++" + t, V2(n, +1),
            U2(n, +1) * (-w0) - V2(n, -1) * (2.0 * wn) + (WNpm(n, +1) + W * cube_p(n)) * on +
                cross(W2(n, +1), n),
            W2(n, +1));
        add("V--" + t, V2(n, -1),
            U2(n, -1) * (-w0) + V2(n, +1) * (2.0 * wn) + (WNpm(n, -1) + W * cube_m_i(n)) * on +
                cross(W2(n, -1), n),
            W2(n, -1));
        add("W++" + t, W2(n, +1),
            W2(n, -1) * (-2.0 * wn) - (VNpm(n, +1) + V * cube_p(n)) * on - cross(V2(n, +1), n),
            V2(n, +1) * Complex(-1.0, 0.0));
        add("W--" + t, W2(n, -1),
            W2(n, +1) * (2.0 * wn) - (VNpm(n, -1) + V * cube_m_i(n)) * on - cross(V2(n, -1), n),
            V2(n, -1) * Complex(-1.0, 0.0));

        add("UN+" + t, UNpm(n, +1), VNpm(n, +1) * w0 - UNpm(n, -1) * wn - ops::p2(n) * (0.5 * on),
            zero_spec());
        add("UN-" + t, UNpm(n, -1),
            VNpm(n, -1) * w0 + UNpm(n, +1) * wn + (ops::identity() + ops::n(n) * 2.0) * on -
                ops::x2(n) * (0.5 * on),
            zero_spec());
        add("VN+" + t, VNpm(n, +1),
            UNpm(n, +1) * (-w0) - VNpm(n, -1) * wn - W2(n, +1) * (0.5 * on) +
                (W + WN(n) * 2.0 + W * ops::n_sq(n) * 2.0 + W * nquad_p(n)) * on +
                cross(WNpm(n, +1), n),
            WNpm(n, +1));
        add("VN-" + t, VNpm(n, -1),
            UNpm(n, -1) * (-w0) + VNpm(n, +1) * wn - W2(n, -1) * (0.5 * on) -
                (W * nquad_m_i(n)) * on + cross(WNpm(n, -1), n),
            WNpm(n, -1));
        add("WN+" + t, WNpm(n, +1),
            WNpm(n, -1) * (-wn) + V2(n, +1) * (0.5 * on) -
                (V + VN(n) * 2.0 + V * ops::n_sq(n) * 2.0 + V * nquad_p(n)) * on -
                cross(VNpm(n, +1), n),
            VNpm(n, +1) * Complex(-1.0, 0.0));
        add("WN-" + t, WNpm(n, -1),
            WNpm(n, +1) * wn + V2(n, -1) * (0.5 * on) + (V * nquad_m_i(n)) * on -
                cross(VNpm(n, -1), n),
            VNpm(n, -1) * Complex(-1.0, 0.0));
    }
    return eqs;
}

double ResidualReport::max_residual() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.max_residual);
    return m;
}

namespace {

struct Evaluator {
    std::vector<ResidualEquation> eqs;
    DriveConfig drive;

    // expectation buffers at t - dt, t, t + dt
    std::vector<double> lhs_m, lhs_p, rhs_c;

    void eval_lhs(const QuantumState& st, std::vector<double>& out) const {
        const QuantumState plain = to_plain_energy(st);
        out.resize(eqs.size());
        for (size_t i = 0; i < eqs.size(); ++i)
            out[i] = std::real(expectation(plain, eqs[i].lhs));
    }
    void eval_rhs(const QuantumState& st, double t, std::vector<double>& out) const {
        const QuantumState plain = to_plain_energy(st);
        const double om = classical_rabi(t, drive);
        out.resize(eqs.size());
        for (size_t i = 0; i < eqs.size(); ++i) {
            double v = std::real(expectation(plain, eqs[i].rhs_static));
            if (!eqs[i].rhs_drive.terms.empty() && om != 0.0)
                v += om * std::real(expectation(plain, eqs[i].rhs_drive));
            out[i] = v;
        }
    }

    void accumulate(double dt, ResidualReport& rep) {
        for (size_t i = 0; i < eqs.size(); ++i) {
            const double deriv = (lhs_p[i] - lhs_m[i]) / (2.0 * dt);
            const double res = std::abs(deriv - rhs_c[i]);
            rep.entries[i].max_residual = std::max(rep.entries[i].max_residual, res);
            rep.entries[i].scale = std::max(rep.entries[i].scale, std::abs(deriv));
        }
    }
};

}  // namespace

ResidualReport appb_residuals(const Trajectory& traj) {
    if (traj.n_samples() < 3)
        throw ConfigError("appb_residuals: need at least three stored samples");
    const double dt = traj.times[1] - traj.times[0];
    for (int i = 2; i < traj.n_samples(); ++i)
        if (std::abs((traj.times[i] - traj.times[i - 1]) - dt) > 1e-9 * std::abs(dt))
            throw ConfigError("appb_residuals: stored samples are not uniformly spaced");

    Evaluator ev{build_operator_equations(traj.modes, traj.omega0), traj.drive, {}, {}, {}};
    ResidualReport rep;
    rep.dt = std::abs(dt);
    for (const auto& e : ev.eqs) rep.entries.push_back({e.name, 0.0, 0.0});

    for (int i = 1; i + 1 < traj.n_samples(); ++i) {
        ev.eval_lhs(traj.states[i - 1], ev.lhs_m);
        ev.eval_lhs(traj.states[i + 1], ev.lhs_p);
        ev.eval_rhs(traj.states[i], traj.times[i], ev.rhs_c);
        ev.accumulate(dt, rep);
    }
    return rep;
}

ResidualReport appb_residuals_run(const QuantumState& init, const DriveConfig& drive,
                                  const ModeSet& modes, double omega0, double t0, double t1,
                                  double dt, int n_eval) {
    if (n_eval < 1) throw ConfigError("appb_residuals_run: n_eval must be positive");
    const long n_steps = integration_steps(t0, t1, dt);
    if (n_steps < 3) throw ConfigError("appb_residuals_run: span too short for the step");

    Evaluator ev{build_operator_equations(modes, omega0), drive, {}, {}, {}};
    ResidualReport rep;
    rep.dt = dt;
    for (const auto& e : ev.eqs) rep.entries.push_back({e.name, 0.0, 0.0});

    // evaluation times on the step grid, away from the endpoints
    std::set<long> centers;
    for (int k = 0; k < n_eval; ++k) {
        long c = 1 + long((double(k) + 0.5) / n_eval * double(n_steps - 2));
        centers.insert(std::min(n_steps - 1, std::max(1L, c)));
    }

    IntegratorOptions opts;
    opts.dt = dt;
    auto needed = [&](long s) {
        if (centers.count(s) || centers.count(s - 1) || centers.count(s + 1)) return true;
        return false;
    };

    // Cache expectations by step index for the triplet assembly.
    std::vector<std::pair<long, std::vector<double>>> lhs_cache;
    std::vector<std::pair<long, std::vector<double>>> rhs_cache;
    propagate_displaced_cb(
        init, drive, modes, omega0, t0, t1, opts, 1,
        [&](long s, double t, const QuantumState& st) {
            if (!needed(s)) return;
            std::vector<double> lhs;
            ev.eval_lhs(st, lhs);
            lhs_cache.push_back({s, std::move(lhs)});
            if (centers.count(s)) {
                std::vector<double> rhs;
                ev.eval_rhs(st, t, rhs);
                rhs_cache.push_back({s, std::move(rhs)});
            }
        },
        nullptr);

    auto find_lhs = [&](long s) -> const std::vector<double>* {
        for (const auto& kv : lhs_cache)
            if (kv.first == s) return &kv.second;
        return nullptr;
    };
    const double h = (t1 - t0) / double(n_steps);
    for (const auto& [c, rhs] : rhs_cache) {
        const auto* m = find_lhs(c - 1);
        const auto* p = find_lhs(c + 1);
        if (!m || !p) continue;
        ev.lhs_m = *m;
        ev.lhs_p = *p;
        ev.rhs_c = rhs;
        ev.accumulate(h, rep);
    }
    return rep;
}

ConvergenceReport appb_convergence(const QuantumState& init, const DriveConfig& drive,
                                   const ModeSet& modes, double omega0, double t0, double t1,
                                   double dt, int n_eval) {
    ConvergenceReport cr;
    cr.at_dt = appb_residuals_run(init, drive, modes, omega0, t0, t1, dt, n_eval);
    cr.at_half_dt = appb_residuals_run(init, drive, modes, omega0, t0, t1, 0.5 * dt, n_eval);
    for (size_t i = 0; i < cr.at_dt.entries.size(); ++i) {
        const double a = cr.at_dt.entries[i].max_residual;
        const double b = cr.at_half_dt.entries[i].max_residual;
        cr.ratios.push_back(b > 0.0 ? a / b : 0.0);
    }
    return cr;
}

}  // namespace hhgq
