#include "hhgq/observables.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "hhgq/errors.hpp"
#include "hhgq/operators.hpp"

namespace hhgq {

namespace {

double real_expect(const QuantumState& st, const OperatorSpec& op) {
    return std::real(expectation(st, op));
}

void require_mode(const QuantumState& st, int mode) {
    if (mode < 0 || mode >= st.n_modes()) throw ConfigError("observable: mode index out of range");
}

}  // namespace

double mandel_q(const QuantumState& state, int mode) {
    require_mode(state, mode);
    const QuantumState plain = to_plain_energy(state);
    const double n = real_expect(plain, ops::n(mode));
    if (n <= kEpsilonN) return 0.0;
    const double n2 = real_expect(plain, ops::n_sq(mode));
    return (n2 - n - n * n) / n;
}

double g2_equal_time(const QuantumState& state, int mode) {
    require_mode(state, mode);
    const QuantumState plain = to_plain_energy(state);
    const double n = real_expect(plain, ops::n(mode));
    if (n <= kEpsilonN) throw UndefinedStatisticError("g2: mean photon number below epsilon");
    const double n2 = real_expect(plain, ops::n_sq(mode));
    return (n2 - n) / (n * n);
}

double antibunching_slope(const QuantumState& state, int mode, double coupling) {
    require_mode(state, mode);
    if (coupling == 0.0) return 0.0;
    const QuantumState plain = to_plain_energy(state);
    const double n = real_expect(plain, ops::n(mode));
    if (n <= kEpsilonN) throw UndefinedStatisticError("antibunching slope: mean below epsilon");
    const double n2 = real_expect(plain, ops::n_sq(mode));
    const double unm = real_expect(plain, ops::axis_npm(ops::Axis::U, mode, -1));
    const double um = real_expect(plain, ops::axis_pm(ops::Axis::U, mode, -1));
    return 0.5 * coupling * (unm * n - n2 * um) / (n * n * n);
}

NoiseEllipse noise_ellipse(const QuantumState& state, int mode) {
    require_mode(state, mode);
    const QuantumState plain = to_plain_energy(state);
    const double x = real_expect(plain, ops::quad_x(mode));
    const double y = real_expect(plain, ops::quad_y(mode));
    const double n = real_expect(plain, ops::n(mode));
    const Complex a2 = expectation(plain, ops::a(mode) * ops::a(mode));
    const Complex a = expectation(plain, ops::a(mode));

    // Covariance matrix of X, Y from <a>, <a^2>, <N>:
    //   <X^2> = 1/4 (<a^2> + <a^2>* + 2<N> + 1), etc.
    const double xx = 0.25 * (2.0 * std::real(a2) + 2.0 * n + 1.0) - x * x;
    const double yy = 0.25 * (-2.0 * std::real(a2) + 2.0 * n + 1.0) - y * y;
    const double xy = 0.5 * std::imag(a2) - x * y;

    NoiseEllipse el;
    const double tr = xx + yy;
    const double diff = xx - yy;
    const double s = std::sqrt(diff * diff + 4.0 * xy * xy);
    el.lambda_plus = 0.5 * (tr + s);
    el.lambda_minus = 0.5 * (tr - s);
    if (s < 1e-12) {
        el.u_plus = {1.0, 0.0};
        el.u_minus = {0.0, 1.0};
    } else {
        // eigenvector for lambda_plus of [[xx, xy], [xy, yy]]
        Eigen::Vector2d v;
        if (std::abs(xy) > 1e-300) {
            v = {el.lambda_plus - yy, xy};
        } else {
            v = (xx >= yy) ? Eigen::Vector2d{1.0, 0.0} : Eigen::Vector2d{0.0, 1.0};
        }
        v.normalize();
        el.u_plus = v;
        el.u_minus = {-v(1), v(0)};
    }
    // phase, with the arctan half-angle branch convention
    if (x > 0.0 || y != 0.0) {
        const double r = std::sqrt(x * x + y * y);
        el.phase = (r == 0.0) ? 0.0 : 2.0 * std::atan(y / (x + r));
    } else if (x < 0.0) {
        el.phase = M_PI;
    } else {
        el.phase = 0.0;
    }
    return el;
}

namespace {

double mean_pair(const QuantumState& plain, int i, int j, double& ni, double& nj) {
    ni = real_expect(plain, ops::n(i));
    nj = real_expect(plain, ops::n(j));
    return real_expect(plain, ops::n(i) * ops::n(j));
}

}  // namespace

double cross_correlation(const QuantumState& state, int mode_i, int mode_j) {
    require_mode(state, mode_i);
    require_mode(state, mode_j);
    if (mode_i == mode_j) throw ConfigError("cross_correlation: needs two distinct modes");
    const QuantumState plain = to_plain_energy(state);
    double ni, nj;
    const double nn = mean_pair(plain, std::min(mode_i, mode_j), std::max(mode_i, mode_j), ni, nj);
    if (ni <= kEpsilonN || nj <= kEpsilonN)
        throw UndefinedStatisticError("cross_correlation: mean photon number below epsilon");
    return nn / (ni * nj);
}

double three_mode_g3(const QuantumState& state, int i, int j, int k) {
    require_mode(state, i);
    require_mode(state, j);
    require_mode(state, k);
    if (i == j || j == k || i == k) throw ConfigError("three_mode_g3: modes must be distinct");
    const QuantumState plain = to_plain_energy(state);
    const double ni = real_expect(plain, ops::n(i));
    const double nj = real_expect(plain, ops::n(j));
    const double nk = real_expect(plain, ops::n(k));
    if (ni <= kEpsilonN || nj <= kEpsilonN || nk <= kEpsilonN)
        throw UndefinedStatisticError("three_mode_g3: mean photon number below epsilon");
    const double nnn = real_expect(plain, ops::n(i) * ops::n(j) * ops::n(k));
    return nnn / (ni * nj * nk);
}

std::vector<ModeRecord> evaluate_state(const QuantumState& state,
                                       const std::vector<double>& couplings) {
    const QuantumState plain = to_plain_energy(state);
    std::vector<ModeRecord> out;
    for (int m = 0; m < plain.n_modes(); ++m) {
        ModeRecord rec;
        const double n = real_expect(plain, ops::n(m));
        rec.n_mean = n;
        rec.ellipse = noise_ellipse(plain, m);
        if (n > kEpsilonN) {
            const double n2 = real_expect(plain, ops::n_sq(m));
            rec.g2 = (n2 - n) / (n * n);
            rec.q = n * (*rec.g2 - 1.0);
            const double coupling_m = (m < int(couplings.size())) ? couplings[m] : 0.0;
            if (coupling_m != 0.0) {
                const double unm = real_expect(plain, ops::axis_npm(ops::Axis::U, m, -1));
                const double um = real_expect(plain, ops::axis_pm(ops::Axis::U, m, -1));
                rec.slope = 0.5 * coupling_m * (unm * n - n2 * um) / (n * n * n);
            } else {
                rec.slope = 0.0;
            }
        }
        out.push_back(rec);
    }
    return out;
}

ObservableSeries evaluate_series(const Trajectory& traj) {
    ObservableSeries s;
    s.times = traj.times;
    const int M = traj.modes.size();
    s.per_mode.resize(M);
    for (const auto& st : traj.states) {
        auto recs = evaluate_state(st, traj.modes.coupling);
        for (int m = 0; m < M; ++m) {
            if (!recs[m].g2) s.undefined_count += 1;
            s.per_mode[m].push_back(recs[m]);
        }
    }
    return s;
}

SpectrogramTable scan_modes(const std::vector<double>& omegas, const DriveConfig& drive,
                            const CouplingRule& rule, double omega0, int n_max, double t0,
                            double t1, const IntegratorOptions& opts, int workers) {
    if (workers <= 0) {
        if (const char* env = std::getenv("HHGQ_WORKERS")) workers = std::atoi(env);
        if (workers <= 0) workers = int(std::thread::hardware_concurrency());
        if (workers <= 0) workers = 1;
    }
    SpectrogramTable table;
    table.omegas = omegas;
    table.per_omega.resize(omegas.size());

    std::atomic<size_t> next{0};
    std::vector<std::string> errors(omegas.size());
    auto work = [&]() {
        while (true) {
            const size_t k = next.fetch_add(1);
            if (k >= omegas.size()) break;
            try {
                ModeSet one = ModeSet::from_rule({omegas[k]}, rule, n_max);
                QuantumState init = QuantumState::ground_vacuum(one.plain_bases());
                Trajectory traj = propagate_displaced(init, drive, one, omega0, t0, t1, opts);
                table.per_omega[k] = evaluate_series(traj);
            } catch (const std::exception& e) {
                errors[k] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min<int>(workers, int(omegas.size())); ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    for (size_t k = 0; k < omegas.size(); ++k)
        if (!errors[k].empty())
            throw PhysicsGuardError("scan_modes at omega = " + std::to_string(omegas[k]) + ": " +
                                    errors[k]);
    return table;
}

}  // namespace hhgq
