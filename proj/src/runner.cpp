#include "hhgq/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hhgq/cutoff.hpp"
#include "hhgq/errors.hpp"
#include "hhgq/io.hpp"
#include "hhgq/lattice.hpp"
#include "hhgq/observables.hpp"
#include "hhgq/residuals.hpp"

namespace hhgq {

namespace {

Json drive_defaults() {
    return Json{{"shape", "sin2_pulse"},
                {"A", 12.0},
                {"omega_e", 0.05},
                {"omega_f", 1.0},
                {"phi", M_PI / 2.0}};
}

Json integrator_defaults() {
    return Json{{"steps_per_cycle", 200}, {"sample_stride", 20}, {"dt", 0.0},
                {"t_start", 0.0},         {"t_end", 0.0}};
}

}  // namespace

Json default_config(const std::string& sub) {
    Json c;
    c["omega0"] = 1.0;
    if (sub == "classical-drive" || sub == "two-mode" || sub == "scan-modes" ||
        sub == "residuals") {
        c["drive"] = drive_defaults();
        c["coupling"] = Json{{"c", 0.005}, {"table", Json::array()}};
        c["integrator"] = integrator_defaults();
    }
    if (sub == "classical-drive" || sub == "residuals")
        c["modes"] = Json{{"omega", Json::array({10.91})}, {"n_max", 8}};
    if (sub == "two-mode")
        c["modes"] = Json{{"omega", Json::array({10.91, 11.892})}, {"n_max", 6}};
    if (sub == "scan-modes")
        c["scan"] = Json{{"omega_min", 9.0}, {"omega_max", 13.0}, {"count", 9}, {"n_max", 8}};
    if (sub == "residuals") c["residuals"] = Json{{"n_eval", 256}, {"dt_factor", 1e-3}};
    if (sub == "floquet" || sub == "cross-correlation") {
        c["floquet"] = Json{{"A", 12.0},
                            {"omega", 1.0},
                            {"cycles", 64.0},
                            {"steps_per_cycle", 2048},
                            {"sample_stride", 8},
                            {"init", "equal"}};
    }
    if (sub == "floquet")
        c["spectrum"] = Json{{"freq_max", 20.0}, {"points", 2001}};
    if (sub == "cross-correlation") {
        c["cross"] = Json{{"omega1", 6.0},
                          {"omega2", 7.0},
                          {"coupling_c", 0.005},
                          {"mode", "perturbative"},
                          {"eval_cycles", 48.0},
                          {"steps_per_cycle", 4096},
                          {"sweep", Json{{"enabled", false},
                                         {"omega_min", 3.0},
                                         {"omega_max", 11.0},
                                         {"count", 33}}}};
    }
    if (sub == "backaction") {
        c["backaction"] = Json{{"A", 12.0},
                               {"phi", M_PI / 2.0},
                               {"omega_f", 1.0},
                               {"omega_e", 0.05},
                               {"coupling", Json::array({0.4, 0.4, 0.4})},
                               {"points_per_side", 5},
                               {"spacing_factor", 0.9},
                               {"condition_cap", 1e8},
                               {"steps_per_cycle", 400},
                               {"sample_stride", 40},
                               {"t_end", 0.0},
                               {"antibunching_tau", 0.05}};
        c["spectrum"] = Json{{"freq_max", 25.0}, {"points", 1001}};
    }
    c["output"] = Json{{"dir", "out"}};
    return c;
}

namespace {

void merge_into(Json& base, const Json& user, const std::string& path,
                std::vector<std::string>& applied, std::vector<std::string>& unknown) {
    for (auto it = base.begin(); it != base.end(); ++it) {
        const std::string key = path.empty() ? it.key() : path + "." + it.key();
        if (user.contains(it.key())) {
            if (it->is_object() && user[it.key()].is_object()) {
                merge_into(*it, user[it.key()], key, applied, unknown);
            } else {
                *it = user[it.key()];
            }
        } else {
            applied.push_back(key);
        }
    }
    for (auto it = user.begin(); it != user.end(); ++it)
        if (!base.contains(it.key()))
            unknown.push_back(path.empty() ? it.key() : path + "." + it.key());
}

}  // namespace

Json resolve_config(const std::string& sub, const Json& user,
                    std::vector<std::string>& applied_defaults) {
    Json base = default_config(sub);
    std::vector<std::string> unknown;
    merge_into(base, user, "", applied_defaults, unknown);
    if (!unknown.empty()) {
        std::string msg = "unknown config keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw ConfigError(msg);
    }
    return base;
}

namespace {

DriveConfig parse_drive(const Json& j) {
    DriveConfig d;
    const std::string shape = j.at("shape").get<std::string>();
    if (shape == "sin2_pulse")
        d.shape = DriveShape::Sin2Pulse;
    else if (shape == "monochromatic")
        d.shape = DriveShape::Monochromatic;
    else
        throw ConfigError("drive.shape must be sin2_pulse or monochromatic");
    d.A = j.at("A").get<double>();
    d.omega_e = j.at("omega_e").get<double>();
    d.omega_f = j.at("omega_f").get<double>();
    d.phi = j.at("phi").get<double>();
    if (d.shape == DriveShape::Sin2Pulse && !(d.omega_e < d.omega_f))
        throw ConfigError("drive: omega_e must be smaller than omega_f for sin2_pulse");
    return d;
}

CouplingRule parse_rule(const Json& j) {
    CouplingRule r;
    r.c = j.at("c").get<double>();
    for (const auto& row : j.at("table")) {
        if (!row.is_array() || row.size() != 2)
            throw ConfigError("coupling.table entries must be [omega, Omega] pairs");
        r.table.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    return r;
}

ModeSet parse_modes(const Json& j, const CouplingRule& rule) {
    std::vector<double> omegas = j.at("omega").get<std::vector<double>>();
    if (omegas.empty()) throw ConfigError("modes.omega must not be empty");
    return ModeSet::from_rule(omegas, rule, j.at("n_max").get<int>());
}

IntegratorOptions parse_integrator(const Json& j) {
    IntegratorOptions o;
    o.steps_per_cycle = j.at("steps_per_cycle").get<int>();
    o.sample_stride = std::max(1, j.at("sample_stride").get<int>());
    o.dt = j.at("dt").get<double>();
    if (o.steps_per_cycle < 1) throw ConfigError("integrator.steps_per_cycle must be positive");
    return o;
}

double resolve_t_end(const Json& integ, const DriveConfig& drive) {
    double t_end = integ.at("t_end").get<double>();
    if (t_end <= 0.0) {
        if (drive.shape == DriveShape::Monochromatic)
            throw ConfigError("integrator.t_end is required for a monochromatic drive");
        t_end = drive.pulse_end();
    }
    return t_end;
}

void write_meta(const std::string& out_dir, const std::string& name, const std::string& sub,
                const Json& config, const std::vector<std::string>& applied, const Json& extra) {
    Json meta;
    meta["tool"] = "hhgq";
    meta["version"] = version_string();
    meta["subcommand"] = sub;
    meta["config"] = config;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  (unsigned long long)fnv1a64(config.dump()));
    meta["config_hash"] = hash;
    meta["defaults_applied"] = applied;
    meta["extra"] = extra;
    std::ofstream f(out_dir + "/" + name + ".meta.json");
    if (!f) throw ConfigError("cannot write metadata in " + out_dir);
    f << meta.dump(2) << "\n";
}

std::vector<std::optional<double>> mode_row(double t, double cycles, const ModeRecord& r) {
    std::vector<std::optional<double>> row;
    row.emplace_back(t);
    row.emplace_back(cycles);
    row.emplace_back(r.n_mean);
    row.emplace_back(r.q);
    if (r.slope)
        row.emplace_back(*r.slope);
    else
        row.emplace_back(std::nullopt);
    row.emplace_back(r.ellipse.lambda_plus);
    row.emplace_back(r.ellipse.lambda_minus);
    row.emplace_back(r.ellipse.phase);
    return row;
}

const std::vector<std::string> kModeColumns = {"t",  "cycles",      "N_mean",
                                               "Q",  "dg2_slope",   "lambda_plus",
                                               "lambda_minus", "phase"};

void run_classical_drive(const Json& c, const std::vector<std::string>& applied,
                         const std::string& out_dir) {
    const DriveConfig drive = parse_drive(c.at("drive"));
    const CouplingRule rule = parse_rule(c.at("coupling"));
    const ModeSet modes = parse_modes(c.at("modes"), rule);
    const IntegratorOptions opts = parse_integrator(c.at("integrator"));
    const double omega0 = c.at("omega0").get<double>();
    const double t0 = c.at("integrator").at("t_start").get<double>();
    const double t1 = resolve_t_end(c.at("integrator"), drive);

    QuantumState init =
        QuantumState::ground_vacuum(modes.plain_bases());
    Trajectory traj = propagate_displaced(init, drive, modes, omega0, t0, t1, opts);
    ObservableSeries series = evaluate_series(traj);

    long undefined = 0;
    for (int m = 0; m < modes.size(); ++m) {
        CsvWriter csv(out_dir + "/mode_" + std::to_string(m + 1) + ".csv", kModeColumns);
        for (size_t i = 0; i < series.times.size(); ++i) {
            const double t = series.times[i];
            csv.row(mode_row(t, t * drive.omega_f / (2.0 * M_PI), series.per_mode[m][i]));
        }
        undefined += csv.undefined_cells();
    }
    Json extra;
    extra["warnings"] = traj.warnings;
    extra["undefined_cells"] = undefined;
    extra["rate_max"] = rate_max(drive, modes, omega0);
    write_meta(out_dir, "classical_drive", "classical-drive", c, applied, extra);
}

void run_two_mode(const Json& c, const std::vector<std::string>& applied,
                  const std::string& out_dir) {
    const DriveConfig drive = parse_drive(c.at("drive"));
    const CouplingRule rule = parse_rule(c.at("coupling"));
    const ModeSet modes = parse_modes(c.at("modes"), rule);
    if (modes.size() != 2) throw ConfigError("two-mode: modes.omega must list exactly two modes");
    const IntegratorOptions opts = parse_integrator(c.at("integrator"));
    const double omega0 = c.at("omega0").get<double>();
    const double t0 = c.at("integrator").at("t_start").get<double>();
    const double t1 = resolve_t_end(c.at("integrator"), drive);

    QuantumState init =
        QuantumState::ground_vacuum(modes.plain_bases());
    Trajectory traj = propagate_two_mode_joint(init, drive, modes, omega0, t0, t1, opts);

    CsvWriter csv(out_dir + "/two_mode.csv",
                  {"t", "cycles", "N1_mean", "N2_mean", "Q1", "Q2", "g2_12"});
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const QuantumState plain = to_plain_energy(traj.states[i]);
        auto recs = evaluate_state(plain, traj.modes.coupling);
        std::optional<double> g12;
        try {
            g12 = cross_correlation(plain, 0, 1);
        } catch (const UndefinedStatisticError&) {
        }
        const double t = traj.times[i];
        csv.row({t, t * drive.omega_f / (2.0 * M_PI), recs[0].n_mean, recs[1].n_mean, recs[0].q,
                 recs[1].q, g12});
    }
    Json extra;
    extra["warnings"] = traj.warnings;
    extra["undefined_cells"] = csv.undefined_cells();
    write_meta(out_dir, "two_mode", "two-mode", c, applied, extra);
}

void run_scan_modes(const Json& c, const std::vector<std::string>& applied,
                    const std::string& out_dir) {
    const DriveConfig drive = parse_drive(c.at("drive"));
    const CouplingRule rule = parse_rule(c.at("coupling"));
    const IntegratorOptions opts = parse_integrator(c.at("integrator"));
    const double omega0 = c.at("omega0").get<double>();
    const double t0 = c.at("integrator").at("t_start").get<double>();
    const double t1 = resolve_t_end(c.at("integrator"), drive);
    const Json& sc = c.at("scan");
    const int count = sc.at("count").get<int>();
    if (count < 1) throw ConfigError("scan.count must be positive");
    const double w0 = sc.at("omega_min").get<double>(), w1 = sc.at("omega_max").get<double>();
    std::vector<double> omegas;
    for (int k = 0; k < count; ++k)
        omegas.push_back(count == 1 ? w0 : w0 + (w1 - w0) * double(k) / double(count - 1));

    SpectrogramTable table =
        scan_modes(omegas, drive, rule, omega0, sc.at("n_max").get<int>(), t0, t1, opts);

    std::vector<std::string> cols = {"omega"};
    cols.insert(cols.end(), kModeColumns.begin(), kModeColumns.end());
    CsvWriter csv(out_dir + "/scan_modes.csv", cols);
    for (size_t k = 0; k < omegas.size(); ++k) {
        const ObservableSeries& s = table.per_omega[k];
        for (size_t i = 0; i < s.times.size(); ++i) {
            auto row = mode_row(s.times[i], s.times[i] * drive.omega_f / (2.0 * M_PI),
                                s.per_mode[0][i]);
            row.insert(row.begin(), omegas[k]);
            csv.row(row);
        }
    }
    Json extra;
    extra["undefined_cells"] = csv.undefined_cells();
    write_meta(out_dir, "scan_modes", "scan-modes", c, applied, extra);
}

void run_floquet(const Json& c, const std::vector<std::string>& applied,
                 const std::string& out_dir) {
    const Json& f = c.at("floquet");
    const double A = f.at("A").get<double>();
    const double omega = f.at("omega").get<double>();
    const double omega0 = c.at("omega0").get<double>();
    FloquetSolution sol = solve_floquet(A, omega, omega0);

    Complex cp{1.0, 0.0}, cm{1.0, 0.0};
    const std::string init = f.at("init").get<std::string>();
    if (init == "ground") {
        cp = std::sin(sol.theta);
        cm = -std::cos(sol.theta);
    } else if (init != "equal") {
        throw ConfigError("floquet.init must be 'ground' or 'equal'");
    }
    propagate_C(sol, f.at("cycles").get<double>(), f.at("steps_per_cycle").get<int>(),
                f.at("sample_stride").get<int>(), cp, cm);

    CsvWriter csv(out_dir + "/floquet_c.csv",
                  {"t", "cycles", "re_c_plus", "im_c_plus", "re_c_minus", "im_c_minus", "norm"});
    for (int i = 0; i < sol.c.n_samples(); ++i) {
        const double t = sol.c.times[i];
        const Complex p = sol.c.c_plus[i], m = sol.c.c_minus[i];
        csv.row({t, t * omega / (2.0 * M_PI), p.real(), p.imag(), m.real(), m.imag(),
                 std::sqrt(std::norm(p) + std::norm(m))});
    }

    const Json& sp = c.at("spectrum");
    CpmSpectrum spec =
        cpm_spectrum(sol, sp.at("freq_max").get<double>(), sp.at("points").get<int>());
    CsvWriter scsv(out_dir + "/floquet_spectrum.csv",
                   {"freq", "re_pm", "im_pm", "re_mp", "im_mp"});
    for (size_t i = 0; i < spec.freq.size(); ++i)
        scsv.row({spec.freq[i], spec.pm[i].real(), spec.pm[i].imag(), spec.mp[i].real(),
                  spec.mp[i].imag()});

    Json extra;
    extra["xi"] = sol.xi;
    extra["eta"] = sol.eta;
    extra["B"] = sol.B;
    extra["theta"] = sol.theta;
    extra["eps_plus"] = sol.eps_plus;
    extra["eps_minus"] = sol.eps_minus;
    extra["xi_offset"] = sol.xi_offset();
    extra["n_bessel"] = sol.n_bessel;
    extra["window"] = "hann";
    write_meta(out_dir, "floquet", "floquet", c, applied, extra);
}

void run_cross_correlation(const Json& c, const std::vector<std::string>& applied,
                           const std::string& out_dir) {
    const Json& f = c.at("floquet");
    const Json& x = c.at("cross");
    const double omega0 = c.at("omega0").get<double>();
    FloquetSolution sol = solve_floquet(f.at("A").get<double>(), f.at("omega").get<double>(),
                                        omega0);
    propagate_C(sol, f.at("cycles").get<double>(), f.at("steps_per_cycle").get<int>(),
                f.at("sample_stride").get<int>());

    const std::string mode = x.at("mode").get<std::string>();
    Json extra;
    extra["xi_offset"] = sol.xi_offset();
    if (mode == "perturbative") {
        if (x.at("sweep").at("enabled").get<bool>()) {
            const Json& sw = x.at("sweep");
            CsvWriter csv(out_dir + "/cross_correlation_sweep.csv", {"omega_odd", "g2_approx"});
            const int count = sw.at("count").get<int>();
            for (int k = 0; k < count; ++k) {
                const double w = sw.at("omega_min").get<double>() +
                                 (sw.at("omega_max").get<double>() -
                                  sw.at("omega_min").get<double>()) *
                                     double(k) / double(std::max(1, count - 1));
                std::optional<double> g;
                try {
                    g = perturbative_cross_correlation(sol, x.at("omega1").get<double>(), w);
                } catch (const std::exception&) {
                }
                csv.row({w, g});
            }
        } else {
            CsvWriter csv(out_dir + "/cross_correlation.csv", {"omega1", "omega2", "g2_approx"});
            csv.row({x.at("omega1").get<double>(), x.at("omega2").get<double>(),
                     perturbative_cross_correlation(sol, x.at("omega1").get<double>(),
                                                    x.at("omega2").get<double>())});
        }
    } else if (mode == "full") {
        CutoffModes cm;
        cm.omega1 = x.at("omega1").get<double>();
        cm.omega2 = x.at("omega2").get<double>();
        const double cc = x.at("coupling_c").get<double>();
        cm.coupling1 = cc * std::sqrt(cm.omega1);
        cm.coupling2 = cc * std::sqrt(cm.omega2);
        CutoffTrajectory traj = propagate_cutoff(sol, cm, x.at("eval_cycles").get<double>(),
                                                 x.at("steps_per_cycle").get<int>());
        CsvWriter csv(out_dir + "/cross_correlation.csv", {"t", "g2_12"});
        for (size_t i = 0; i < traj.times.size(); ++i) {
            std::optional<double> g;
            try {
                g = cutoff_cross_correlation(traj, int(i));
            } catch (const UndefinedStatisticError&) {
            }
            csv.row({traj.times[i], g});
        }
    } else {
        throw ConfigError("cross.mode must be 'full' or 'perturbative'");
    }
    write_meta(out_dir, "cross_correlation", "cross-correlation", c, applied, extra);
}

void run_backaction(const Json& c, const std::vector<std::string>& applied,
                    const std::string& out_dir) {
    const Json& b = c.at("backaction");
    const double omega0 = c.at("omega0").get<double>();
    const double A = b.at("A").get<double>();
    const double phi = b.at("phi").get<double>();
    const double omega_f = b.at("omega_f").get<double>();
    const double omega_e = b.at("omega_e").get<double>();
    std::array<double, 3> couplings{};
    const Json& cj = b.at("coupling");
    if (cj.is_array()) {
        if (cj.size() != 3) throw ConfigError("backaction.coupling must have three entries");
        for (int j = 0; j < 3; ++j) couplings[j] = cj[j].get<double>();
    } else {
        couplings.fill(cj.get<double>());
    }
    LatticeSpec spec = LatticeSpec::pulse_modes(A, phi, omega_f, omega_e, couplings,
                                                b.at("points_per_side").get<int>(),
                                                b.at("spacing_factor").get<double>());
    spec.condition_cap = b.at("condition_cap").get<double>();

    LatticeState init = init_pulse_state(A, phi, spec);
    double t_end = b.at("t_end").get<double>();
    if (t_end <= 0.0) t_end = M_PI / omega_e;
    LatticeTrajectory traj = evolve_lattice(init, omega0, t_end, b.at("steps_per_cycle").get<int>(),
                                            b.at("sample_stride").get<int>());
    BackactionSeries s = backaction_observables(traj, b.at("antibunching_tau").get<double>());

    CsvWriter csv(out_dir + "/backaction.csv",
                  {"t", "sigma_x", "Q_resonant", "Q_side1", "Q_side2", "g3", "E_mean"});
    for (size_t i = 0; i < s.times.size(); ++i)
        csv.row({s.times[i], s.sigma_x[i], s.q[0][i], s.q[1][i], s.q[2][i], s.g3[i], s.e_mean[i]});

    // Hann-windowed transform of <sigma_x>(t)
    const Json& sp = c.at("spectrum");
    const double fmax = sp.at("freq_max").get<double>();
    const int pts = sp.at("points").get<int>();
    CsvWriter scsv(out_dir + "/sigma_x_spectrum.csv", {"omega", "amplitude"});
    const size_t n = s.times.size();
    for (int k = 0; k < pts; ++k) {
        const double w = fmax * double(k) / double(std::max(1, pts - 1));
        Complex acc{0.0, 0.0};
        double wsum = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double win = 0.5 * (1.0 - std::cos(2.0 * M_PI * double(i) / double(n - 1)));
            acc += win * s.sigma_x[i] * std::polar(1.0, w * s.times[i]);
            wsum += win;
        }
        scsv.row({w, std::abs(acc) / wsum});
    }

    Json extra;
    extra["condition_number"] = init.condition_number;
    extra["norm_initial"] = s.norm.empty() ? 0.0 : s.norm.front();
    extra["norm_final"] = s.norm.empty() ? 0.0 : s.norm.back();
    extra["window"] = "hann";
    write_meta(out_dir, "backaction", "backaction", c, applied, extra);
}

void run_residuals(const Json& c, const std::vector<std::string>& applied,
                   const std::string& out_dir) {
    const DriveConfig drive = parse_drive(c.at("drive"));
    const CouplingRule rule = parse_rule(c.at("coupling"));
    const ModeSet modes = parse_modes(c.at("modes"), rule);
    const double omega0 = c.at("omega0").get<double>();
    const double t0 = c.at("integrator").at("t_start").get<double>();
    const double t1 = resolve_t_end(c.at("integrator"), drive);
    const Json& r = c.at("residuals");
    const double dt = r.at("dt_factor").get<double>() / rate_max(drive, modes, omega0);

    QuantumState init =
        QuantumState::ground_vacuum(modes.plain_bases());
    ConvergenceReport rep = appb_convergence(init, drive, modes, omega0, t0, t1, dt,
                                             r.at("n_eval").get<int>());

    std::ofstream csv(out_dir + "/residuals.csv");
    if (!csv) throw ConfigError("cannot write residuals.csv in " + out_dir);
    csv << "equation,max_residual,max_residual_half_dt,ratio,differencing_limited\n";
    for (size_t i = 0; i < rep.at_dt.entries.size(); ++i) {
        const auto& e = rep.at_dt.entries[i];
        const double ratio = rep.ratios[i];
        csv << e.name << "," << CsvWriter::format(e.max_residual) << ","
            << CsvWriter::format(rep.at_half_dt.entries[i].max_residual) << ","
            << CsvWriter::format(ratio) << "," << ((ratio > 3.0 && ratio < 5.0) ? 1 : 0) << "\n";
    }
    Json extra;
    extra["dt"] = dt;
    extra["max_residual"] = rep.at_dt.max_residual();
    write_meta(out_dir, "residuals", "residuals", c, applied, extra);
}

}  // namespace

void run_subcommand(const std::string& sub, const Json& c,
                    const std::vector<std::string>& applied, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    if (sub == "classical-drive")
        run_classical_drive(c, applied, out_dir);
    else if (sub == "two-mode")
        run_two_mode(c, applied, out_dir);
    else if (sub == "scan-modes")
        run_scan_modes(c, applied, out_dir);
    else if (sub == "floquet")
        run_floquet(c, applied, out_dir);
    else if (sub == "cross-correlation")
        run_cross_correlation(c, applied, out_dir);
    else if (sub == "backaction")
        run_backaction(c, applied, out_dir);
    else if (sub == "residuals")
        run_residuals(c, applied, out_dir);
    else
        throw ConfigError("unknown subcommand: " + sub);
}

}  // namespace hhgq
