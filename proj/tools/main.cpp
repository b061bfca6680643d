// hhgq: photon statistics of a driven two-level emitter with quantized
// field modes. Subcommands map one-to-one onto the library runners; every
// run writes CSV series plus a metadata sidecar that pins the resolved
// configuration, so identical configs reproduce byte-identical data.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hhgq/errors.hpp"
#include "hhgq/runner.hpp"

namespace {

hhgq::Json load_config_file(const std::string& path) {
    if (path.empty()) return hhgq::Json::object();
    std::ifstream f(path);
    if (!f) throw hhgq::ConfigError("cannot open config file " + path);
    try {
        return hhgq::Json::parse(f);
    } catch (const std::exception& e) {
        throw hhgq::ConfigError(std::string("config parse error: ") + e.what());
    }
}

// --set drive.A=14 style dotted overrides; values parsed as JSON when
// possible, else taken as strings.
void apply_override(hhgq::Json& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw hhgq::ConfigError("override must look like key.path=value: " + assignment);
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    hhgq::Json* node = &cfg;
    size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) throw hhgq::ConfigError("bad override path: " + path);
        if (dot == std::string::npos) {
            try {
                (*node)[key] = hhgq::Json::parse(value);
            } catch (const std::exception&) {
                (*node)[key] = value;
            }
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int run(const std::string& sub, const std::string& config_path,
        const std::vector<std::string>& overrides, const std::string& out_dir) {
    hhgq::Json user = load_config_file(config_path);
    for (const auto& o : overrides) apply_override(user, o);
    std::vector<std::string> applied;
    hhgq::Json resolved = hhgq::resolve_config(sub, user, applied);
    hhgq::run_subcommand(sub, resolved, applied, out_dir);
    std::cout << sub << ": wrote outputs to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"photon statistics of high-harmonic emission from a driven two-level system"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "JSON config file")->capture_default_str();
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--set", overrides, "dotted config overrides, e.g. --set drive.A=14");

    auto* sim = app.add_subcommand("simulate", "time propagation runs");
    sim->require_subcommand(1);
    sim->add_subcommand("classical-drive", "classical pulse, quantized harmonic modes");
    sim->add_subcommand("two-mode", "joint two-mode run with cross-correlation");
    sim->add_subcommand("backaction", "quantized three-mode pulse on the coherent lattice");

    auto* floquet = app.add_subcommand("floquet", "dressed-state solution of the monochromatic drive");
    double A = -1.0, omega = -1.0, omega0_opt = -1.0, cycles = -1.0;
    floquet->add_option("--A", A, "drive amplitude");
    floquet->add_option("--omega", omega, "drive frequency");
    floquet->add_option("--omega0", omega0_opt, "transition frequency");
    floquet->add_option("--cycles", cycles, "number of drive cycles");

    auto* cross = app.add_subcommand("cross-correlation", "two-mode cutoff cross-correlation");
    double w1 = 0.0, w2 = 0.0;
    std::string cross_mode;
    cross->add_option("--omega1", w1, "first mode frequency");
    cross->add_option("--omega2", w2, "second mode frequency");
    cross->add_option("--mode", cross_mode, "full or perturbative");

    app.add_subcommand("scan-modes", "independent single-mode frequency sweep");
    auto* check = app.add_subcommand("check", "consistency checks");
    check->require_subcommand(1);
    check->add_subcommand("residuals", "operator-equation residual suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            const std::string sub = sim->get_subcommands().front()->get_name();
            return run(sub, config_path, overrides, out_dir);
        }
        if (floquet->parsed()) {
            if (A > 0.0) overrides.push_back("floquet.A=" + num(A));
            if (omega > 0.0) overrides.push_back("floquet.omega=" + num(omega));
            if (omega0_opt > 0.0) overrides.push_back("omega0=" + num(omega0_opt));
            if (cycles > 0.0) overrides.push_back("floquet.cycles=" + num(cycles));
            return run("floquet", config_path, overrides, out_dir);
        }
        if (cross->parsed()) {
            if (w1 > 0.0) overrides.push_back("cross.omega1=" + num(w1));
            if (w2 > 0.0) overrides.push_back("cross.omega2=" + num(w2));
            if (!cross_mode.empty()) overrides.push_back("cross.mode=" + cross_mode);
            return run("cross-correlation", config_path, overrides, out_dir);
        }
        if (app.get_subcommand("scan-modes")->parsed())
            return run("scan-modes", config_path, overrides, out_dir);
        if (check->parsed()) return run("residuals", config_path, overrides, out_dir);
    } catch (const hhgq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const hhgq::PhysicsGuardError& e) {
        std::cerr << "physics guard: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
