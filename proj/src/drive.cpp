#include "hhgq/drive.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hhgq/errors.hpp"

namespace hhgq {

double DriveConfig::pulse_end() const {
    if (shape == DriveShape::Monochromatic) return std::numeric_limits<double>::infinity();
    return M_PI / omega_e;
}

double classical_rabi(double t, const DriveConfig& cfg) {
    if (cfg.shape == DriveShape::Monochromatic) return cfg.A * std::cos(cfg.omega_f * t);
    // the envelope vanishes at both edges, so the support bounds are exact
    if (t <= 0.0 || t >= cfg.pulse_end()) return 0.0;
    const double env = std::sin(cfg.omega_e * t);
    return cfg.A * env * env * std::sin(cfg.omega_f * t + cfg.phi);
}

namespace {
// int_0^t sin(k s + phi) ds
double sin_integral(double k, double phi, double t) {
    if (k == 0.0) return t * std::sin(phi);
    return (std::cos(phi) - std::cos(k * t + phi)) / k;
}
}  // namespace

double rabi_phase_integral(double t, const DriveConfig& cfg) {
    if (cfg.shape == DriveShape::Monochromatic) {
        if (cfg.omega_f == 0.0) return 0.5 * cfg.A * t;
        return 0.5 * cfg.A * std::sin(cfg.omega_f * t) / cfg.omega_f;
    }
    const double te = std::min(std::max(t, 0.0), cfg.pulse_end());
    // sin^2(we t) sin(wf t + phi) = sin(wf t+phi)/2
    //   - [sin((wf+2we)t+phi) + sin((wf-2we)t+phi)]/4
    const double I = 0.5 * sin_integral(cfg.omega_f, cfg.phi, te) -
                     0.25 * sin_integral(cfg.omega_f + 2.0 * cfg.omega_e, cfg.phi, te) -
                     0.25 * sin_integral(cfg.omega_f - 2.0 * cfg.omega_e, cfg.phi, te);
    return 0.5 * cfg.A * I;
}

double coupling_for(double omega, const CouplingRule& rule) {
    if (omega <= 0.0) {
        std::ostringstream os;
        os << "coupling_for: omega must be positive, got " << omega;
        throw ConfigError(os.str());
    }
    if (!rule.table.empty()) {
        for (const auto& [w, coupling] : rule.table)
            if (std::abs(w - omega) <= 1e-12 * std::max(1.0, std::abs(omega))) return coupling;
        std::ostringstream os;
        os << "coupling_for: omega " << omega << " not in coupling table";
        throw ConfigError(os.str());
    }
    return rule.c * std::sqrt(omega);
}

}  // namespace hhgq
