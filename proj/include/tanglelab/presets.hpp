#pragma once

// Pinned parameter presets for the scan and verification commands. Each
// preset names a full system-parameter point; the reduced-map constants are
// derived through the standard pipeline at run time. mu is taken
// exponentially small where the annulus theorems require b << 1 (the
// contraction constant scales like mu^{lambda/beta}).

#include <stdexcept>
#include <string>
#include <vector>

#include "tanglelab/pipeline.hpp"
#include "tanglelab/regimes.hpp"
#include "tanglelab/retmap.hpp"

namespace tanglelab {

struct ScanPreset {
    std::string name;
    double lambda, epsilon, omega, mu;
    // rho = rho_factor * c(omega) when relative; otherwise absolute.
    double rho_factor;
    bool rho_relative;
    std::string notes;
};

inline const std::vector<ScanPreset>& scan_presets() {
    static const std::vector<ScanPreset> presets = {
        {"tangle1", 0.05, 0.003, 5.0, 1e-80, 0.5, true,
         "below S*: partial returns; folding horseshoe with sink windows "
         "(small eps keeps the shear k well under the escape amplitude)"},
        {"dcband1", 0.05, 0.05, 120.0, 1e-80, 2.98, true,
         "inside the dc band at large omega; rank-one chaos diagnostics"},
        {"curve1", 0.05, 0.05, -0.5, 1e-80, 2.0, false,
         "invariant-curve regime: rho = 2 rho0, omega = Q/2 (omega < 0 here "
         "means |omega_factor| * Q resolved at run time; rho_factor scales rho0)"},
    };
    return presets;
}

struct ResolvedPreset {
    ScanPreset def;
    SystemParams params;
    MelnikovConstants constants;
    ReducedMap map;
};

inline ResolvedPreset resolve_preset(const std::string& name, const ConstantsPipeline& pipeline) {
    for (const auto& p : scan_presets()) {
        if (p.name != name) continue;
        if (p.lambda != pipeline.lambda() || p.epsilon != pipeline.epsilon())
            throw std::domain_error("resolve_preset: pipeline built for different parameters");
        double omega = p.omega;
        double rho;
        if (p.rho_relative) {
            rho = p.rho_factor * pipeline.c_of_omega(omega);
        } else {
            const double rho0 = rho0_nominal();
            rho = p.rho_factor * rho0;
            const double q = Q_surface(pipeline, rho, p.mu, rho0);
            omega = -p.omega * q;  // omega field holds the negative Q-factor
        }
        ResolvedPreset out;
        out.def = p;
        out.constants = pipeline.constants(omega, rho, p.mu);
        out.params = pipeline.params(omega, rho, p.mu);
        out.map = ReducedMap::from_constants(out.constants);
        return out;
    }
    throw std::domain_error("resolve_preset: unknown preset " + name);
}

}  // namespace tanglelab
