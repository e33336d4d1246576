#include <cstddef>
#include <string>
#include <vector>

#include "homsim/experiment.hpp"

namespace homsim {

namespace {

struct Recipe {
    const char* name;
    const char* description;
    const char* json;
};

// Embedded copies of the recipes/ directory (kept identical by a unit test)
// so `recipes run` works from any working directory.
const Recipe kRecipes[] = {
    {"fig2_dip",
     "analytic time-resolved dip interferogram, 2e7 rad/s displacement",
     R"({
  "mode": "analytic-dip",
  "packet": { "sigma_s": 5e-7, "delta_rel_rad_s": 2e7 },
  "tau_grid": { "start_s": -1.25e-6, "stop_s": 1.25e-6, "count": 401 },
  "normalize": true,
  "output": { "basename": "fig2_dip" }
})"},
    {"fig2_peak",
     "analytic time-resolved peak interferogram, 2e7 rad/s displacement",
     R"({
  "mode": "analytic-peak",
  "packet": { "sigma_s": 5e-7, "delta_rel_rad_s": 2e7 },
  "tau_grid": { "start_s": -1.25e-6, "stop_s": 1.25e-6, "count": 401 },
  "normalize": true,
  "output": { "basename": "fig2_peak" }
})"},
    {"fig3_dip",
     "weak-coherent-state Monte Carlo dip scan with beat",
     R"({
  "mode": "wcs-dip",
  "packet": { "sigma_s": 5e-7, "delta_rel_rad_s": 2e7 },
  "source": { "mu": 0.05, "phase_randomized": true },
  "detectors": {
    "signal": { "efficiency": 0.15, "dark_prob": 1e-5, "gate_width_s": 4e-9 }
  },
  "tau_grid": { "start_s": -1.25e-6, "stop_s": 1.25e-6, "count": 81 },
  "trials": 1000000,
  "seed": 7,
  "output": { "basename": "fig3_dip" }
})"},
    {"fig3_peak",
     "weak-coherent-state Monte Carlo peak scan with beat",
     R"({
  "mode": "wcs-peak",
  "packet": { "sigma_s": 5e-7, "delta_rel_rad_s": 2e7 },
  "source": { "mu": 0.05, "phase_randomized": true },
  "detectors": {
    "signal": { "efficiency": 0.15, "dark_prob": 1e-5, "gate_width_s": 4e-9 }
  },
  "tau_grid": { "start_s": -1.25e-6, "stop_s": 1.25e-6, "count": 81 },
  "trials": 1000000,
  "seed": 8,
  "output": { "basename": "fig3_peak" }
})"},
    {"fig5_hbt",
     "heralded HBT g2(0) scan across the peak/dip/flat regions",
     R"({
  "mode": "hbt-scan",
  "packet": { "sigma_s": 5e-7, "delta_rel_rad_s": 2e7 },
  "source": { "mu": 0.05, "phase_randomized": true },
  "detectors": {
    "signal": { "efficiency": 0.15, "dark_prob": 1e-5, "gate_width_s": 4e-9 },
    "herald": { "efficiency": 0.15, "dark_prob": 1e-5, "gate_width_s": 4e-9 }
  },
  "taus_s": [-4.71238898038469e-7, -3.9269908169872414e-7,
             -3.141592653589793e-7, -2.356194490192345e-7,
             -1.5707963267948966e-7, -7.853981633974483e-8, 0.0,
             7.853981633974483e-8, 1.5707963267948966e-7,
             2.356194490192345e-7, 3.141592653589793e-7,
             3.9269908169872414e-7, 4.71238898038469e-7, 2.5e-6, 3e-6],
  "trials": 1000000,
  "seed": 42,
  "output": { "basename": "fig5_hbt" }
})"},
    {"fig3_dip_fit",
     "Gaussian-beat fit of the fig3_dip scan output",
     R"({
  "mode": "fit",
  "fit": { "input_csv": "fig3_dip.csv", "sign": "dip" },
  "output": { "basename": "fig3_dip_fit" }
})"},
};

}  // namespace

std::vector<std::string> recipe_names() {
    std::vector<std::string> names;
    for (const Recipe& r : kRecipes) names.push_back(r.name);
    return names;
}

const char* recipe_json(const std::string& name) {
    for (const Recipe& r : kRecipes) {
        if (name == r.name) return r.json;
    }
    throw ConfigError("unknown recipe '" + name + "'");
}

const char* recipe_description(const std::string& name) {
    for (const Recipe& r : kRecipes) {
        if (name == r.name) return r.description;
    }
    throw ConfigError("unknown recipe '" + name + "'");
}

}  // namespace homsim
