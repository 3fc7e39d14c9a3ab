#include "nslit/experiment.hpp"

#include <cmath>

namespace nslit {

void DetectorConfig::validate() const {
    if (!(distance > 0.0)) throw ConfigError("detector.distance: must be > 0");
    if (!(resolution >= 0.0)) throw ConfigError("detector.resolution: must be >= 0");
    if (positions.empty()) {
        if (grid_points < 3) throw ConfigError("detector.grid.points: must be >= 3");
        if (!(half_width >= 0.0)) throw ConfigError("detector.grid.half_width: must be >= 0");
    } else {
        for (std::size_t i = 1; i < positions.size(); ++i) {
            if (!(positions[i] > positions[i - 1])) {
                throw ConfigError("detector.grid.positions: must be strictly increasing");
            }
        }
    }
}

void ExperimentConfig::validate() const {
    beam.validate();
    grating.validate();
    detector.validate();
    if (environment) environment->validate();
    if (quadrature.k_order < 1) throw ConfigError("quadrature.k_order: must be >= 1");
    if (quadrature.lambda_order < 1) throw ConfigError("quadrature.lambda_order: must be >= 1");
    if (!(mass > 0.0)) throw ConfigError("mass must be > 0");
}

double central_fringe_spacing(const ExperimentConfig& config) {
    return mean_wavelength(config.beam.wavelength) * config.detector.distance /
           config.grating.center_distance();
}

std::vector<double> screen_grid(const ExperimentConfig& config) {
    const auto& det = config.detector;
    if (!det.positions.empty()) return det.positions;
    const double half = det.half_width > 0.0 ? det.half_width : 6.0 * central_fringe_spacing(config);
    const auto n = static_cast<std::size_t>(det.grid_points);
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = half * (2.0 * static_cast<double>(i) / static_cast<double>(n - 1) - 1.0);
    }
    // exact mirror symmetry
    for (std::size_t i = 0; i < n / 2; ++i) xs[n - 1 - i] = -xs[i];
    if (n % 2 == 1) xs[n / 2] = 0.0;
    return xs;
}

double screen_time(const ExperimentConfig& config, double wavelength) {
    return config.mass * config.detector.distance * wavelength / (2.0 * constants::pi * constants::hbar);
}

}  // namespace nslit
