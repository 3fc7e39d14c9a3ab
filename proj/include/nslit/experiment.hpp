#pragma once

#include <optional>
#include <vector>

#include "nslit/beam.hpp"
#include "nslit/constants.hpp"
#include "nslit/decoherence.hpp"
#include "nslit/grating.hpp"

namespace nslit {

struct DetectorConfig {
    double distance = 5.0;    // L, grating to screen
    double resolution = 0.0;  // x0, boxcar width
    int grid_points = 2001;
    /// Half-width of the screen grid; 0 selects 6 central fringe spacings.
    double half_width = 0.0;
    /// Explicit strictly increasing positions; overrides the generated grid.
    std::vector<double> positions;

    void validate() const;
    bool operator==(const DetectorConfig&) const = default;
};

struct QuadratureOrders {
    int k_order = 41;
    int lambda_order = 21;

    bool operator==(const QuadratureOrders&) const = default;
};

struct ExperimentConfig {
    BeamConfig beam;
    GratingGeometry grating;
    DetectorConfig detector;
    std::optional<EnvironmentConfig> environment;
    ModelTwoParams model_two;
    QuadratureOrders quadrature;
    double mass = constants::neutron_mass;

    void validate() const;
    bool operator==(const ExperimentConfig&) const = default;
};

/// Screen positions: explicit grid if given, else a symmetric uniform grid.
std::vector<double> screen_grid(const ExperimentConfig& config);

/// Far-field spacing lambda L / (x2 - x1) at the mean wavelength.
double central_fringe_spacing(const ExperimentConfig& config);

/// Time of flight from grating to screen, m L lambda / (2 pi hbar).
double screen_time(const ExperimentConfig& config, double wavelength);

}  // namespace nslit
