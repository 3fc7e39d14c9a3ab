#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nslit/experiment.hpp"

namespace nslit {

struct IntensityPattern {
    std::vector<double> positions;  // m
    std::vector<double> values;     // arbitrary units, >= 0
    nlohmann::json metadata = nlohmann::json::object();
};

/// Which grating model to use and its free parameters.
struct ModelSpec {
    GratingModel model = GratingModel::two;
    ModelTwoParams params;
};

std::string model_name(GratingModel model);
GratingModel parse_model_name(const std::string& name);

/// Outgoing state for one (k, lambda) node.
PacketSuperposition outgoing_state(const ExperimentConfig& config, const ModelSpec& model, double k,
                                   double wavelength);

/// |psi(x, T)|^2 on `positions` after free flight to the screen.
IntensityPattern intensity_single(const PacketSuperposition& outgoing, double wavelength,
                                  double screen_distance, double mass,
                                  std::span<const double> positions);

/// Screen intensity for one wavelength, averaged over the k distribution.
IntensityPattern intensity_lambda(const ExperimentConfig& config, const ModelSpec& model,
                                  double wavelength);

/// Same as intensity_lambda on explicit positions.
IntensityPattern intensity_lambda(const ExperimentConfig& config, const ModelSpec& model,
                                  double wavelength, std::span<const double> positions);

/// Boxcar average of width `resolution` around each grid point. Near the
/// grid ends the window is clipped to the grid. Throws ConfigError if the
/// grid spacing exceeds resolution / 4.
IntensityPattern detector_convolve(const IntensityPattern& pattern, double resolution);

/// Wavelength-averaged, detector-convolved model intensity on the
/// configured screen grid.
IntensityPattern intensity_total(const ExperimentConfig& config, const ModelSpec& model);

/// Same on explicit positions (must be strictly increasing).
IntensityPattern intensity_total(const ExperimentConfig& config, const ModelSpec& model,
                                 std::span<const double> positions);

/// Screen intensity for the sharp-edged (indicator function) slits at a
/// single (k, lambda), by direct Fresnel-integral quadrature over the slit
/// openings. Oracle use only.
IntensityPattern sharp_aperture_intensity(const ChirpedGaussian& incoming, const GratingGeometry& geom,
                                          double wavelength, double screen_distance, double mass,
                                          std::span<const double> positions,
                                          int samples_per_slit = 400);

struct Extremum {
    double position = 0.0;
    double value = 0.0;
    bool is_max = false;
};

/// Local extrema of the pattern strictly inside [lo, hi], each refined by a
/// parabola through the sample and its two neighbors.
std::vector<Extremum> find_extrema(const IntensityPattern& pattern, double lo, double hi);

/// Fringe contrast (I_max - I_min) / (I_max + I_min) at the extremum closest
/// to the window center and its neighbors of the opposite kind. Throws
/// NumericalError("no fringes") without an interior local minimum.
double visibility(const IntensityPattern& pattern, double lo, double hi);

}  // namespace nslit
