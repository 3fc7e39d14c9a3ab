#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nslit/errors.hpp"
#include "nslit/gaussian.hpp"

namespace nslit {

struct QuadratureNode {
    double node = 0.0;
    double weight = 0.0;

    bool operator==(const QuadratureNode&) const = default;
};

using QuadratureRule = std::vector<QuadratureNode>;

/// Gaussian wavelength distribution truncated at mean +- 5 std.
struct GaussianSpectrum {
    double mean = 2e-9;
    double std_dev = 0.0;

    bool operator==(const GaussianSpectrum&) const = default;
};

/// Tabulated wavelength distribution (wavelength in m, relative weight).
/// Weights are renormalized on construction so the trapezoid integral is 1.
class TabulatedSpectrum {
public:
    TabulatedSpectrum() = default;
    explicit TabulatedSpectrum(std::vector<QuadratureNode> rows);

    [[nodiscard]] const std::vector<QuadratureNode>& rows() const { return rows_; }
    /// Original file the table was loaded from, if any (kept for serialization).
    std::string source_path;

    bool operator==(const TabulatedSpectrum&) const = default;

private:
    std::vector<QuadratureNode> rows_;
};

using WavelengthSpec = std::variant<GaussianSpectrum, TabulatedSpectrum>;

/// Reads a two-column CSV (wavelength in nm, relative weight); a header
/// line is allowed.
TabulatedSpectrum load_spectrum_csv(const std::string& path);

double mean_wavelength(const WavelengthSpec& spec);

struct BeamConfig {
    double entrance_slit_width = 20e-6;  // A
    double source_distance = 5.0;        // L0
    double k_spread = 0.0;               // sigma_k, 1/m
    WavelengthSpec wavelength = GaussianSpectrum{};
    std::optional<double> forward_speed;  // consistency input only

    [[nodiscard]] double source_sigma() const;  // s0 = A / sqrt(12)
    void validate() const;
    bool operator==(const BeamConfig&) const = default;
};

/// Quantities describing the free flight from entrance slit to grating
/// for a given wavelength.
struct FlightGeometry {
    double source_sigma = 0.0;  // s0
    double gamma = 0.0;         // lambda L0 / (4 pi s0^2)
    double width = 0.0;         // s = s0 sqrt(1 + gamma^2)
    double flight_time = 0.0;   // L0 m lambda / (2 pi hbar)
};

FlightGeometry flight_geometry(const BeamConfig& config, double wavelength, double mass);

/// Packet center shift at the grating, L0 lambda k / (2 pi).
double drift_offset(const BeamConfig& config, double k, double wavelength);

/// Unit-norm chirped packet exp{-(1 - i gamma)(x - offset)^2 / (2 s^2) + i k x}.
ChirpedGaussian chirped_incoming(double width, double gamma, double offset, double k);

/// Incoming wave function just before the grating for wave number k and
/// wavelength lambda.
ChirpedGaussian incoming_packet(const BeamConfig& config, double k, double wavelength);

/// Source packet at the entrance slit: |psi|^2 has standard deviation s0.
ChirpedGaussian source_packet(const BeamConfig& config, double k);

/// Nodes and weights for averaging over k ~ N(0, k_spread^2); weights sum to 1.
QuadratureRule k_quadrature(double k_spread, int order);

/// Nodes and weights for the wavelength integral; weights sum to 1.
QuadratureRule lambda_quadrature(const WavelengthSpec& spec, int order);

/// Compares 2 pi hbar / (m v) with the mean wavelength. Returns a warning
/// message when they differ by more than 5 %.
std::optional<std::string> check_forward_speed(const BeamConfig& config, double mass);

}  // namespace nslit
