#pragma once

#include <cstddef>
#include <vector>

#include "nslit/experiment.hpp"
#include "nslit/gaussian.hpp"

namespace nslit {

/// Wave function sampled on a periodic uniform grid x_i = x_min + i dx,
/// dx = (x_max - x_min) / N, N a power of two.
struct GridState {
    double x_min = 0.0;
    double x_max = 0.0;
    std::vector<cplx> psi;
    double time = 0.0;
    double absorbed_norm = 0.0;  // removed by absorbing edges so far

    [[nodiscard]] std::size_t size() const { return psi.size(); }
    [[nodiscard]] double dx() const { return (x_max - x_min) / static_cast<double>(psi.size()); }
    [[nodiscard]] double position(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }
    [[nodiscard]] double norm_squared() const;
    [[nodiscard]] double centroid() const;
    [[nodiscard]] double spread() const;  // std of |psi|^2
};

GridState make_grid(double x_min, double x_max, std::size_t points);
GridState sample(const PacketSuperposition& state, double x_min, double x_max, std::size_t points);
GridState sample(const ChirpedGaussian& packet, double x_min, double x_max, std::size_t points);

/// Discrete L2 distance to a closed-form state on the same grid.
double l2_distance(const GridState& grid, const PacketSuperposition& exact);

struct EvolveOptions {
    /// Fraction of the domain at each end covered by the cosine absorber.
    double absorber_fraction = 0.05;
    /// Max |psi| inside the absorber relative to the peak before the run is
    /// declared contaminated by the boundary.
    double edge_tolerance = 1e-10;
};

/// Spectral free evolution, exp(-i hbar k^2 dt / (2 m)) per step. Throws
/// NumericalError on boundary contamination.
GridState evolve_free(GridState state, double time, double mass, int steps,
                      const EvolveOptions& options = {});

/// Instantaneous transmission mask emulating an impenetrable barrier with
/// two openings.
struct BarrierSpec {
    GratingGeometry geometry;
};

/// Applies the slit mask. Throws NumericalError if less than 1e-12 of the
/// norm survives.
GridState pass_grating(GridState state, const BarrierSpec& barrier);

struct LobeMomenta {
    double momentum1 = 0.0;  // lobe on x < 0
    double momentum2 = 0.0;  // lobe on x > 0
};

/// Mean momentum of each half-line lobe from its discrete spectrum. Throws
/// NumericalError if the amplitude over the bar exceeds 1 % of the peak.
LobeMomenta lobe_momenta(const GridState& state, const GratingGeometry& geom);

struct GratingSolveOptions {
    std::size_t points = std::size_t{1} << 14;
    double domain_factor = 16.0;  // domain width / setup size
    /// Evolve the source packet numerically to the grating instead of
    /// sampling the closed-form incoming packet.
    bool from_source = false;
};

struct GratingSolveResult {
    double wavelength = 0.0;
    LobeMomenta momenta;
    double absorbed_fraction = 0.0;  // norm removed by the barrier
};

GratingSolveResult solve_grating(const ExperimentConfig& config, double wavelength,
                                 const GratingSolveOptions& options = {});

}  // namespace nslit
