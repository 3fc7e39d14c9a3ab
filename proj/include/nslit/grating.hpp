#pragma once

#include <array>

#include "nslit/errors.hpp"
#include "nslit/gaussian.hpp"

namespace nslit {

/// Double-slit geometry. `separation` is the distance d in
/// x_j = (-1)^j (a_j + d) / 2, i.e. the width of the bar between the slits.
struct GratingGeometry {
    double aperture1 = 22e-6;
    double aperture2 = 22e-6;
    double separation = 104e-6;

    /// Slit index j is 1 or 2.
    [[nodiscard]] double aperture(int j) const { return j == 1 ? aperture1 : aperture2; }
    [[nodiscard]] double slit_center(int j) const;
    [[nodiscard]] double slit_sigma(int j) const;  // a_j / sqrt(12)
    /// Distance between the two slit centers, x2 - x1.
    [[nodiscard]] double center_distance() const { return slit_center(2) - slit_center(1); }
    /// Outer extent of the double slit, a1 + d + a2.
    [[nodiscard]] double setup_size() const { return aperture1 + separation + aperture2; }
    void validate() const;
    bool operator==(const GratingGeometry&) const = default;
};

/// 1 inside either slit opening, 0 on the barrier.
double sharp_transmission(const GratingGeometry& geom, double x);

/// Gaussian transmission sum_j (1/sigma_j) exp[-(x - x_j)^2 / (2 sigma_j^2)].
double gaussian_transmission(const GratingGeometry& geom, double x);

struct SlitPacket {
    double alpha = 0.0;
    double center = 0.0;
    double momentum = 0.0;  // transverse momentum relative to the incoming wave number
    ChirpedGaussian packet;
};

struct ModelOneResult {
    PacketSuperposition outgoing;
    std::array<SlitPacket, 2> slits;
};

/// psi_out = F psi_in with the Gaussian transmission F, decomposed into one
/// packet per slit.
ModelOneResult model_one_outgoing(const ChirpedGaussian& incoming, const GratingGeometry& geom);

/// Transverse momenta acquired at the grating (kg m/s).
struct ModelTwoParams {
    double momentum1 = 0.0;
    double momentum2 = 0.0;

    bool operator==(const ModelTwoParams&) const = default;
};

/// Unit-norm psi_out = c1 phi1 + c2 phi2 with c_j = |psi_in(x_j)| and
/// phi_j the normalized Gaussian of std sigma_j at x_j with wave number
/// k + p_j / hbar. Throws NumericalError if both c_j vanish.
PacketSuperposition model_two_outgoing(const ChirpedGaussian& incoming, const GratingGeometry& geom,
                                       const ModelTwoParams& params, double k);

enum class GratingModel { one, two };

}  // namespace nslit
