#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace nslit {

using cplx = std::complex<double>;

/// One complex Gaussian term
///
///     psi(x) = amplitude * exp[-(alpha - i beta) (x - center)^2 + i wave_number x]
///
/// in SI units. `alpha` (m^-2) sets the width, `beta` (m^-2) is the chirp
/// (beta > 0 means a diverging packet), `wave_number` (m^-1) the mean
/// transverse wave number. The packet is normalizable iff alpha > 0.
struct ChirpedGaussian {
    cplx amplitude{1.0, 0.0};
    double center = 0.0;
    double alpha = 1.0;
    double beta = 0.0;
    double wave_number = 0.0;

    [[nodiscard]] cplx quadratic() const { return {alpha, -beta}; }
    [[nodiscard]] bool valid() const { return alpha > 0.0; }
};

class InvalidPacket : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unit-norm packet of probability standard deviation `sigma` (|psi|^2 has
/// variance sigma^2), centered at `center`, carrying `wave_number`.
ChirpedGaussian normalized_gaussian(double center, double sigma, double wave_number = 0.0);

cplx evaluate(const ChirpedGaussian& packet, double x);

/// Closed-form L2 norm squared, |amplitude|^2 sqrt(pi / (2 alpha)).
double norm_squared(const ChirpedGaussian& packet);

/// <a|b> = integral conj(a(x)) b(x) dx, in closed form.
cplx overlap(const ChirpedGaussian& a, const ChirpedGaussian& b);

/// Exact product of `packet` with the real envelope
/// (weight / sigma) exp[-(x - center)^2 / (2 sigma^2)].
ChirpedGaussian multiply_by_real_gaussian(const ChirpedGaussian& packet, double envelope_center,
                                          double envelope_sigma, double envelope_weight = 1.0);

/// Exact free Schrödinger evolution of `packet` over `time` for a particle
/// of `mass`. The center moves at hbar*wave_number/mass; the norm is kept.
ChirpedGaussian propagate_free(const ChirpedGaussian& packet, double time, double mass);

/// Probability standard deviation of |psi|^2.
inline double probability_width(const ChirpedGaussian& p) { return 0.5 / std::sqrt(p.alpha); }

struct WeightedPacket {
    cplx weight{1.0, 0.0};
    ChirpedGaussian packet;
};

/// Ordered weighted sum of chirped Gaussians.
class PacketSuperposition {
public:
    PacketSuperposition() = default;
    explicit PacketSuperposition(std::vector<WeightedPacket> terms) : terms_(std::move(terms)) {}

    void add(cplx weight, const ChirpedGaussian& packet) { terms_.push_back({weight, packet}); }

    [[nodiscard]] std::span<const WeightedPacket> terms() const { return terms_; }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] bool empty() const { return terms_.empty(); }

    [[nodiscard]] cplx evaluate(double x) const;
    /// Adds |psi(x)|^2 * scale into `out` for each position.
    void accumulate_density(std::span<const double> xs, double scale, std::span<double> out) const;
    [[nodiscard]] double norm_squared() const;
    [[nodiscard]] PacketSuperposition propagated(double time, double mass) const;
    [[nodiscard]] PacketSuperposition scaled(cplx factor) const;

private:
    std::vector<WeightedPacket> terms_;
};

}  // namespace nslit
