#include "nslit/gaussian.hpp"

#include <cmath>
#include <string>

#include "nslit/constants.hpp"

namespace nslit {
namespace {

void require_valid(const ChirpedGaussian& p) {
    if (!(p.alpha > 0.0)) {
        throw InvalidPacket("packet width parameter alpha must be > 0, got " +
                            std::to_string(p.alpha));
    }
}

}  // namespace

ChirpedGaussian normalized_gaussian(double center, double sigma, double wave_number) {
    if (!(sigma > 0.0)) throw InvalidPacket("packet sigma must be > 0");
    ChirpedGaussian p;
    p.center = center;
    p.alpha = 1.0 / (4.0 * sigma * sigma);
    p.beta = 0.0;
    p.wave_number = wave_number;
    p.amplitude = 1.0 / std::pow(2.0 * constants::pi * sigma * sigma, 0.25);
    return p;
}

cplx evaluate(const ChirpedGaussian& p, double x) {
    const double dx = x - p.center;
    return p.amplitude * std::exp(-p.quadratic() * (dx * dx) + cplx(0.0, p.wave_number * x));
}

double norm_squared(const ChirpedGaussian& p) {
    require_valid(p);
    return std::norm(p.amplitude) * std::sqrt(constants::pi / (2.0 * p.alpha));
}

cplx overlap(const ChirpedGaussian& a, const ChirpedGaussian& b) {
    require_valid(a);
    require_valid(b);
    const cplx qa = std::conj(a.quadratic());
    const cplx qb = b.quadratic();
    const cplx q = qa + qb;
    const cplx lin = 2.0 * qa * a.center + 2.0 * qb * b.center +
                     cplx(0.0, b.wave_number - a.wave_number);
    const cplx c = -qa * (a.center * a.center) - qb * (b.center * b.center);
    return std::conj(a.amplitude) * b.amplitude * std::sqrt(constants::pi / q) *
           std::exp(lin * lin / (4.0 * q) + c);
}

ChirpedGaussian multiply_by_real_gaussian(const ChirpedGaussian& p, double envelope_center,
                                          double envelope_sigma, double envelope_weight) {
    require_valid(p);
    if (!(envelope_sigma > 0.0)) throw InvalidPacket("envelope sigma must be > 0");

    // Complete the square in
    //   -(alpha - i beta)(x - xi)^2 + i kappa x - e (x - c)^2,  e = 1/(2 sigma^2),
    // keeping the new center real and moving the imaginary linear part into kappa.
    const double e = 0.5 / (envelope_sigma * envelope_sigma);
    const double c = envelope_center;

    ChirpedGaussian out;
    out.alpha = p.alpha + e;
    out.beta = p.beta;
    out.center = (p.alpha * p.center + e * c) / out.alpha;
    out.wave_number = p.wave_number + 2.0 * p.beta * (out.center - p.center);

    const cplx q_in = p.quadratic();
    const cplx q_out = out.quadratic();
    const cplx log_factor =
        -q_in * (p.center * p.center) - e * c * c + q_out * (out.center * out.center);
    out.amplitude = p.amplitude * (envelope_weight / envelope_sigma) * std::exp(log_factor);
    return out;
}

ChirpedGaussian propagate_free(const ChirpedGaussian& p, double time, double mass) {
    require_valid(p);
    if (time < 0.0) throw InvalidPacket("propagation time must be >= 0");
    if (!(mass > 0.0)) throw InvalidPacket("mass must be > 0");
    if (time == 0.0) return p;

    // exp(-q (x-xi)^2 + i kappa x) evolves into
    // (1 + 2 i q tau)^(-1/2) exp(-q/(1 + 2 i q tau) (x - xi - kappa tau)^2
    //                            + i kappa x - i kappa^2 tau / 2),  tau = hbar t / m.
    // Im(1 + 2 i q tau) = 2 alpha tau > 0, so the principal root stays continuous in t.
    const double tau = constants::hbar * time / mass;
    const cplx q = p.quadratic();
    const cplx denom = 1.0 + cplx(0.0, 2.0 * tau) * q;
    const cplx q_t = q / denom;

    ChirpedGaussian out;
    out.alpha = q_t.real();
    out.beta = -q_t.imag();
    out.center = p.center + p.wave_number * tau;
    out.wave_number = p.wave_number;
    out.amplitude = p.amplitude / std::sqrt(denom) *
                    std::exp(cplx(0.0, -0.5 * p.wave_number * p.wave_number * tau));
    return out;
}

cplx PacketSuperposition::evaluate(double x) const {
    cplx sum{0.0, 0.0};
    for (const auto& t : terms_) sum += t.weight * nslit::evaluate(t.packet, x);
    return sum;
}

void PacketSuperposition::accumulate_density(std::span<const double> xs, double scale,
                                             std::span<double> out) const {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] += scale * std::norm(evaluate(xs[i]));
}

double PacketSuperposition::norm_squared() const {
    double total = 0.0;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const auto& a = terms_[i];
        total += std::norm(a.weight) * nslit::norm_squared(a.packet);
        for (std::size_t j = i + 1; j < terms_.size(); ++j) {
            const auto& b = terms_[j];
            total += 2.0 * (std::conj(a.weight) * b.weight * overlap(a.packet, b.packet)).real();
        }
    }
    return total;
}

PacketSuperposition PacketSuperposition::propagated(double time, double mass) const {
    PacketSuperposition out;
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_) out.terms_.push_back({t.weight, propagate_free(t.packet, time, mass)});
    return out;
}

PacketSuperposition PacketSuperposition::scaled(cplx factor) const {
    PacketSuperposition out = *this;
    for (auto& t : out.terms_) t.weight *= factor;
    return out;
}

}  // namespace nslit
