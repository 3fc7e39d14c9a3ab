#include "nslit/grating.hpp"

#include <cmath>

#include "nslit/constants.hpp"

namespace nslit {

double GratingGeometry::slit_center(int j) const {
    const double half = 0.5 * (aperture(j) + separation);
    return j == 1 ? -half : half;
}

double GratingGeometry::slit_sigma(int j) const { return aperture(j) / std::sqrt(12.0); }

void GratingGeometry::validate() const {
    if (!(aperture1 > 0.0)) throw ConfigError("grating.a1: must be > 0");
    if (!(aperture2 > 0.0)) throw ConfigError("grating.a2: must be > 0");
    if (!(separation > 0.0)) throw ConfigError("grating.d: must be > 0");
}

double sharp_transmission(const GratingGeometry& geom, double x) {
    for (int j = 1; j <= 2; ++j) {
        if (std::abs(x - geom.slit_center(j)) <= 0.5 * geom.aperture(j)) return 1.0;
    }
    return 0.0;
}

double gaussian_transmission(const GratingGeometry& geom, double x) {
    double sum = 0.0;
    for (int j = 1; j <= 2; ++j) {
        const double s = geom.slit_sigma(j);
        const double dx = x - geom.slit_center(j);
        sum += std::exp(-dx * dx / (2.0 * s * s)) / s;
    }
    return sum;
}

ModelOneResult model_one_outgoing(const ChirpedGaussian& incoming, const GratingGeometry& geom) {
    geom.validate();
    ModelOneResult result;
    for (int j = 1; j <= 2; ++j) {
        const ChirpedGaussian out =
            multiply_by_real_gaussian(incoming, geom.slit_center(j), geom.slit_sigma(j), 1.0);
        auto& slit = result.slits[j - 1];
        slit.alpha = out.alpha;
        slit.center = out.center;
        slit.momentum = constants::hbar * (out.wave_number - incoming.wave_number);
        slit.packet = out;
        result.outgoing.add(1.0, out);
    }
    return result;
}

PacketSuperposition model_two_outgoing(const ChirpedGaussian& incoming, const GratingGeometry& geom,
                                       const ModelTwoParams& params, double k) {
    geom.validate();
    const std::array<double, 2> momenta{params.momentum1, params.momentum2};
    PacketSuperposition out;
    double weight_sum = 0.0;
    for (int j = 1; j <= 2; ++j) {
        const double xj = geom.slit_center(j);
        const double c = std::abs(evaluate(incoming, xj));
        weight_sum += c;
        out.add(c, normalized_gaussian(xj, geom.slit_sigma(j), k + momenta[j - 1] / constants::hbar));
    }
    if (!(weight_sum > 0.0)) {
        throw NumericalError("degenerate transmission: incoming packet vanishes at both slits");
    }
    const double n2 = out.norm_squared();
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
        throw NumericalError("degenerate transmission: outgoing state has zero norm");
    }
    return out.scaled(1.0 / std::sqrt(n2));
}

}  // namespace nslit
