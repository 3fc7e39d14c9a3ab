#include "nslit/pattern.hpp"

#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "nslit/parallel.hpp"

namespace nslit {
namespace {

void clamp_nonnegative(std::vector<double>& values) {
    for (double& v : values) v = std::max(v, 0.0);
}

void require_increasing(std::span<const double> xs) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) throw ConfigError("positions must be strictly increasing");
    }
}

nlohmann::json model_metadata(const ExperimentConfig& config, const ModelSpec& model) {
    nlohmann::json meta;
    meta["model"] = model_name(model.model);
    meta["k_spread_per_m"] = config.beam.k_spread;
    meta["k_order"] = config.quadrature.k_order;
    meta["lambda_order"] = config.quadrature.lambda_order;
    meta["screen_distance_m"] = config.detector.distance;
    meta["resolution_m"] = config.detector.resolution;
    if (model.model == GratingModel::two) {
        meta["p1_over_m_m_per_s"] = model.params.momentum1 / config.mass;
        meta["p2_over_m_m_per_s"] = model.params.momentum2 / config.mass;
    }
    return meta;
}

struct SplineDeleter {
    void operator()(gsl_spline* s) const { gsl_spline_free(s); }
};
struct AccelDeleter {
    void operator()(gsl_interp_accel* a) const { gsl_interp_accel_free(a); }
};

}  // namespace

std::string model_name(GratingModel model) { return model == GratingModel::one ? "one" : "two"; }

GratingModel parse_model_name(const std::string& name) {
    if (name == "one" || name == "1") return GratingModel::one;
    if (name == "two" || name == "2") return GratingModel::two;
    throw ConfigError("unknown model '" + name + "' (expected one or two)");
}

PacketSuperposition outgoing_state(const ExperimentConfig& config, const ModelSpec& model, double k,
                                   double wavelength) {
    const ChirpedGaussian incoming = incoming_packet(config.beam, k, wavelength);
    if (model.model == GratingModel::one) return model_one_outgoing(incoming, config.grating).outgoing;
    return model_two_outgoing(incoming, config.grating, model.params, k);
}

IntensityPattern intensity_single(const PacketSuperposition& outgoing, double wavelength,
                                  double screen_distance, double mass,
                                  std::span<const double> positions) {
    if (!(wavelength > 0.0)) throw ConfigError("wavelength must be > 0");
    const double t = mass * screen_distance * wavelength / (2.0 * constants::pi * constants::hbar);
    const PacketSuperposition at_screen = outgoing.propagated(t, mass);
    IntensityPattern out;
    out.positions.assign(positions.begin(), positions.end());
    out.values.assign(positions.size(), 0.0);
    at_screen.accumulate_density(positions, 1.0, out.values);
    out.metadata["wavelength_m"] = wavelength;
    return out;
}

IntensityPattern intensity_lambda(const ExperimentConfig& config, const ModelSpec& model,
                                  double wavelength) {
    const auto xs = screen_grid(config);
    return intensity_lambda(config, model, wavelength, xs);
}

IntensityPattern intensity_lambda(const ExperimentConfig& config, const ModelSpec& model,
                                  double wavelength, std::span<const double> positions) {
    const QuadratureRule k_rule = k_quadrature(config.beam.k_spread, config.quadrature.k_order);
    std::vector<std::vector<double>> partial(k_rule.size());
    parallel_for(k_rule.size(), [&](std::size_t i) {
        const auto state = outgoing_state(config, model, k_rule[i].node, wavelength);
        partial[i] = intensity_single(state, wavelength, config.detector.distance, config.mass, positions)
                         .values;
    });
    IntensityPattern out;
    out.positions.assign(positions.begin(), positions.end());
    out.values.assign(positions.size(), 0.0);
    for (std::size_t i = 0; i < k_rule.size(); ++i) {
        for (std::size_t p = 0; p < positions.size(); ++p) out.values[p] += k_rule[i].weight * partial[i][p];
    }
    clamp_nonnegative(out.values);
    out.metadata = model_metadata(config, model);
    out.metadata["wavelength_m"] = wavelength;
    return out;
}

IntensityPattern detector_convolve(const IntensityPattern& pattern, double resolution) {
    if (!(resolution >= 0.0)) throw ConfigError("detector resolution must be >= 0");
    if (resolution == 0.0) return pattern;
    const auto& xs = pattern.positions;
    const std::size_t n = xs.size();
    if (n < 3) throw ConfigError("detector convolution needs at least 3 grid points");
    double min_dx = xs[1] - xs[0];
    double max_dx = min_dx;
    for (std::size_t i = 1; i < n; ++i) {
        const double dx = xs[i] - xs[i - 1];
        if (!(dx > 0.0)) throw ConfigError("positions must be strictly increasing");
        min_dx = std::min(min_dx, dx);
        max_dx = std::max(max_dx, dx);
    }
    if (max_dx > 0.25 * resolution * (1.0 + 1e-12)) {
        throw ConfigError("screen grid too coarse for detector resolution (spacing must be <= x0/4)");
    }

    std::unique_ptr<gsl_spline, SplineDeleter> spline(gsl_spline_alloc(gsl_interp_cspline, n));
    std::unique_ptr<gsl_interp_accel, AccelDeleter> accel(gsl_interp_accel_alloc());
    gsl_spline_init(spline.get(), xs.data(), pattern.values.data(), n);

    IntensityPattern out;
    out.positions = xs;
    out.values.resize(n);
    out.metadata = pattern.metadata;
    out.metadata["resolution_m"] = resolution;

    // Composite Simpson on the spline, sampled at least 4x finer than the grid.
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = std::max(xs[i] - 0.5 * resolution, xs.front());
        const double hi = std::min(xs[i] + 0.5 * resolution, xs.back());
        const double len = hi - lo;
        auto m = static_cast<std::size_t>(std::ceil(4.0 * len / min_dx));
        m = std::max<std::size_t>(m + (m % 2), 8);
        const double h = len / static_cast<double>(m);
        double sum = gsl_spline_eval(spline.get(), lo, accel.get()) +
                     gsl_spline_eval(spline.get(), hi, accel.get());
        for (std::size_t s = 1; s < m; ++s) {
            const double f = gsl_spline_eval(spline.get(), lo + h * static_cast<double>(s), accel.get());
            sum += (s % 2 == 1 ? 4.0 : 2.0) * f;
        }
        out.values[i] = sum * h / 3.0 / len;
    }
    clamp_nonnegative(out.values);
    return out;
}

IntensityPattern intensity_total(const ExperimentConfig& config, const ModelSpec& model) {
    const auto xs = screen_grid(config);
    return intensity_total(config, model, xs);
}

IntensityPattern intensity_total(const ExperimentConfig& config, const ModelSpec& model,
                                 std::span<const double> positions) {
    require_increasing(positions);
    const QuadratureRule l_rule = lambda_quadrature(config.beam.wavelength, config.quadrature.lambda_order);
    const QuadratureRule k_rule = k_quadrature(config.beam.k_spread, config.quadrature.k_order);
    const std::size_t nk = k_rule.size();

    std::vector<std::vector<double>> partial(l_rule.size() * nk);
    parallel_for(partial.size(), [&](std::size_t idx) {
        const double lambda = l_rule[idx / nk].node;
        const double k = k_rule[idx % nk].node;
        const auto state = outgoing_state(config, model, k, lambda);
        partial[idx] =
            intensity_single(state, lambda, config.detector.distance, config.mass, positions).values;
    });

    IntensityPattern raw;
    raw.positions.assign(positions.begin(), positions.end());
    raw.values.assign(positions.size(), 0.0);
    for (std::size_t idx = 0; idx < partial.size(); ++idx) {
        const double w = l_rule[idx / nk].weight * k_rule[idx % nk].weight;
        for (std::size_t p = 0; p < positions.size(); ++p) raw.values[p] += w * partial[idx][p];
    }
    clamp_nonnegative(raw.values);
    raw.metadata = model_metadata(config, model);
    raw.metadata["mean_wavelength_m"] = mean_wavelength(config.beam.wavelength);
    return detector_convolve(raw, config.detector.resolution);
}

IntensityPattern sharp_aperture_intensity(const ChirpedGaussian& incoming, const GratingGeometry& geom,
                                          double wavelength, double screen_distance, double mass,
                                          std::span<const double> positions, int samples_per_slit) {
    geom.validate();
    const double t = mass * screen_distance * wavelength / (2.0 * constants::pi * constants::hbar);
    const double tau = constants::hbar * t / mass;
    const int m = std::max(2, samples_per_slit + samples_per_slit % 2);

    struct Sample {
        double x;
        cplx weighted;  // Simpson weight * psi_in(x)
    };
    std::vector<Sample> samples;
    for (int j = 1; j <= 2; ++j) {
        const double lo = geom.slit_center(j) - 0.5 * geom.aperture(j);
        const double h = geom.aperture(j) / m;
        for (int s = 0; s <= m; ++s) {
            const double x = lo + h * s;
            const double w = (s == 0 || s == m) ? 1.0 : (s % 2 == 1 ? 4.0 : 2.0);
            samples.push_back({x, w * h / 3.0 * evaluate(incoming, x)});
        }
    }
    // psi(x, t) = (2 pi i tau)^(-1/2) int exp(i (x - x')^2 / (2 tau)) psi_out(x') dx'
    const cplx prefactor = 1.0 / std::sqrt(cplx(0.0, 2.0 * constants::pi * tau));
    IntensityPattern out;
    out.positions.assign(positions.begin(), positions.end());
    out.values.resize(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        cplx sum{0.0, 0.0};
        for (const auto& s : samples) {
            const double dx = positions[i] - s.x;
            sum += s.weighted * std::polar(1.0, dx * dx / (2.0 * tau));
        }
        out.values[i] = std::norm(prefactor * sum);
    }
    out.metadata["model"] = "sharp";
    out.metadata["wavelength_m"] = wavelength;
    return out;
}

std::vector<Extremum> find_extrema(const IntensityPattern& pattern, double lo, double hi) {
    const auto& xs = pattern.positions;
    const auto& ys = pattern.values;
    std::vector<Extremum> out;
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        if (xs[i] <= lo || xs[i] >= hi) continue;
        const bool is_max = ys[i] > ys[i - 1] && ys[i] >= ys[i + 1];
        const bool is_min = ys[i] < ys[i - 1] && ys[i] <= ys[i + 1];
        if (!is_max && !is_min) continue;
        // Vertex of the parabola through the three samples.
        const double x0 = xs[i - 1], x1 = xs[i], x2 = xs[i + 1];
        const double y0 = ys[i - 1], y1 = ys[i], y2 = ys[i + 1];
        const double d01 = (y1 - y0) / (x1 - x0);
        const double d12 = (y2 - y1) / (x2 - x1);
        const double curvature = (d12 - d01) / (x2 - x0);  // leading coefficient
        Extremum e{x1, y1, is_max};
        if (curvature != 0.0) {
            const double slope_at_x1 = d01 + curvature * (x1 - x0);
            const double shift = -slope_at_x1 / (2.0 * curvature);
            if (std::abs(shift) <= std::max(x1 - x0, x2 - x1)) {
                e.position = x1 + shift;
                e.value = y1 + slope_at_x1 * shift + curvature * shift * shift;
            }
        }
        e.value = std::max(e.value, 0.0);
        out.push_back(e);
    }
    return out;
}

double visibility(const IntensityPattern& pattern, double lo, double hi) {
    const auto extrema = find_extrema(pattern, lo, hi);
    const bool has_min = std::any_of(extrema.begin(), extrema.end(), [](const Extremum& e) { return !e.is_max; });
    if (!has_min || extrema.size() < 2) throw NumericalError("no fringes in the visibility window");

    const double mid = 0.5 * (lo + hi);
    std::size_t c = 0;
    for (std::size_t i = 1; i < extrema.size(); ++i) {
        if (std::abs(extrema[i].position - mid) < std::abs(extrema[c].position - mid)) c = i;
    }
    double neighbor_sum = 0.0;
    int neighbors = 0;
    if (c > 0 && extrema[c - 1].is_max != extrema[c].is_max) {
        neighbor_sum += extrema[c - 1].value;
        ++neighbors;
    }
    if (c + 1 < extrema.size() && extrema[c + 1].is_max != extrema[c].is_max) {
        neighbor_sum += extrema[c + 1].value;
        ++neighbors;
    }
    if (neighbors == 0) throw NumericalError("no fringes in the visibility window");
    const double other = neighbor_sum / neighbors;
    const double i_max = extrema[c].is_max ? extrema[c].value : other;
    const double i_min = extrema[c].is_max ? other : extrema[c].value;
    if (!(i_max + i_min > 0.0)) throw NumericalError("no fringes in the visibility window");
    return std::clamp((i_max - i_min) / (i_max + i_min), 0.0, 1.0);
}

}  // namespace nslit
