#include "nslit/beam.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "nslit/constants.hpp"

namespace nslit {
namespace {

using FixedWorkspace =
    std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)>;

QuadratureRule fixed_rule(const gsl_integration_fixed_type* type, int order, double a, double b) {
    FixedWorkspace ws(gsl_integration_fixed_alloc(type, static_cast<std::size_t>(order), a, b, 0.0, 0.0),
                      &gsl_integration_fixed_free);
    if (!ws) throw NumericalError("quadrature allocation failed");
    const double* nodes = gsl_integration_fixed_nodes(ws.get());
    const double* weights = gsl_integration_fixed_weights(ws.get());
    QuadratureRule rule(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) rule[i] = {nodes[i], weights[i]};
    return rule;
}

void normalize(QuadratureRule& rule) {
    double total = 0.0;
    for (const auto& n : rule) total += n.weight;
    for (auto& n : rule) n.weight /= total;
}

}  // namespace

TabulatedSpectrum::TabulatedSpectrum(std::vector<QuadratureNode> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw ConfigError("wavelength table is empty");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!(rows_[i].node > 0.0)) throw ConfigError("wavelength table: wavelengths must be > 0");
        if (rows_[i].weight < 0.0) throw ConfigError("wavelength table: weights must be >= 0");
        if (i > 0 && !(rows_[i].node > rows_[i - 1].node)) {
            throw ConfigError("wavelength table: wavelengths must be strictly increasing");
        }
    }
    if (rows_.size() == 1) {
        rows_[0].weight = 1.0;
        return;
    }
    double integral = 0.0;
    for (std::size_t i = 1; i < rows_.size(); ++i) {
        integral += 0.5 * (rows_[i].weight + rows_[i - 1].weight) * (rows_[i].node - rows_[i - 1].node);
    }
    if (!(integral > 0.0)) throw ConfigError("wavelength table: total weight is zero");
    for (auto& r : rows_) r.weight /= integral;
}

TabulatedSpectrum load_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open wavelength table '" + path + "'");
    std::vector<QuadratureNode> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        for (char& ch : line) {
            if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
        }
        std::istringstream fields(line);
        double lambda_nm = 0.0;
        double weight = 0.0;
        if (!(fields >> lambda_nm >> weight)) {
            if (line_no == 1) continue;  // header
            throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed wavelength row");
        }
        rows.push_back({lambda_nm * 1e-9, weight});
    }
    TabulatedSpectrum spec(std::move(rows));
    spec.source_path = path;
    return spec;
}

double mean_wavelength(const WavelengthSpec& spec) {
    if (const auto* g = std::get_if<GaussianSpectrum>(&spec)) return g->mean;
    double mean = 0.0;
    for (const auto& n : lambda_quadrature(spec, 1)) mean += n.weight * n.node;
    return mean;
}

double BeamConfig::source_sigma() const { return entrance_slit_width / std::sqrt(12.0); }

void BeamConfig::validate() const {
    if (!(entrance_slit_width > 0.0)) throw ConfigError("beam.entrance_slit_width: must be > 0");
    if (!(source_distance > 0.0)) throw ConfigError("beam.source_distance: must be > 0");
    if (!(k_spread >= 0.0)) throw ConfigError("beam.k_spread: must be >= 0");
    if (const auto* g = std::get_if<GaussianSpectrum>(&wavelength)) {
        if (!(g->mean > 0.0)) throw ConfigError("beam.wavelength.mean: must be > 0");
        if (!(g->std_dev >= 0.0)) throw ConfigError("beam.wavelength.std: must be >= 0");
        if (g->mean - 5.0 * g->std_dev <= 0.0) {
            throw ConfigError("beam.wavelength: mean - 5 std must stay > 0");
        }
    } else if (std::get<TabulatedSpectrum>(wavelength).rows().empty()) {
        throw ConfigError("beam.wavelength.table: is empty");
    }
    if (forward_speed && !(*forward_speed > 0.0)) throw ConfigError("beam.forward_speed: must be > 0");
}

FlightGeometry flight_geometry(const BeamConfig& config, double wavelength, double mass) {
    if (!(wavelength > 0.0)) throw ConfigError("wavelength must be > 0");
    FlightGeometry g;
    g.source_sigma = config.source_sigma();
    g.gamma = wavelength * config.source_distance /
              (4.0 * constants::pi * g.source_sigma * g.source_sigma);
    g.width = g.source_sigma * std::sqrt(1.0 + g.gamma * g.gamma);
    g.flight_time = config.source_distance * mass * wavelength / (2.0 * constants::pi * constants::hbar);
    return g;
}

double drift_offset(const BeamConfig& config, double k, double wavelength) {
    return config.source_distance * wavelength * k / (2.0 * constants::pi);
}

ChirpedGaussian chirped_incoming(double width, double gamma, double offset, double k) {
    if (!(width > 0.0)) throw InvalidPacket("incoming width must be > 0");
    ChirpedGaussian p;
    p.alpha = 0.5 / (width * width);
    p.beta = gamma * p.alpha;
    p.center = offset;
    p.wave_number = k;
    p.amplitude = std::pow(2.0 * p.alpha / constants::pi, 0.25);
    return p;
}

ChirpedGaussian incoming_packet(const BeamConfig& config, double k, double wavelength) {
    const FlightGeometry g = flight_geometry(config, wavelength, constants::neutron_mass);
    return chirped_incoming(g.width, g.gamma, drift_offset(config, k, wavelength), k);
}

ChirpedGaussian source_packet(const BeamConfig& config, double k) {
    return normalized_gaussian(0.0, config.source_sigma(), k);
}

QuadratureRule k_quadrature(double k_spread, int order) {
    if (order < 1) throw ConfigError("k quadrature order must be >= 1");
    if (!(k_spread >= 0.0)) throw ConfigError("k spread must be >= 0");
    if (k_spread == 0.0 || order == 1) return {{0.0, 1.0}};
    // Weight exp(-b k^2) with b = 1/(2 sigma^2) is the normal density up to a constant.
    QuadratureRule rule =
        fixed_rule(gsl_integration_fixed_hermite, order, 0.0, 0.5 / (k_spread * k_spread));
    normalize(rule);
    return rule;
}

QuadratureRule lambda_quadrature(const WavelengthSpec& spec, int order) {
    if (const auto* g = std::get_if<GaussianSpectrum>(&spec)) {
        if (!(g->mean > 0.0)) throw ConfigError("mean wavelength must be > 0");
        if (g->std_dev == 0.0 || order <= 1) return {{g->mean, 1.0}};
        const double lo = g->mean - 5.0 * g->std_dev;
        const double hi = g->mean + 5.0 * g->std_dev;
        QuadratureRule rule = fixed_rule(gsl_integration_fixed_legendre, order, lo, hi);
        for (auto& n : rule) {
            const double z = (n.node - g->mean) / g->std_dev;
            n.weight *= std::exp(-0.5 * z * z);
        }
        normalize(rule);
        return rule;
    }
    const auto& rows = std::get<TabulatedSpectrum>(spec).rows();
    if (rows.empty()) throw ConfigError("wavelength table is empty");
    if (rows.size() == 1) return {{rows[0].node, 1.0}};
    QuadratureRule rule(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double left = i > 0 ? rows[i].node - rows[i - 1].node : 0.0;
        const double right = i + 1 < rows.size() ? rows[i + 1].node - rows[i].node : 0.0;
        rule[i] = {rows[i].node, 0.5 * (left + right) * rows[i].weight};
    }
    normalize(rule);
    return rule;
}

std::optional<std::string> check_forward_speed(const BeamConfig& config, double mass) {
    if (!config.forward_speed) return std::nullopt;
    const double implied = constants::planck / (mass * *config.forward_speed);
    const double mean = mean_wavelength(config.wavelength);
    const double rel = std::abs(implied - mean) / mean;
    if (rel <= 0.05) return std::nullopt;
    std::ostringstream msg;
    msg << "forward speed " << *config.forward_speed << " m/s implies wavelength " << implied * 1e9
        << " nm, which differs from the mean wavelength " << mean * 1e9 << " nm by " << rel * 100.0
        << " %";
    return msg.str();
}

}  // namespace nslit
