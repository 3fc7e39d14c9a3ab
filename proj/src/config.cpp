#include "nslit/config.hpp"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "nslit/units.hpp"

namespace nslit {
namespace {

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

[[noreturn]] void fail(const std::string& key_path, const std::string& what) {
    throw ConfigError(key_path + ": " + what);
}

void reject_unknown(const YAML::Node& node, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
    if (!node.IsMap()) fail(path.empty() ? "<root>" : path, "expected a section of key/value pairs");
    for (const auto& item : node) {
        const auto key = item.first.as<std::string>();
        bool ok = false;
        for (auto a : allowed) ok = ok || a == key;
        if (!ok) fail(join(path, key), "unknown key");
    }
}

std::string scalar_text(const YAML::Node& node, const std::string& key_path) {
    if (!node.IsScalar()) fail(key_path, "expected a scalar value");
    return node.Scalar();
}

double quantity(const YAML::Node& section, const std::string& path, const std::string& key, Dimension dim) {
    const std::string key_path = join(path, key);
    const YAML::Node node = section[key];
    if (!node) fail(key_path, "missing required key");
    try {
        return parse_quantity(scalar_text(node, key_path), dim);
    } catch (const UnitError& e) {
        fail(key_path, e.what());
    }
}

std::optional<double> optional_quantity(const YAML::Node& section, const std::string& path,
                                        const std::string& key, Dimension dim) {
    if (!section[key]) return std::nullopt;
    return quantity(section, path, key, dim);
}

int integer(const YAML::Node& section, const std::string& path, const std::string& key, int fallback) {
    const YAML::Node node = section[key];
    if (!node) return fallback;
    const std::string key_path = join(path, key);
    try {
        return node.as<int>();
    } catch (const YAML::Exception&) {
        fail(key_path, "expected an integer");
    }
}

/// Momentum given either as a velocity p/m or directly in kg*m/s.
double momentum(const YAML::Node& section, const std::string& path, const std::string& key, double mass) {
    const std::string key_path = join(path, key);
    const std::string text = scalar_text(section[key], key_path);
    try {
        return parse_momentum(text, mass);
    } catch (const UnitError& e) {
        fail(key_path, e.what());
    }
}


}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("<root>: malformed configuration: ") + e.what());
    }
    if (!root || root.IsNull()) throw ConfigError("<root>: empty configuration");
    reject_unknown(root, "", {"beam", "grating", "detector", "environment", "model", "quadrature", "particle_mass"});

    ExperimentConfig c;
    if (root["particle_mass"]) c.mass = quantity(root, "", "particle_mass", Dimension::mass);

    // beam
    const YAML::Node beam = root["beam"];
    if (!beam) fail("beam", "missing required section");
    reject_unknown(beam, "beam", {"entrance_slit_width", "source_distance", "k_spread", "forward_speed", "wavelength"});
    c.beam.entrance_slit_width = quantity(beam, "beam", "entrance_slit_width", Dimension::length);
    c.beam.source_distance = quantity(beam, "beam", "source_distance", Dimension::length);
    c.beam.k_spread = optional_quantity(beam, "beam", "k_spread", Dimension::inverse_length).value_or(0.0);
    c.beam.forward_speed = optional_quantity(beam, "beam", "forward_speed", Dimension::speed);
    const YAML::Node wl = beam["wavelength"];
    if (!wl) fail("beam.wavelength", "missing required section");
    reject_unknown(wl, "beam.wavelength", {"mean", "std", "table"});
    if (wl["table"]) {
        if (wl["mean"] || wl["std"]) fail("beam.wavelength", "give either mean/std or table, not both");
        std::filesystem::path table = scalar_text(wl["table"], "beam.wavelength.table");
        if (table.is_relative()) table = std::filesystem::path(base_dir) / table;
        try {
            c.beam.wavelength = load_spectrum_csv(std::filesystem::absolute(table).lexically_normal().string());
        } catch (const ConfigError& e) {
            fail("beam.wavelength.table", e.what());
        }
    } else {
        GaussianSpectrum g;
        g.mean = quantity(wl, "beam.wavelength", "mean", Dimension::length);
        g.std_dev = optional_quantity(wl, "beam.wavelength", "std", Dimension::length).value_or(0.0);
        c.beam.wavelength = g;
    }

    // grating
    const YAML::Node grating = root["grating"];
    if (!grating) fail("grating", "missing required section");
    reject_unknown(grating, "grating", {"a1", "a2", "d"});
    c.grating.aperture1 = quantity(grating, "grating", "a1", Dimension::length);
    c.grating.aperture2 = quantity(grating, "grating", "a2", Dimension::length);
    c.grating.separation = quantity(grating, "grating", "d", Dimension::length);

    // detector
    const YAML::Node det = root["detector"];
    if (!det) fail("detector", "missing required section");
    reject_unknown(det, "detector", {"distance", "resolution", "grid"});
    c.detector.distance = quantity(det, "detector", "distance", Dimension::length);
    c.detector.resolution = optional_quantity(det, "detector", "resolution", Dimension::length).value_or(0.0);
    if (const YAML::Node grid = det["grid"]) {
        reject_unknown(grid, "detector.grid", {"points", "half_width", "positions"});
        c.detector.grid_points = integer(grid, "detector.grid", "points", c.detector.grid_points);
        c.detector.half_width =
            optional_quantity(grid, "detector.grid", "half_width", Dimension::length).value_or(0.0);
        if (const YAML::Node pos = grid["positions"]) {
            if (!pos.IsSequence()) fail("detector.grid.positions", "expected a list of lengths");
            for (std::size_t i = 0; i < pos.size(); ++i) {
                const std::string kp = "detector.grid.positions[" + std::to_string(i) + "]";
                try {
                    c.detector.positions.push_back(parse_quantity(scalar_text(pos[i], kp), Dimension::length));
                } catch (const UnitError& e) {
                    fail(kp, e.what());
                }
            }
        }
    }

    if (const YAML::Node env = root["environment"]) {
        reject_unknown(env, "environment", {"pressure", "temperature", "cross_section", "gas_mass"});
        EnvironmentConfig e;
        e.pressure = quantity(env, "environment", "pressure", Dimension::pressure);
        e.temperature = quantity(env, "environment", "temperature", Dimension::temperature);
        e.cross_section = quantity(env, "environment", "cross_section", Dimension::area);
        e.gas_mass = optional_quantity(env, "environment", "gas_mass", Dimension::mass).value_or(e.gas_mass);
        c.environment = e;
    }

    if (const YAML::Node model = root["model"]) {
        reject_unknown(model, "model", {"p1", "p2"});
        if (model["p1"]) c.model_two.momentum1 = momentum(model, "model", "p1", c.mass);
        if (model["p2"]) c.model_two.momentum2 = momentum(model, "model", "p2", c.mass);
    }

    if (const YAML::Node quad = root["quadrature"]) {
        reject_unknown(quad, "quadrature", {"k_order", "lambda_order"});
        c.quadrature.k_order = integer(quad, "quadrature", "k_order", c.quadrature.k_order);
        c.quadrature.lambda_order = integer(quad, "quadrature", "lambda_order", c.quadrature.lambda_order);
    }

    // Invariant messages already carry the key path.
    c.validate();
    return c;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>: cannot open configuration '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_config_text(buf.str(), dir.empty() ? "." : dir.string());
}

std::string serialize_config(const ExperimentConfig& c) {
    YAML::Emitter out;
    auto q = [](double v, Dimension d) { return format_quantity(v, d); };
    out << YAML::BeginMap;
    out << YAML::Key << "particle_mass" << YAML::Value << q(c.mass, Dimension::mass);

    out << YAML::Key << "beam" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "entrance_slit_width" << YAML::Value << q(c.beam.entrance_slit_width, Dimension::length);
    out << YAML::Key << "source_distance" << YAML::Value << q(c.beam.source_distance, Dimension::length);
    out << YAML::Key << "k_spread" << YAML::Value << q(c.beam.k_spread, Dimension::inverse_length);
    if (c.beam.forward_speed) {
        out << YAML::Key << "forward_speed" << YAML::Value << q(*c.beam.forward_speed, Dimension::speed);
    }
    out << YAML::Key << "wavelength" << YAML::Value << YAML::BeginMap;
    if (const auto* g = std::get_if<GaussianSpectrum>(&c.beam.wavelength)) {
        out << YAML::Key << "mean" << YAML::Value << q(g->mean, Dimension::length);
        out << YAML::Key << "std" << YAML::Value << q(g->std_dev, Dimension::length);
    } else {
        const auto& t = std::get<TabulatedSpectrum>(c.beam.wavelength);
        if (t.source_path.empty()) throw ConfigError("beam.wavelength.table: table has no source file to reference");
        out << YAML::Key << "table" << YAML::Value << t.source_path;
    }
    out << YAML::EndMap << YAML::EndMap;

    out << YAML::Key << "grating" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "a1" << YAML::Value << q(c.grating.aperture1, Dimension::length);
    out << YAML::Key << "a2" << YAML::Value << q(c.grating.aperture2, Dimension::length);
    out << YAML::Key << "d" << YAML::Value << q(c.grating.separation, Dimension::length);
    out << YAML::EndMap;

    out << YAML::Key << "detector" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "distance" << YAML::Value << q(c.detector.distance, Dimension::length);
    out << YAML::Key << "resolution" << YAML::Value << q(c.detector.resolution, Dimension::length);
    out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "points" << YAML::Value << c.detector.grid_points;
    out << YAML::Key << "half_width" << YAML::Value << q(c.detector.half_width, Dimension::length);
    if (!c.detector.positions.empty()) {
        out << YAML::Key << "positions" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (double x : c.detector.positions) out << q(x, Dimension::length);
        out << YAML::EndSeq;
    }
    out << YAML::EndMap << YAML::EndMap;

    if (c.environment) {
        const auto& e = *c.environment;
        out << YAML::Key << "environment" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "pressure" << YAML::Value << q(e.pressure, Dimension::pressure);
        out << YAML::Key << "temperature" << YAML::Value << q(e.temperature, Dimension::temperature);
        out << YAML::Key << "cross_section" << YAML::Value << q(e.cross_section, Dimension::area);
        out << YAML::Key << "gas_mass" << YAML::Value << q(e.gas_mass, Dimension::mass);
        out << YAML::EndMap;
    }

    out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "p1" << YAML::Value << q(c.model_two.momentum1, Dimension::momentum);
    out << YAML::Key << "p2" << YAML::Value << q(c.model_two.momentum2, Dimension::momentum);
    out << YAML::EndMap;

    out << YAML::Key << "quadrature" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "k_order" << YAML::Value << c.quadrature.k_order;
    out << YAML::Key << "lambda_order" << YAML::Value << c.quadrature.lambda_order;
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace nslit
