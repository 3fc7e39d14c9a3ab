#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nslit/config.hpp"
#include "nslit/decoherence.hpp"
#include "nslit/errors.hpp"
#include "nslit/fit.hpp"
#include "nslit/io.hpp"
#include "nslit/parallel.hpp"
#include "nslit/pattern.hpp"
#include "nslit/solver.hpp"
#include "nslit/units.hpp"

using namespace nslit;
using nlohmann::json;

namespace {

enum Exit { ok = 0, internal = 1, usage = 2, bad_input = 3, numerical = 4, check_failed = 5 };

// Thrown for failed self-checks and non-converged fits.
struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

int fail(const std::string& category, const std::string& message, int code) {
    std::cerr << "nslit: error[" << category << "]: " << one_line(message) << '\n';
    return code;
}

void warn(const std::string& message) { std::cerr << "nslit: warning: " << one_line(message) << '\n'; }

std::string with_extension(const std::string& path, const std::string& ext) {
    std::filesystem::path p(path);
    if (p.extension() == ".csv") return p.replace_extension(ext).string();
    return path + ext;
}

ExperimentConfig load_config(const std::string& path) {
    ExperimentConfig c = parse_config(path);
    if (auto w = check_forward_speed(c.beam, c.mass)) warn(*w);
    return c;
}

double quantity_arg(const std::string& text, Dimension dim, const std::string& flag) {
    try {
        return parse_quantity(text, dim);
    } catch (const UnitError& e) {
        throw ConfigError(flag + ": " + e.what());
    }
}

// "lo:hi" with unit-suffixed ends; empty ends mean unbounded.
Interval interval_arg(const std::string& text, const std::function<double(const std::string&)>& parse,
                      const std::string& flag) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError(flag + ": expected 'lo:hi'");
    Interval iv;
    const std::string lo = text.substr(0, colon), hi = text.substr(colon + 1);
    if (lo.find_first_not_of(' ') != std::string::npos) iv.lo = parse(lo);
    if (hi.find_first_not_of(' ') != std::string::npos) iv.hi = parse(hi);
    if (!(iv.lo < iv.hi)) throw ConfigError(flag + ": lower bound must be below upper bound");
    return iv;
}

std::pair<std::string, std::string> key_value(const std::string& item, const std::string& flag) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError(flag + ": expected key=value, got '" + item + "'");
    return {item.substr(0, eq), item.substr(eq + 1)};
}

bool mirror_symmetric(const ExperimentConfig& c, const ModelSpec& model, std::span<const double> xs) {
    if (c.grating.aperture1 != c.grating.aperture2) return false;
    if (model.model == GratingModel::two && model.params.momentum1 != -model.params.momentum2) return false;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] != -xs[xs.size() - 1 - i]) return false;
    }
    return true;
}

std::string gnuplot_script(const std::string& csv, const std::string& title) {
    std::ostringstream s;
    s << "set datafile separator ','\n"
      << "set xlabel 'x (um)'\n"
      << "set ylabel 'intensity'\n"
      << "plot '" << std::filesystem::path(csv).filename().string() << "' using 1:2 skip 1 with lines title '"
      << title << "'\n";
    return s.str();
}

struct SimulateArgs {
    std::string config;
    std::string model = "two";
    std::string output;
    bool self_check = false;
    bool gnuplot = false;
};

int run_simulate(const SimulateArgs& a) {
    const ExperimentConfig config = load_config(a.config);
    const ModelSpec model{parse_model_name(a.model), config.model_two};
    const IntensityPattern pattern = intensity_total(config, model);

    write_pattern_csv(pattern, a.output);
    json meta = pattern.metadata;
    meta["points"] = pattern.positions.size();
    meta["position_unit"] = "um";
    meta["config"] = serialize_config(config);
    write_text_file(with_extension(a.output, ".json"), meta.dump(2) + "\n");
    if (a.gnuplot) write_text_file(with_extension(a.output, ".gp"), gnuplot_script(a.output, "model " + a.model));

    if (a.self_check) {
        if (!mirror_symmetric(config, model, pattern.positions)) {
            warn("self-check skipped: configuration is not mirror symmetric");
        } else {
            const auto& v = pattern.values;
            const double peak = *std::max_element(v.begin(), v.end());
            double worst = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(v[i] - v[v.size() - 1 - i]));
            const double asym = peak > 0.0 ? worst / peak : 0.0;
            if (!(asym <= 1e-9)) {
                std::ostringstream m;
                m << "self-check failed: relative asymmetry " << asym << " exceeds 1e-09";
                throw CheckFailure(m.str());
            }
            std::cout << "self-check passed: relative asymmetry " << asym << "\n";
        }
    }
    std::cout << "wrote " << a.output << " (" << pattern.positions.size() << " points)\n";
    return ok;
}

struct FitArgs {
    std::string data;
    std::string config;
    std::string model = "two";
    std::vector<std::string> init;
    std::vector<std::string> bounds;
    std::string output;
    std::string residuals;
    int max_iterations = 2000;
    int restarts = 3;
};

int run_fit(const FitArgs& a) {
    const ExperimentConfig config = load_config(a.config);
    const Dataset data = load_data_csv(a.data);
    const GratingModel model = parse_model_name(a.model);
    const double mass = config.mass;

    FitParameters init;
    init.momentum1 = config.model_two.momentum1;
    init.momentum2 = config.model_two.momentum2;
    if (config.beam.k_spread > 0.0) init.k_spread = config.beam.k_spread;
    for (const auto& item : a.init) {
        const auto [key, value] = key_value(item, "--init");
        try {
            if (key == "p1") init.momentum1 = parse_momentum(value, mass);
            else if (key == "p2") init.momentum2 = parse_momentum(value, mass);
            else if (key == "k_spread") init.k_spread = parse_quantity(value, Dimension::inverse_length);
            else throw ConfigError("--init: unknown parameter '" + key + "' (expected p1, p2, k_spread)");
        } catch (const UnitError& e) {
            throw ConfigError("--init " + key + ": " + e.what());
        }
    }

    FitBounds bounds;
    for (const auto& item : a.bounds) {
        const auto [key, value] = key_value(item, "--bounds");
        const std::string flag = "--bounds " + key;
        auto as_momentum = [&](const std::string& t) {
            try {
                return parse_momentum(t, mass);
            } catch (const UnitError& e) {
                throw ConfigError(flag + ": " + e.what());
            }
        };
        if (key == "p1") bounds.momentum1 = interval_arg(value, as_momentum, flag);
        else if (key == "p2") bounds.momentum2 = interval_arg(value, as_momentum, flag);
        else if (key == "k_spread") {
            bounds.k_spread = interval_arg(
                value, [&](const std::string& t) { return quantity_arg(t, Dimension::inverse_length, flag); }, flag);
        } else {
            throw ConfigError("--bounds: unknown parameter '" + key + "' (expected p1, p2, k_spread)");
        }
    }

    FitOptions options;
    options.max_iterations = a.max_iterations;
    options.restarts = a.restarts;
    const FitResult result = fit_model(data, config, model, init, bounds, options);

    const std::string report = fit_result_json(result, mass).dump(2) + "\n";
    if (a.output.empty()) std::cout << report;
    else write_text_file(a.output, report);
    if (!a.residuals.empty()) {
        const auto prediction = predict(result.params, config, model, data.positions);
        write_text_file(a.residuals, fit_residuals_csv(data, prediction));
    }
    if (!result.converged) throw CheckFailure("fit: " + result.message);
    return ok;
}

struct CoherenceArgs {
    std::string pressure = "1 atm";
    std::string temperature = "295 K";
    std::string cross_section = "1e-27 m^2";
    std::string gas_mass = "4.8e-26 kg";
    std::string path_length;
    std::string wavelength;
    std::string particle_mass;
};

int run_coherence(const CoherenceArgs& a) {
    EnvironmentConfig env;
    env.pressure = quantity_arg(a.pressure, Dimension::pressure, "--pressure");
    env.temperature = quantity_arg(a.temperature, Dimension::temperature, "--temperature");
    env.cross_section = quantity_arg(a.cross_section, Dimension::area, "--cross-section");
    env.gas_mass = quantity_arg(a.gas_mass, Dimension::mass, "--gas-mass");
    const double length = quantity_arg(a.path_length, Dimension::length, "--path-length");
    const double lambda = quantity_arg(a.wavelength, Dimension::length, "--wavelength");
    const double mass =
        a.particle_mass.empty() ? constants::neutron_mass : quantity_arg(a.particle_mass, Dimension::mass, "--particle-mass");

    const CoherenceMargin margin = coherence_margin(env, length, lambda, mass);
    const CoherenceAudit audit = coherence_audit(env);
    json j;
    j["inputs"] = {{"pressure_pa", env.pressure},
                   {"temperature_k", env.temperature},
                   {"cross_section_m2", env.cross_section},
                   {"gas_mass_kg", env.gas_mass},
                   {"path_length_m", length},
                   {"wavelength_m", lambda},
                   {"particle_mass_kg", mass}};
    j["coherence_time"] = {{"value", margin.coherence_time}, {"units", audit.literal_units}};
    j["time_of_flight_s"] = margin.time_of_flight;
    j["ratio"] = margin.ratio;
    j["verdict"] = margin.verdict;
    j["audit"] = {{"kinetic_collision_time_s", audit.kinetic_estimate},
                  {"kinetic_ratio", audit.kinetic_estimate / margin.time_of_flight},
                  {"reference_coherence_time_s", audit.reference_value},
                  {"literal_matches_reference", audit.literal_matches_reference},
                  {"note", "coherence_time is the formula evaluated with SI inputs; its units are not seconds"}};
    std::cout << j.dump(2) << "\n";
    return ok;
}

struct SolveArgs {
    std::string config;
    std::vector<std::string> wavelengths;
    std::string sweep;
    int steps = 5;
    std::size_t points = std::size_t{1} << 14;
    double domain_factor = 16.0;
    bool from_source = false;
    std::string output;
};

int run_grating_solve(const SolveArgs& a) {
    const ExperimentConfig config = load_config(a.config);
    std::vector<double> lambdas;
    for (const auto& w : a.wavelengths) lambdas.push_back(quantity_arg(w, Dimension::length, "--wavelength"));
    if (!a.sweep.empty()) {
        const Interval iv = interval_arg(
            a.sweep, [](const std::string& t) { return quantity_arg(t, Dimension::length, "--sweep"); }, "--sweep");
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) throw ConfigError("--sweep: both ends are required");
        if (a.steps < 2) throw ConfigError("--steps: must be >= 2");
        for (int i = 0; i < a.steps; ++i) lambdas.push_back(iv.lo + (iv.hi - iv.lo) * i / (a.steps - 1));
    }
    if (lambdas.empty()) lambdas.push_back(mean_wavelength(config.beam.wavelength));

    GratingSolveOptions options;
    options.points = a.points;
    options.domain_factor = a.domain_factor;
    options.from_source = a.from_source;
    std::vector<GratingSolveResult> rows(lambdas.size());
    parallel_for(lambdas.size(), [&](std::size_t i) { rows[i] = solve_grating(config, lambdas[i], options); });

    std::string out = "wavelength_nm,p1_kg_m_per_s,p2_kg_m_per_s,absorbed_norm\n";
    for (const auto& r : rows) {
        out += format_number(r.wavelength * 1e9) + ',' + format_number(r.momenta.momentum1) + ',' +
               format_number(r.momenta.momentum2) + ',' + format_number(r.absorbed_fraction) + '\n';
    }
    if (a.output.empty()) std::cout << out;
    else write_text_file(a.output, out);
    return ok;
}

struct VisibilityArgs {
    std::string config;
    std::string model = "two";
    std::string pattern;
    std::string window;
};

int run_visibility(const VisibilityArgs& a) {
    if (a.config.empty() == a.pattern.empty()) throw ConfigError("give exactly one of --config or --pattern");
    IntensityPattern pattern;
    Interval window;
    if (!a.pattern.empty()) {
        const Dataset d = load_data_csv(a.pattern);
        pattern.positions = d.positions;
        pattern.values = d.counts;
        if (a.window.empty()) throw ConfigError("--window: required with --pattern");
    } else {
        const ExperimentConfig config = load_config(a.config);
        pattern = intensity_total(config, ModelSpec{parse_model_name(a.model), config.model_two});
        const double spacing = central_fringe_spacing(config);
        window = {-0.75 * spacing, 0.75 * spacing};
    }
    if (!a.window.empty()) {
        window = interval_arg(
            a.window, [](const std::string& t) { return quantity_arg(t, Dimension::length, "--window"); }, "--window");
    }
    const double v = visibility(pattern, window.lo, window.hi);
    json j;
    j["visibility"] = v;
    j["window_um"] = {window.lo * 1e6, window.hi * 1e6};
    std::cout << j.dump(2) << "\n";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Double-slit matter-wave interference simulator"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Compute the screen intensity pattern");
    simulate->add_option("-c,--config", sim.config, "Experiment configuration (YAML)")->required();
    simulate->add_option("-m,--model", sim.model, "Grating model: one or two")->check(CLI::IsMember({"one", "two"}));
    simulate->add_option("-o,--output", sim.output, "Pattern CSV; metadata goes to the matching .json")->required();
    simulate->add_flag("--self-check", sim.self_check, "Verify mirror symmetry for symmetric setups");
    simulate->add_flag("--emit-gnuplot", sim.gnuplot, "Also write a gnuplot script next to the CSV");

    FitArgs fit;
    auto* fitcmd = app.add_subcommand("fit", "Fit a grating model to measured counts");
    fitcmd->add_option("-d,--data", fit.data, "CSV with position_um,counts[,sigma]")->required();
    fitcmd->add_option("-c,--config", fit.config, "Experiment configuration (YAML)")->required();
    fitcmd->add_option("-m,--model", fit.model, "Grating model: one or two")->check(CLI::IsMember({"one", "two"}));
    fitcmd->add_option("--init", fit.init, "Starting point, e.g. p1=-3.4mm/s k_spread=5000/m")->delimiter(',');
    fitcmd->add_option("--bounds", fit.bounds, "Box bounds, e.g. 'p1=-10 mm/s:0 mm/s'");
    fitcmd->add_option("-o,--output", fit.output, "JSON report (default: stdout)");
    fitcmd->add_option("--residuals", fit.residuals, "CSV of data, prediction and residual");
    fitcmd->add_option("--max-iterations", fit.max_iterations, "Simplex iterations per run")->check(CLI::PositiveNumber);
    fitcmd->add_option("--restarts", fit.restarts, "Simplex restarts")->check(CLI::NonNegativeNumber);

    CoherenceArgs coh;
    auto* cohcmd = app.add_subcommand("coherence-time", "Collisional coherence time versus time of flight");
    cohcmd->add_option("--pressure", coh.pressure, "Gas pressure")->capture_default_str();
    cohcmd->add_option("--temperature", coh.temperature, "Gas temperature")->capture_default_str();
    cohcmd->add_option("--cross-section", coh.cross_section, "Total cross section")->capture_default_str();
    cohcmd->add_option("--gas-mass", coh.gas_mass, "Mass of a gas molecule")->capture_default_str();
    cohcmd->add_option("--path-length", coh.path_length, "Flight path length")->required();
    cohcmd->add_option("--wavelength", coh.wavelength, "de Broglie wavelength")->required();
    cohcmd->add_option("--particle-mass", coh.particle_mass, "Particle mass (default: neutron)");

    SolveArgs solve;
    auto* solvecmd = app.add_subcommand("grating-solve", "Lobe momenta from the split-step solver");
    solvecmd->add_option("-c,--config", solve.config, "Experiment configuration (YAML)")->required();
    solvecmd->add_option("--wavelength", solve.wavelengths, "Wavelength(s) to solve at");
    solvecmd->add_option("--sweep", solve.sweep, "Wavelength range 'lo:hi'");
    solvecmd->add_option("--steps", solve.steps, "Points in the sweep")->capture_default_str();
    solvecmd->add_option("--points", solve.points, "Grid points (power of two)")->capture_default_str();
    solvecmd->add_option("--domain-factor", solve.domain_factor, "Domain width over setup size")->capture_default_str();
    solvecmd->add_flag("--from-source", solve.from_source, "Fly the source packet numerically to the grating");
    solvecmd->add_option("-o,--output", solve.output, "CSV output (default: stdout)");

    VisibilityArgs vis;
    auto* viscmd = app.add_subcommand("visibility", "Fringe visibility of a simulated or stored pattern");
    viscmd->add_option("-c,--config", vis.config, "Experiment configuration (YAML)");
    viscmd->add_option("-m,--model", vis.model, "Grating model: one or two")->check(CLI::IsMember({"one", "two"}));
    viscmd->add_option("-p,--pattern", vis.pattern, "Pattern CSV written by simulate");
    viscmd->add_option("-w,--window", vis.window, "Window 'lo:hi' (default: central fringe)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail("usage", e.what(), usage);
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*fitcmd) return run_fit(fit);
        if (*cohcmd) return run_coherence(coh);
        if (*solvecmd) return run_grating_solve(solve);
        if (*viscmd) return run_visibility(vis);
    } catch (const CheckFailure& e) {
        return fail("check", e.what(), check_failed);
    } catch (const ConfigError& e) {
        return fail("config", e.what(), bad_input);
    } catch (const UnitError& e) {
        return fail("config", e.what(), bad_input);
    } catch (const NumericalError& e) {
        return fail("numerical", e.what(), numerical);
    } catch (const InvalidPacket& e) {
        return fail("numerical", e.what(), numerical);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), internal);
    }
    return internal;
}
