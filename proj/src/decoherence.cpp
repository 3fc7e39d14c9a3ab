#include "nslit/decoherence.hpp"

#include <cmath>

#include "nslit/errors.hpp"

namespace nslit {

void EnvironmentConfig::validate() const {
    if (!(pressure > 0.0)) throw ConfigError("environment.pressure: must be > 0");
    if (!(temperature > 0.0)) throw ConfigError("environment.temperature: must be > 0");
    if (!(cross_section > 0.0)) throw ConfigError("environment.cross_section: must be > 0");
    if (!(gas_mass > 0.0)) throw ConfigError("environment.gas_mass: must be > 0");
}

double coherence_time(const EnvironmentConfig& env) {
    env.validate();
    return 1.0 / (env.pressure * env.cross_section) *
           std::sqrt(8.0 / (constants::pi * constants::boltzmann * env.temperature * env.gas_mass));
}

double kinetic_collision_time(const EnvironmentConfig& env) {
    env.validate();
    const double kt = constants::boltzmann * env.temperature;
    const double density = env.pressure / kt;
    const double mean_speed = std::sqrt(8.0 * kt / (constants::pi * env.gas_mass));
    return 1.0 / (density * env.cross_section * mean_speed);
}

CoherenceAudit coherence_audit(const EnvironmentConfig& env) {
    CoherenceAudit audit;
    audit.literal_value = coherence_time(env);
    audit.kinetic_estimate = kinetic_collision_time(env);
    const double ratio = audit.literal_value / audit.reference_value;
    audit.literal_matches_reference = ratio > 0.5 && ratio < 2.0;
    return audit;
}

double time_of_flight(double path_length, double wavelength, double mass) {
    if (!(path_length > 0.0)) throw ConfigError("path length must be > 0");
    if (!(wavelength > 0.0)) throw ConfigError("wavelength must be > 0");
    if (!(mass > 0.0)) throw ConfigError("mass must be > 0");
    return mass * path_length * wavelength / (2.0 * constants::pi * constants::hbar);
}

CoherenceMargin coherence_margin(const EnvironmentConfig& env, double path_length, double wavelength,
                                 double mass) {
    CoherenceMargin m;
    m.coherence_time = coherence_time(env);
    m.time_of_flight = time_of_flight(path_length, wavelength, mass);
    m.ratio = m.coherence_time / m.time_of_flight;
    m.verdict = m.ratio >= negligible_decoherence_ratio ? "decoherence negligible"
                                                         : "decoherence potentially relevant";
    return m;
}

}  // namespace nslit
