#pragma once

#include <string>

#include "nslit/constants.hpp"

namespace nslit {

struct EnvironmentConfig {
    double pressure = constants::standard_atmosphere;  // Pa
    double temperature = 295.0;                        // K
    double cross_section = 1e-27;                      // m^2
    double gas_mass = constants::mean_air_molecule_mass;

    void validate() const;
    bool operator==(const EnvironmentConfig&) const = default;
};

/// Collisional coherence time
///
///     tau = 1 / (P sigma_tot) * sqrt(8 / (pi k_B Theta m_gas))
///
/// evaluated literally with all inputs in SI. With P in Pa the result
/// carries units s^3 kg^-2 m^-2, not seconds; see coherence_audit().
double coherence_time(const EnvironmentConfig& env);

/// Mean time between collisions from kinetic theory, 1 / (n sigma v_mean)
/// with n = P / (k_B Theta) and v_mean = sqrt(8 k_B Theta / (pi m_gas)).
/// Reported next to the literal value for comparison only.
double kinetic_collision_time(const EnvironmentConfig& env);

inline constexpr double reference_coherence_time = 140.0;  // s, for 1 atm / room T / 1e-27 m^2
inline constexpr double reference_time_of_flight = 0.023;  // s

struct CoherenceAudit {
    double literal_value = 0.0;
    std::string literal_units = "s^3 kg^-2 m^-2";
    double kinetic_estimate = 0.0;  // s
    double reference_value = reference_coherence_time;
    bool literal_matches_reference = false;  // within a factor of 2
};

CoherenceAudit coherence_audit(const EnvironmentConfig& env);

/// T = m L lambda / (2 pi hbar).
double time_of_flight(double path_length, double wavelength, double mass);

struct CoherenceMargin {
    double coherence_time = 0.0;
    double time_of_flight = 0.0;
    double ratio = 0.0;
    std::string verdict;
};

inline constexpr double negligible_decoherence_ratio = 100.0;

/// Ratio tau_coh / T and the verdict "decoherence negligible" (ratio >= 100)
/// or "decoherence potentially relevant".
CoherenceMargin coherence_margin(const EnvironmentConfig& env, double path_length, double wavelength,
                                 double mass);

}  // namespace nslit
