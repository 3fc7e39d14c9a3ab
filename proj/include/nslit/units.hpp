#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nslit {

enum class Dimension {
    length,
    inverse_length,
    speed,
    momentum,
    time,
    mass,
    pressure,
    temperature,
    area,
};

std::string_view dimension_name(Dimension dim);

class UnitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses "<number> <unit>" (e.g. "20 um", "4976 1/m", "-3.4 mm/s") into SI.
/// A bare number without a unit is rejected, as is a unit of the wrong
/// dimension.
double parse_quantity(std::string_view text, Dimension expected);

/// Momentum given either as a velocity p/m ("-3.4 mm/s") or directly in
/// kg*m/s.
double parse_momentum(std::string_view text, double mass);

/// Formats an SI value in the canonical unit for its dimension, such that
/// parse_quantity(format_quantity(v, d), d) == v exactly.
std::string format_quantity(double si_value, Dimension dim);

}  // namespace nslit
