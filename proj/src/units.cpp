#include "nslit/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

#include "nslit/constants.hpp"

namespace nslit {
namespace {

struct UnitEntry {
    std::string_view symbol;
    Dimension dim;
    double to_si;
};

constexpr std::array<UnitEntry, 36> unit_table{{
    {"m", Dimension::length, 1.0},
    {"cm", Dimension::length, 1e-2},
    {"mm", Dimension::length, 1e-3},
    {"um", Dimension::length, 1e-6},
    {"\xc2\xb5m", Dimension::length, 1e-6},  // µm (micro sign)
    {"\xce\xbcm", Dimension::length, 1e-6},  // μm (greek mu)
    {"nm", Dimension::length, 1e-9},
    {"A", Dimension::length, 1e-10},
    {"\xc3\x85", Dimension::length, 1e-10},  // Å
    {"1/m", Dimension::inverse_length, 1.0},
    {"1/mm", Dimension::inverse_length, 1e3},
    {"1/um", Dimension::inverse_length, 1e6},
    {"1/nm", Dimension::inverse_length, 1e9},
    {"m/s", Dimension::speed, 1.0},
    {"mm/s", Dimension::speed, 1e-3},
    {"um/s", Dimension::speed, 1e-6},
    {"kg*m/s", Dimension::momentum, 1.0},
    {"s", Dimension::time, 1.0},
    {"ms", Dimension::time, 1e-3},
    {"us", Dimension::time, 1e-6},
    {"kg", Dimension::mass, 1.0},
    {"g", Dimension::mass, 1e-3},
    {"u", Dimension::mass, 1.66053906660e-27},
    {"Pa", Dimension::pressure, 1.0},
    {"hPa", Dimension::pressure, 1e2},
    {"kPa", Dimension::pressure, 1e3},
    {"mbar", Dimension::pressure, 1e2},
    {"bar", Dimension::pressure, 1e5},
    {"atm", Dimension::pressure, constants::standard_atmosphere},
    {"K", Dimension::temperature, 1.0},
    {"m2", Dimension::area, 1.0},
    {"m^2", Dimension::area, 1.0},
    {"cm2", Dimension::area, 1e-4},
    {"cm^2", Dimension::area, 1e-4},
    {"b", Dimension::area, 1e-28},
    {"barn", Dimension::area, 1e-28},
}};

std::string_view canonical_unit(Dimension dim) {
    switch (dim) {
        case Dimension::length: return "m";
        case Dimension::inverse_length: return "1/m";
        case Dimension::speed: return "m/s";
        case Dimension::momentum: return "kg*m/s";
        case Dimension::time: return "s";
        case Dimension::mass: return "kg";
        case Dimension::pressure: return "Pa";
        case Dimension::temperature: return "K";
        case Dimension::area: return "m2";
    }
    return "";
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string_view dimension_name(Dimension dim) {
    switch (dim) {
        case Dimension::length: return "length";
        case Dimension::inverse_length: return "inverse length";
        case Dimension::speed: return "speed";
        case Dimension::momentum: return "momentum";
        case Dimension::time: return "time";
        case Dimension::mass: return "mass";
        case Dimension::pressure: return "pressure";
        case Dimension::temperature: return "temperature";
        case Dimension::area: return "area";
    }
    return "?";
}

double parse_quantity(std::string_view text, Dimension expected) {
    const std::string_view s = trim(text);
    double number = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), number);
    if (ec != std::errc{} || end == s.data()) {
        throw UnitError("expected '<number> <unit>', got '" + std::string(text) + "'");
    }
    const std::string_view unit = trim(std::string_view(end, s.data() + s.size() - end));
    if (unit.empty()) {
        throw UnitError("missing unit in '" + std::string(text) + "' (expected " +
                        std::string(dimension_name(expected)) + ")");
    }
    for (const auto& entry : unit_table) {
        if (entry.symbol == unit) {
            if (entry.dim != expected) {
                throw UnitError("unit '" + std::string(unit) + "' is a " +
                                std::string(dimension_name(entry.dim)) + ", expected " +
                                std::string(dimension_name(expected)));
            }
            // Dividing by an exact power of ten keeps "20 um" at the nearest double to 2e-5.
            const double inverse = 1.0 / entry.to_si;
            if (entry.to_si < 1.0 && inverse == std::round(inverse)) return number / inverse;
            return number * entry.to_si;
        }
    }
    throw UnitError("unknown unit '" + std::string(unit) + "'");
}

double parse_momentum(std::string_view text, double mass) {
    try {
        return parse_quantity(text, Dimension::speed) * mass;
    } catch (const UnitError&) {
    }
    try {
        return parse_quantity(text, Dimension::momentum);
    } catch (const UnitError& e) {
        throw UnitError(std::string(e.what()) + " (expected speed p/m or momentum)");
    }
}

std::string format_quantity(double si_value, Dimension dim) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", si_value);
    return std::string(buf) + " " + std::string(canonical_unit(dim));
}

}  // namespace nslit
