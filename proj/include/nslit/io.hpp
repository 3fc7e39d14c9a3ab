#pragma once

#include <string>

#include "nslit/fit.hpp"
#include "nslit/pattern.hpp"

namespace nslit {

/// Shortest text that reads back to the same double.
std::string format_number(double v);

/// Two-column CSV "position_um,intensity".
void write_pattern_csv(const IntensityPattern& pattern, const std::string& path);
std::string pattern_csv(const IntensityPattern& pattern);

/// Reads "position_um,<counts|intensity>[,sigma]" with a header line.
/// Positions are converted to meters and must be strictly increasing.
Dataset load_data_csv(const std::string& path);
Dataset parse_data_csv(const std::string& text, const std::string& source = "<data>");

void write_text_file(const std::string& path, const std::string& contents);

nlohmann::json fit_result_json(const FitResult& result, double mass);

/// "position_um,data,prediction,residual".
std::string fit_residuals_csv(const Dataset& data, std::span<const double> prediction);

}  // namespace nslit
