#include "nslit/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace nslit {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
    }
    return out;
}

bool parse_double(const std::string& s, double& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::string pattern_csv(const IntensityPattern& pattern) {
    std::string out = "position_um,intensity\n";
    for (std::size_t i = 0; i < pattern.positions.size(); ++i) {
        out += format_number(pattern.positions[i] * 1e6);
        out += ',';
        out += format_number(pattern.values[i]);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << contents;
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

void write_pattern_csv(const IntensityPattern& pattern, const std::string& path) {
    write_text_file(path, pattern_csv(pattern));
}

Dataset parse_data_csv(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    bool has_sigma = false;
    Dataset data;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_fields(line);
        if (!header_seen) {
            if (fields.size() < 2 || fields.size() > 3 || fields[0] != "position_um" ||
                (fields[1] != "counts" && fields[1] != "intensity") ||
                (fields.size() == 3 && fields[2] != "sigma")) {
                throw ConfigError(source + ":" + std::to_string(line_no) +
                                  ": expected header 'position_um,counts[,sigma]'");
            }
            has_sigma = fields.size() == 3;
            header_seen = true;
            continue;
        }
        const std::size_t expected = has_sigma ? 3 : 2;
        double x = 0, c = 0, s = 0;
        if (fields.size() != expected || !parse_double(fields[0], x) || !parse_double(fields[1], c) ||
            (has_sigma && !parse_double(fields[2], s))) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": malformed row");
        }
        const double pos = x / 1e6;
        if (!data.positions.empty() && !(pos > data.positions.back())) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": positions must be strictly increasing");
        }
        data.positions.push_back(pos);
        data.counts.push_back(c);
        if (has_sigma) data.sigmas.push_back(s);
    }
    if (!header_seen) throw ConfigError(source + ": missing header line");
    data.validate();
    return data;
}

Dataset load_data_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open data file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_data_csv(buf.str(), path);
}

nlohmann::json fit_result_json(const FitResult& r, double mass) {
    nlohmann::json j;
    j["model"] = r.model;
    j["converged"] = r.converged;
    j["message"] = r.message;
    j["iterations"] = r.iterations;
    j["evaluations"] = r.evaluations;
    j["runs"] = r.runs;
    j["residual_sum_of_squares"] = r.residual_sum_of_squares;
    j["initial_objective"] = r.initial_objective;
    auto& p = j["parameters"];
    if (r.model == "two") {
        p["p1"] = {{"value", r.params.momentum1}, {"unit", "kg*m/s"}, {"velocity_m_per_s", r.params.momentum1 / mass}};
        p["p2"] = {{"value", r.params.momentum2}, {"unit", "kg*m/s"}, {"velocity_m_per_s", r.params.momentum2 / mass}};
    }
    p["k_spread"] = {{"value", r.params.k_spread}, {"unit", "1/m"}};
    p["scale"] = {{"value", r.params.scale}, {"unit", "1"}};
    p["background"] = {{"value", r.params.background}, {"unit", "counts"}};
    return j;
}

std::string fit_residuals_csv(const Dataset& data, std::span<const double> prediction) {
    std::string out = "position_um,data,prediction,residual\n";
    for (std::size_t i = 0; i < data.positions.size(); ++i) {
        out += format_number(data.positions[i] * 1e6) + ',' + format_number(data.counts[i]) + ',' +
               format_number(prediction[i]) + ',' + format_number(data.counts[i] - prediction[i]) + '\n';
    }
    return out;
}

}  // namespace nslit
