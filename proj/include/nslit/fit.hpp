#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nslit/pattern.hpp"

namespace nslit {

struct Dataset {
    std::vector<double> positions;  // m, strictly increasing
    std::vector<double> counts;
    std::vector<double> sigmas;  // empty, or one uncertainty per point

    void validate() const;
};

/// Parameters of the fitted prediction scale * I(x) + background.
/// Momenta are only used by model two.
struct FitParameters {
    double momentum1 = 0.0;  // kg m/s
    double momentum2 = 0.0;  // kg m/s
    double k_spread = 5000.0;  // 1/m
    double scale = 1.0;
    double background = 0.0;
};

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

/// Box constraints on the nonlinear parameters. k_spread is always kept > 0.
struct FitBounds {
    Interval momentum1;
    Interval momentum2;
    Interval k_spread{0.0, std::numeric_limits<double>::infinity()};
};

struct FitOptions {
    int max_iterations = 2000;  // per simplex run
    int restarts = 3;
    double simplex_tolerance = 1e-9;
};

struct FitResult {
    std::string model;
    FitParameters params;
    double residual_sum_of_squares = 0.0;
    double initial_objective = 0.0;
    bool converged = false;
    int iterations = 0;
    int evaluations = 0;
    int runs = 0;
    std::string message;
};

/// Model intensity with the parameters substituted into the config.
ExperimentConfig with_parameters(const ExperimentConfig& config, GratingModel model,
                                 const FitParameters& params);

/// scale * I(x) + background at `positions`, cubic-interpolated from the
/// configured screen grid. Positions must lie inside the grid.
std::vector<double> predict(const FitParameters& params, const ExperimentConfig& config,
                            GratingModel model, std::span<const double> positions);

/// Weighted residual sum of squares of `predicted` against the data.
double weighted_rss(const Dataset& data, std::span<const double> predicted);

/// Weighted least squares fit. The nonlinear parameters (momenta for model
/// two, and k_spread) are searched by a restarted Nelder-Mead simplex;
/// scale and background are solved in closed form at every step.
/// `initial.scale` and `initial.background` are ignored.
FitResult fit_model(const Dataset& data, const ExperimentConfig& config, GratingModel model,
                    const FitParameters& initial, const FitBounds& bounds = {},
                    const FitOptions& options = {});

}  // namespace nslit
