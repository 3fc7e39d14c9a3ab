#include "nslit/fit.hpp"

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

namespace nslit {
namespace {

constexpr double velocity_unit = 1e-3;  // internal momentum coordinate is p/m in mm/s
constexpr double k_reference = 1000.0;  // internal k coordinate is ln(k / 1000 m^-1)

// Maps an unconstrained coordinate u onto [lo, hi] (either end may be infinite).
struct BoxTransform {
    double lo = -INFINITY;
    double hi = INFINITY;

    [[nodiscard]] double to_external(double u) const {
        const bool has_lo = std::isfinite(lo), has_hi = std::isfinite(hi);
        if (has_lo && has_hi) return lo + 0.5 * (hi - lo) * (1.0 + std::sin(u));
        if (has_lo) return lo - 1.0 + std::sqrt(u * u + 1.0);
        if (has_hi) return hi + 1.0 - std::sqrt(u * u + 1.0);
        return u;
    }
    [[nodiscard]] double to_internal(double w) const {
        const bool has_lo = std::isfinite(lo), has_hi = std::isfinite(hi);
        if (has_lo && has_hi) return std::asin(std::clamp(2.0 * (w - lo) / (hi - lo) - 1.0, -1.0, 1.0));
        if (has_lo) return std::sqrt(std::max(0.0, (w - lo + 1.0) * (w - lo + 1.0) - 1.0));
        if (has_hi) return std::sqrt(std::max(0.0, (hi - w + 1.0) * (hi - w + 1.0) - 1.0));
        return w;
    }
    [[nodiscard]] double step_for(double u, double step_w) const {
        const double h = 1e-6;
        const double slope = std::abs(to_external(u + h) - to_external(u - h)) / (2.0 * h);
        const double s = step_w / std::max(slope, 1e-3);
        return std::isfinite(lo) && std::isfinite(hi) ? std::min(s, 0.5) : s;
    }
};

double log_k(double k) { return k > 0.0 ? std::log(k / k_reference) : -INFINITY; }

struct LinearSolution {
    double scale = 0.0;
    double background = 0.0;
    double rss = 0.0;
};

LinearSolution solve_linear(const Dataset& data, std::span<const double> model) {
    double sw = 0, swi = 0, swii = 0, swy = 0, swiy = 0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        const double w = data.sigmas.empty() ? 1.0 : 1.0 / (data.sigmas[i] * data.sigmas[i]);
        sw += w;
        swi += w * model[i];
        swii += w * model[i] * model[i];
        swy += w * data.counts[i];
        swiy += w * model[i] * data.counts[i];
    }
    LinearSolution s;
    const double det = sw * swii - swi * swi;
    if (det > 1e-14 * sw * swii) {
        s.scale = (sw * swiy - swi * swy) / det;
        s.background = (swy - s.scale * swi) / sw;
    }
    if (!(s.scale > 0.0)) {
        s.scale = 0.0;
        s.background = swy / sw;
    }
    std::vector<double> pred(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) pred[i] = s.scale * model[i] + s.background;
    s.rss = weighted_rss(data, pred);
    return s;
}

struct Objective {
    std::function<double(const gsl_vector*)> f;
    static double call(const gsl_vector* x, void* self) { return static_cast<Objective*>(self)->f(x); }
};

struct SimplexRun {
    std::vector<double> u;
    double value = INFINITY;
    bool converged = false;
    int iterations = 0;
};

SimplexRun run_simplex(Objective& objective, const std::vector<double>& start,
                       const std::vector<double>& steps, const FitOptions& options) {
    const std::size_t n = start.size();
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(n), &gsl_vector_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> ss(gsl_vector_alloc(n), &gsl_vector_free);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_vector_set(x.get(), i, start[i]);
        gsl_vector_set(ss.get(), i, steps[i]);
    }
    gsl_multimin_function fn{&Objective::call, n, &objective};
    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), &gsl_multimin_fminimizer_free);
    gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), ss.get());

    SimplexRun run;
    for (run.iterations = 1; run.iterations <= options.max_iterations; ++run.iterations) {
        if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
        const double size = gsl_multimin_fminimizer_size(s.get());
        if (gsl_multimin_test_size(size, options.simplex_tolerance) == GSL_SUCCESS) {
            run.converged = true;
            break;
        }
    }
    run.iterations = std::min(run.iterations, options.max_iterations);
    run.u.resize(n);
    for (std::size_t i = 0; i < n; ++i) run.u[i] = gsl_vector_get(s->x, i);
    run.value = s->fval;
    return run;
}

}  // namespace

void Dataset::validate() const {
    if (positions.empty()) throw ConfigError("dataset is empty");
    if (counts.size() != positions.size()) throw ConfigError("dataset: positions and counts differ in length");
    if (!sigmas.empty() && sigmas.size() != positions.size()) {
        throw ConfigError("dataset: sigma column length differs from positions");
    }
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (i > 0 && !(positions[i] > positions[i - 1])) {
            throw ConfigError("dataset: positions must be strictly increasing");
        }
        if (counts[i] < 0.0) throw ConfigError("dataset: counts must be >= 0");
        if (!sigmas.empty() && !(sigmas[i] > 0.0)) throw ConfigError("dataset: sigma must be > 0");
    }
}

ExperimentConfig with_parameters(const ExperimentConfig& config, GratingModel model,
                                 const FitParameters& params) {
    ExperimentConfig c = config;
    c.beam.k_spread = params.k_spread;
    if (model == GratingModel::two) c.model_two = {params.momentum1, params.momentum2};
    return c;
}

namespace {

std::vector<double> raw_model(const ExperimentConfig& config, GratingModel model,
                              std::span<const double> positions) {
    const auto grid = screen_grid(config);
    if (positions.front() < grid.front() || positions.back() > grid.back()) {
        throw ConfigError("data positions extend beyond the screen grid");
    }
    const IntensityPattern pattern = intensity_total(config, ModelSpec{model, config.model_two}, grid);
    struct SplineDeleter {
        void operator()(gsl_spline* s) const { gsl_spline_free(s); }
    };
    struct AccelDeleter {
        void operator()(gsl_interp_accel* a) const { gsl_interp_accel_free(a); }
    };
    std::unique_ptr<gsl_spline, SplineDeleter> spline(gsl_spline_alloc(gsl_interp_cspline, grid.size()));
    std::unique_ptr<gsl_interp_accel, AccelDeleter> accel(gsl_interp_accel_alloc());
    gsl_spline_init(spline.get(), grid.data(), pattern.values.data(), grid.size());
    std::vector<double> out(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        out[i] = gsl_spline_eval(spline.get(), positions[i], accel.get());
    }
    return out;
}

}  // namespace

std::vector<double> predict(const FitParameters& params, const ExperimentConfig& config,
                            GratingModel model, std::span<const double> positions) {
    if (positions.empty()) return {};
    const auto raw = raw_model(with_parameters(config, model, params), model, positions);
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = params.scale * raw[i] + params.background;
    return out;
}

double weighted_rss(const Dataset& data, std::span<const double> predicted) {
    double rss = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double r = data.counts[i] - predicted[i];
        const double w = data.sigmas.empty() ? 1.0 : 1.0 / (data.sigmas[i] * data.sigmas[i]);
        rss += w * r * r;
    }
    return rss;
}

FitResult fit_model(const Dataset& data, const ExperimentConfig& config, GratingModel model,
                    const FitParameters& initial, const FitBounds& bounds, const FitOptions& options) {
    data.validate();
    config.validate();
    if (!(initial.k_spread > 0.0)) throw ConfigError("initial k_spread must be > 0");
    if (initial.k_spread < bounds.k_spread.lo || initial.k_spread > bounds.k_spread.hi) {
        throw ConfigError("initial k_spread outside its bounds");
    }
    if (model == GratingModel::two) {
        if (initial.momentum1 < bounds.momentum1.lo || initial.momentum1 > bounds.momentum1.hi ||
            initial.momentum2 < bounds.momentum2.lo || initial.momentum2 > bounds.momentum2.hi) {
            throw ConfigError("initial momenta outside their bounds");
        }
    }

    const double vel = config.mass * velocity_unit;
    // Coordinates: [ln k] or [p1/m, p2/m, ln k], each behind a box transform.
    std::vector<BoxTransform> transforms;
    std::vector<double> start_w, step_w;
    if (model == GratingModel::two) {
        transforms.push_back({bounds.momentum1.lo / vel, bounds.momentum1.hi / vel});
        transforms.push_back({bounds.momentum2.lo / vel, bounds.momentum2.hi / vel});
        start_w.push_back(initial.momentum1 / vel);
        start_w.push_back(initial.momentum2 / vel);
        step_w.push_back(0.5);
        step_w.push_back(0.5);
    }
    transforms.push_back({log_k(bounds.k_spread.lo), log_k(bounds.k_spread.hi)});
    start_w.push_back(log_k(initial.k_spread));
    step_w.push_back(0.3);
    const std::size_t n = transforms.size();

    auto decode = [&](std::span<const double> u) {
        FitParameters p = initial;
        std::size_t i = 0;
        if (model == GratingModel::two) {
            p.momentum1 = transforms[0].to_external(u[0]) * vel;
            p.momentum2 = transforms[1].to_external(u[1]) * vel;
            i = 2;
        }
        p.k_spread = k_reference * std::exp(transforms[i].to_external(u[i]));
        return p;
    };
    auto evaluate_at = [&](const FitParameters& p) {
        return solve_linear(data, raw_model(with_parameters(config, model, p), model, data.positions));
    };

    FitResult result;
    result.model = model_name(model);
    int evaluations = 0;
    Objective objective{[&](const gsl_vector* x) {
        ++evaluations;
        std::vector<double> u(n);
        for (std::size_t i = 0; i < n; ++i) u[i] = gsl_vector_get(x, i);
        const double v = evaluate_at(decode(u)).rss;
        return std::isfinite(v) ? v : 1e300;
    }};

    std::vector<double> u0(n), steps(n);
    for (std::size_t i = 0; i < n; ++i) {
        u0[i] = transforms[i].to_internal(start_w[i]);
        steps[i] = transforms[i].step_for(u0[i], step_w[i]);
    }
    result.initial_objective = evaluate_at(decode(u0)).rss;

    SimplexRun best = run_simplex(objective, u0, steps, options);
    result.iterations = best.iterations;
    result.runs = 1;
    bool converged = best.converged;
    for (int r = 1; r <= options.restarts; ++r) {
        std::vector<double> start = best.u;
        for (std::size_t i = 0; i < n; ++i) {
            const double sign = ((static_cast<std::size_t>(r) + i) % 2 == 0) ? 1.0 : -1.0;
            start[i] += sign * 0.5 * steps[i];
        }
        SimplexRun run = run_simplex(objective, start, steps, options);
        result.iterations += run.iterations;
        ++result.runs;
        if (run.value < best.value) {
            // The restart found a lower point, so the previous run's stop was premature.
            converged = run.converged;
            best = std::move(run);
        } else {
            converged = converged || run.converged;
        }
    }

    FitParameters p = decode(best.u);
    const LinearSolution lin = evaluate_at(p);
    p.scale = lin.scale;
    p.background = lin.background;
    result.params = p;
    result.residual_sum_of_squares = lin.rss;
    result.evaluations = evaluations;
    result.converged = converged && lin.scale > 0.0;
    if (!converged) {
        result.message = "simplex did not converge after " + std::to_string(result.runs) + " runs";
    } else if (!(lin.scale > 0.0)) {
        result.message = "best fit has non-positive scale";
    } else {
        result.message = "converged";
    }
    return result;
}

}  // namespace nslit
