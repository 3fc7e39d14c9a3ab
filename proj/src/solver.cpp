#include "nslit/solver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "nslit/beam.hpp"
#include "nslit/constants.hpp"
#include "nslit/errors.hpp"

namespace nslit {
namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// In-place FFT plan pair over a caller-owned buffer. FFTW planning is not
// thread-safe, execution is.
class FftPair {
public:
    explicit FftPair(std::vector<cplx>& buffer) : n_(buffer.size()) {
        auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
        std::lock_guard lock(planner_mutex());
        forward_ = fftw_plan_dft_1d(static_cast<int>(n_), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_1d(static_cast<int>(n_), data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftPair() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    void forward() { fftw_execute(forward_); }
    // Unnormalized; caller divides by n.
    void backward() { fftw_execute(backward_); }

private:
    std::size_t n_;
    fftw_plan forward_;
    fftw_plan backward_;
};

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

std::vector<double> wave_numbers(std::size_t n, double dx) {
    std::vector<double> k(n);
    const double dk = 2.0 * constants::pi / (static_cast<double>(n) * dx);
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<double>(j);
        k[j] = j < n / 2 ? jj * dk : (jj - static_cast<double>(n)) * dk;
    }
    k[n / 2] = 0.0;  // Nyquist mode has no well-defined sign
    return k;
}

double mean_wave_number(std::vector<cplx> psi, double dx) {
    const std::size_t n = psi.size();
    const auto k = wave_numbers(n, dx);
    FftPair fft(psi);
    fft.forward();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = std::norm(psi[j]);
        num += k[j] * w;
        den += w;
    }
    if (!(den > 0.0)) throw NumericalError("empty lobe");
    return num / den;
}

}  // namespace

double GridState::norm_squared() const {
    double s = 0.0;
    for (const auto& v : psi) s += std::norm(v);
    return s * dx();
}

double GridState::centroid() const {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double w = std::norm(psi[i]);
        num += w * position(i);
        den += w;
    }
    return num / den;
}

double GridState::spread() const {
    const double mu = centroid();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double w = std::norm(psi[i]);
        const double d = position(i) - mu;
        num += w * d * d;
        den += w;
    }
    return std::sqrt(num / den);
}

GridState make_grid(double x_min, double x_max, std::size_t points) {
    if (!is_power_of_two(points)) throw ConfigError("grid point count must be a power of two");
    if (!(x_max > x_min)) throw ConfigError("grid domain must have x_max > x_min");
    GridState g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.psi.assign(points, cplx{0.0, 0.0});
    return g;
}

GridState sample(const PacketSuperposition& state, double x_min, double x_max, std::size_t points) {
    GridState g = make_grid(x_min, x_max, points);
    for (std::size_t i = 0; i < points; ++i) g.psi[i] = state.evaluate(g.position(i));
    return g;
}

GridState sample(const ChirpedGaussian& packet, double x_min, double x_max, std::size_t points) {
    PacketSuperposition s;
    s.add(1.0, packet);
    return sample(s, x_min, x_max, points);
}

double l2_distance(const GridState& grid, const PacketSuperposition& exact) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) s += std::norm(grid.psi[i] - exact.evaluate(grid.position(i)));
    return std::sqrt(s * grid.dx());
}

GridState evolve_free(GridState state, double time, double mass, int steps, const EvolveOptions& options) {
    if (time < 0.0) throw ConfigError("evolution time must be >= 0");
    if (!(mass > 0.0)) throw ConfigError("mass must be > 0");
    if (steps < 1) throw ConfigError("step count must be >= 1");
    if (!is_power_of_two(state.size())) throw ConfigError("grid point count must be a power of two");
    if (time == 0.0) return state;

    const std::size_t n = state.size();
    const double dx = state.dx();
    const double dt = time / steps;
    const auto k = wave_numbers(n, dx);
    std::vector<cplx> kinetic(n);
    for (std::size_t j = 0; j < n; ++j) {
        kinetic[j] = std::polar(1.0 / static_cast<double>(n), -constants::hbar * k[j] * k[j] * dt / (2.0 * mass));
    }
    // k[n/2] was zeroed for momentum sums; the propagator needs the true Nyquist value.
    {
        const double kn = constants::pi / dx;
        kinetic[n / 2] = std::polar(1.0 / static_cast<double>(n), -constants::hbar * kn * kn * dt / (2.0 * mass));
    }

    const auto ramp_points = static_cast<std::size_t>(std::ceil(options.absorber_fraction * static_cast<double>(n)));
    std::vector<double> absorber(n, 1.0);
    for (std::size_t i = 0; i < ramp_points && i < n / 2; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(ramp_points);
        const double m = 0.5 * (1.0 - std::cos(constants::pi * u));
        absorber[i] = m;
        absorber[n - 1 - i] = m;
    }

    auto check_edges = [&] {
        double peak = 0.0, edge = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = std::abs(state.psi[i]);
            peak = std::max(peak, a);
            if (i < ramp_points || i >= n - ramp_points) edge = std::max(edge, a);
        }
        if (peak > 0.0 && edge > options.edge_tolerance * peak) {
            throw NumericalError("boundary contamination: amplitude near the domain edge is " +
                                 std::to_string(edge / peak) + " of the peak");
        }
    };

    FftPair fft(state.psi);
    check_edges();
    for (int s = 0; s < steps; ++s) {
        fft.forward();
        for (std::size_t j = 0; j < n; ++j) state.psi[j] *= kinetic[j];
        fft.backward();
        check_edges();
        if (ramp_points > 0) {
            double before = 0.0, after = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (absorber[i] == 1.0) continue;
                before += std::norm(state.psi[i]);
                state.psi[i] *= absorber[i];
                after += std::norm(state.psi[i]);
            }
            state.absorbed_norm += (before - after) * dx;
        }
    }
    state.time += time;
    return state;
}

GridState pass_grating(GridState state, const BarrierSpec& barrier) {
    barrier.geometry.validate();
    const double before = state.norm_squared();
    for (std::size_t i = 0; i < state.size(); ++i) {
        state.psi[i] *= sharp_transmission(barrier.geometry, state.position(i));
    }
    const double after = state.norm_squared();
    if (!(after >= 1e-12 * before)) {
        throw NumericalError("degenerate grating passage: transmitted norm below 1e-12 of input");
    }
    return state;
}

LobeMomenta lobe_momenta(const GridState& state, const GratingGeometry& geom) {
    const double bar_lo = geom.slit_center(1) + 0.5 * geom.aperture1;
    const double bar_hi = geom.slit_center(2) - 0.5 * geom.aperture2;
    double peak = 0.0, bar = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double a = std::abs(state.psi[i]);
        const double x = state.position(i);
        peak = std::max(peak, a);
        if (x > bar_lo && x < bar_hi) bar = std::max(bar, a);
    }
    if (bar > 0.01 * peak) throw NumericalError("lobes are not separable at x = 0");

    std::vector<cplx> left(state.size()), right(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        (state.position(i) < 0.0 ? left : right)[i] = state.psi[i];
    }
    LobeMomenta m;
    m.momentum1 = constants::hbar * mean_wave_number(std::move(left), state.dx());
    m.momentum2 = constants::hbar * mean_wave_number(std::move(right), state.dx());
    return m;
}

GratingSolveResult solve_grating(const ExperimentConfig& config, double wavelength,
                                 const GratingSolveOptions& options) {
    config.grating.validate();
    const FlightGeometry flight = flight_geometry(config.beam, wavelength, config.mass);
    double half = 0.5 * options.domain_factor * config.grating.setup_size();
    GridState state;
    if (options.from_source) {
        // |psi|^2 of the evolved source packet has std s; keep its tail off the absorber.
        half = std::max(half, 12.0 * flight.width);
        state = sample(source_packet(config.beam, 0.0), -half, half, options.points);
        state = evolve_free(std::move(state), flight.flight_time, config.mass, 1);
    } else {
        state = sample(incoming_packet(config.beam, 0.0, wavelength), -half, half, options.points);
    }
    const double before = state.norm_squared();
    const GridState passed = pass_grating(std::move(state), BarrierSpec{config.grating});
    GratingSolveResult r;
    r.wavelength = wavelength;
    r.momenta = lobe_momenta(passed, config.grating);
    r.absorbed_fraction = 1.0 - passed.norm_squared() / before;
    return r;
}

}  // namespace nslit
