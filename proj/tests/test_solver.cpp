#include "doctest.h"

#include <random>

#include "desk_setup.hpp"
#include "nslit/beam.hpp"
#include "nslit/constants.hpp"
#include "nslit/errors.hpp"
#include "nslit/solver.hpp"
#include "test_support.hpp"

using namespace nslit;

namespace {

const double m = constants::neutron_mass;

PacketSuperposition single(const ChirpedGaussian& p) {
    PacketSuperposition s;
    s.add(1.0, p);
    return s;
}

}  // namespace

TEST_CASE("grid basics") {
    CHECK_THROWS_AS(make_grid(-1.0, 1.0, 1000), ConfigError);
    CHECK_THROWS_AS(make_grid(1.0, -1.0, 1024), ConfigError);
    const auto g = sample(normalized_gaussian(2e-6, 5e-6), -100e-6, 100e-6, 4096);
    CHECK(g.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.centroid() == doctest::Approx(2e-6).epsilon(1e-10));
    CHECK(g.spread() == doctest::Approx(5e-6).epsilon(1e-10));
}

TEST_CASE("evolve_free") {
    SUBCASE("zero time is the identity") {
        const auto g = sample(normalized_gaussian(0.0, 5e-6), -100e-6, 100e-6, 1024);
        const auto h = evolve_free(g, 0.0, m, 10);
        CHECK(h.psi == g.psi);
    }

    SUBCASE("norm drift over 10^4 steps") {
        // wide domain so the absorber never sees the packet
        const auto g = sample(normalized_gaussian(0.0, 5e-6), -400e-6, 400e-6, 1024);
        const auto h = evolve_free(g, 2e-4, m, 10000);
        CHECK(std::abs(h.norm_squared() - g.norm_squared()) < 1e-10);
        CHECK(h.absorbed_norm < 1e-12);
    }

    SUBCASE("width grows by sqrt(2) after one spreading time") {
        const double sigma = 5e-6;
        // sigma(t) = sigma sqrt(1 + (hbar t / (2 m sigma^2))^2)
        const double t = 2.0 * m * sigma * sigma / constants::hbar;
        const auto g = sample(normalized_gaussian(0.0, sigma), -200e-6, 200e-6, 4096);
        const auto h = evolve_free(g, t, m, 1);
        CHECK(h.spread() / g.spread() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    }

    SUBCASE("centroid drifts at hbar k / m") {
        const double k = 3e5, t = 5e-4;
        const auto g = sample(normalized_gaussian(-50e-6, 5e-6, k), -400e-6, 400e-6, 8192);
        const auto h = evolve_free(g, t, m, 3);
        CHECK(std::abs(h.centroid() - (-50e-6 + constants::hbar * k * t / m)) < g.dx());
    }

    SUBCASE("random packets against the closed form") {
        std::mt19937_64 rng(29);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            const auto p = test::random_packet(rng);
            const double t = 2e-3 * u(rng);
            const auto grid = evolve_free(sample(p, -600e-6, 600e-6, 8192), t, m, 1 + trial % 3);
            const auto exact = single(propagate_free(p, t, m));
            CHECK(l2_distance(grid, exact) < 1e-8 * std::sqrt(norm_squared(p)));
        }
    }

    SUBCASE("boundary contamination is reported") {
        const auto g = sample(normalized_gaussian(0.0, 5e-6), -30e-6, 30e-6, 1024);
        CHECK_THROWS_AS(evolve_free(g, 1e-2, m, 4), NumericalError);
    }
}

TEST_CASE("pass_grating and lobe_momenta") {
    const GratingGeometry geom{22e-6, 22e-6, 104e-6};

    SUBCASE("mask on a constant") {
        auto g = make_grid(-200e-6, 200e-6, 4096);
        for (auto& v : g.psi) v = 1.0;
        const auto h = pass_grating(g, BarrierSpec{geom});
        CHECK(h.norm_squared() == doctest::Approx(44e-6).epsilon(0.01));
        for (std::size_t i = 0; i < h.size(); ++i) {
            CHECK(h.psi[i] == cplx(sharp_transmission(geom, h.position(i)), 0.0));
        }
    }

    SUBCASE("symmetric chirped packet gives opposite lobe momenta") {
        const auto in = chirped_incoming(40e-6, 1.0, 0.0, 0.0);
        const auto h = pass_grating(sample(in, -800e-6, 800e-6, 1 << 14), BarrierSpec{geom});
        const auto lobes = lobe_momenta(h, geom);
        CHECK(lobes.momentum1 < 0.0);
        CHECK(lobes.momentum2 > 0.0);
        CHECK(lobes.momentum1 == doctest::Approx(-lobes.momentum2).epsilon(1e-9));
    }

    SUBCASE("unchirped packet carries no momentum") {
        const auto in = chirped_incoming(40e-6, 0.0, 0.0, 0.0);
        const auto h = pass_grating(sample(in, -800e-6, 800e-6, 1 << 14), BarrierSpec{geom});
        const auto lobes = lobe_momenta(h, geom);
        CHECK(std::abs(lobes.momentum1) < 1e-12 * constants::hbar * 1e6);
        CHECK(std::abs(lobes.momentum2) < 1e-12 * constants::hbar * 1e6);
    }

    SUBCASE("non-separable state is rejected") {
        const auto g = sample(normalized_gaussian(0.0, 40e-6), -800e-6, 800e-6, 4096);
        CHECK_THROWS_AS(lobe_momenta(g, geom), NumericalError);
    }

    SUBCASE("packet far from the slits is rejected") {
        const auto g = sample(normalized_gaussian(600e-6, 5e-6), -800e-6, 800e-6, 4096);
        CHECK_THROWS_AS(pass_grating(g, BarrierSpec{geom}), NumericalError);
    }
}

TEST_CASE("solve_grating") {
    auto config = test::desk_config();
    const double lambda = 2e-9;

    SUBCASE("lobe momenta shrink as the incoming width grows") {
        // gamma fixed at 2, s from 40 to 400 um
        double previous = INFINITY;
        for (double s : {40e-6, 400e-6}) {
            const double s0 = s / std::sqrt(5.0);
            config.beam.entrance_slit_width = s0 * std::sqrt(12.0);
            config.beam.source_distance = 2.0 * 4.0 * constants::pi * s0 * s0 / lambda;
            GratingSolveOptions opt;
            opt.domain_factor = std::max(16.0, 16.0 * s / config.grating.setup_size());
            opt.points = std::size_t{1} << 16;
            const auto r = solve_grating(config, lambda, opt);
            CHECK(std::abs(r.momenta.momentum2) < previous);
            previous = std::abs(r.momenta.momentum2);
        }
    }

    SUBCASE("grid refinement changes the momenta by < 1 %") {
        GratingSolveOptions coarse;
        GratingSolveOptions fine;
        fine.points = coarse.points * 2;
        const auto a = solve_grating(config, lambda, coarse);
        const auto b = solve_grating(config, lambda, fine);
        CHECK(std::abs(a.momenta.momentum2 / b.momenta.momentum2 - 1.0) < 0.01);
        CHECK(a.absorbed_fraction > 0.0);
        CHECK(a.absorbed_fraction < 1.0);
    }

    SUBCASE("numerical source flight agrees with the closed-form incoming packet") {
        GratingSolveOptions direct;
        GratingSolveOptions flown;
        flown.from_source = true;
        flown.points = std::size_t{1} << 16;
        const auto a = solve_grating(config, lambda, direct);
        const auto b = solve_grating(config, lambda, flown);
        CHECK(b.momenta.momentum2 == doctest::Approx(a.momenta.momentum2).epsilon(0.01));
    }

    SUBCASE("far beyond the spreading length the momentum scales as 1 / lambda") {
        const auto a = solve_grating(config, lambda);
        const auto b = solve_grating(config, 1.2 * lambda);
        const double ratio = (b.momenta.momentum2 * 1.2) / a.momenta.momentum2;
        CHECK(ratio == doctest::Approx(1.0).epsilon(0.01));
    }
}
