#include "doctest.h"

#include <random>

#include "nslit/beam.hpp"
#include "nslit/constants.hpp"
#include "nslit/gaussian.hpp"
#include "nslit/solver.hpp"
#include "test_support.hpp"

using namespace nslit;
using nslit::test::rel_err;

TEST_CASE("evaluate") {
    ChirpedGaussian p;  // amplitude 1, center 0, alpha 1, beta 0, kappa 0
    CHECK(evaluate(p, 0.0) == cplx(1.0, 0.0));
    CHECK(evaluate(p, 1.0).real() == doctest::Approx(0.36787944117144233).epsilon(1e-15));

    p.beta = 1.0;
    // mpmath: exp(-(1 - i)) to 30 digits
    const cplx expected(0.198766110346412940628803191344, 0.309559875653112198443912824915);
    CHECK(rel_err(evaluate(p, 1.0), expected) < 1e-15);
}

TEST_CASE("norm_squared") {
    const double sigma = 7e-6;
    CHECK(norm_squared(normalized_gaussian(0.0, sigma)) == doctest::Approx(1.0).epsilon(1e-14));

    ChirpedGaussian p;
    p.alpha = constants::pi / 2.0;
    CHECK(norm_squared(p) == doctest::Approx(1.0).epsilon(1e-15));

    SUBCASE("chirp does not change the norm") {
        ChirpedGaussian q;
        q.alpha = 1.0;
        q.beta = 7.0;
        const double quad = test::trapezoid([&](double x) { return std::norm(evaluate(q, x)); }, -12.0, 12.0, 20000);
        CHECK(norm_squared(q) == doctest::Approx(std::sqrt(constants::pi / 2.0)).epsilon(1e-14));
        CHECK(quad == doctest::Approx(norm_squared(q)).epsilon(1e-12));
    }

    SUBCASE("rejects alpha <= 0") {
        ChirpedGaussian bad;
        bad.alpha = 0.0;
        CHECK_THROWS_AS(norm_squared(bad), InvalidPacket);
        bad.alpha = -1.0;
        CHECK_THROWS_AS(norm_squared(bad), InvalidPacket);
    }
}

TEST_CASE("overlap matches quadrature") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = test::random_packet(rng);
        const auto b = test::random_packet(rng);
        const cplx quad = test::trapezoid_c(
            [&](double x) { return std::conj(evaluate(a, x)) * evaluate(b, x); }, -150e-6, 150e-6, 60000);
        CHECK(rel_err(overlap(a, b), quad) < 1e-9);
    }
}

TEST_CASE("multiply_by_real_gaussian") {
    SUBCASE("symmetric product doubles alpha") {
        const double sigma = 3e-6;
        ChirpedGaussian p;
        p.alpha = 0.5 / (sigma * sigma);
        p.center = 4e-6;
        const auto out = multiply_by_real_gaussian(p, p.center, sigma);
        CHECK(out.alpha == doctest::Approx(2.0 * p.alpha).epsilon(1e-15));
        CHECK(out.center == doctest::Approx(p.center).epsilon(1e-15));
        CHECK(out.wave_number == 0.0);
    }

    SUBCASE("incoming packet times slit envelope") {
        const double s = 40e-6, gamma = 1.3, sigma1 = 22e-6 / std::sqrt(12.0), x1 = -63e-6;
        const auto in = chirped_incoming(s, gamma, 0.0, 0.0);
        const auto out = multiply_by_real_gaussian(in, x1, sigma1);
        const double alpha1 = 0.5 / (s * s) + 0.5 / (sigma1 * sigma1);
        CHECK(out.alpha == doctest::Approx(alpha1).epsilon(1e-14));
        CHECK(out.center == doctest::Approx(x1 / (2.0 * alpha1 * sigma1 * sigma1)).epsilon(1e-13));
        const double p1 = constants::hbar * gamma * x1 / (sigma1 * sigma1 + s * s);
        CHECK(constants::hbar * out.wave_number == doctest::Approx(p1).epsilon(1e-13));
    }

    SUBCASE("randomized pointwise against direct product") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            auto p = test::random_packet(rng);
            p.center = 3e-6;
            const double c = (2.0 * u(rng) - 1.0) * 15e-6;
            const double sig = (2.0 + 10.0 * u(rng)) * 1e-6;
            const double w = 0.3 + u(rng);
            const auto out = multiply_by_real_gaussian(p, c, sig, w);
            const double width_p = 1.0 / std::sqrt(2.0 * p.alpha);
            const double lo = std::min(p.center - 5.0 * width_p, c - 5.0 * sig);
            const double hi = std::max(p.center + 5.0 * width_p, c + 5.0 * sig);
            double worst = 0.0;
            for (int i = 0; i <= 1000; ++i) {
                const double x = lo + (hi - lo) * i / 1000.0;
                const cplx direct = evaluate(p, x) * (w / sig) * std::exp(-(x - c) * (x - c) / (2.0 * sig * sig));
                worst = std::max(worst, rel_err(evaluate(out, x), direct));
            }
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("propagate_free") {
    const double m = constants::neutron_mass;

    SUBCASE("zero time is the identity") {
        std::mt19937_64 rng(5);
        const auto p = test::random_packet(rng);
        const auto q = propagate_free(p, 0.0, m);
        CHECK(q.amplitude == p.amplitude);
        CHECK(q.alpha == p.alpha);
        CHECK(q.beta == p.beta);
        CHECK(q.center == p.center);
        CHECK(q.wave_number == p.wave_number);
    }

    SUBCASE("source packet reaches the grating with drift, chirp and width of the flight") {
        BeamConfig beam;
        beam.entrance_slit_width = 20e-6;
        beam.source_distance = 5.0;
        const double lambda = 2e-9, k = 4976.0;
        const auto flight = flight_geometry(beam, lambda, m);
        const auto out = propagate_free(source_packet(beam, k), flight.flight_time, m);
        CHECK(out.center == doctest::Approx(drift_offset(beam, k, lambda)).epsilon(1e-12));
        CHECK(out.beta / out.alpha == doctest::Approx(flight.gamma).epsilon(1e-12));
        CHECK(probability_width(out) == doctest::Approx(flight.width).epsilon(1e-12));
    }

    SUBCASE("matches the split-step solver") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 5; ++trial) {
            const auto p = test::random_packet(rng);
            const double t = 1e-3;
            PacketSuperposition exact;
            exact.add(1.0, propagate_free(p, t, m));
            auto grid = sample(p, -500e-6, 500e-6, 4096);
            grid = evolve_free(std::move(grid), t, m, 1);
            CHECK(l2_distance(grid, exact) < 1e-6 * std::sqrt(norm_squared(p)));
        }
    }

    SUBCASE("rejects negative time and mass") {
        ChirpedGaussian p;
        CHECK_THROWS_AS(propagate_free(p, -1.0, m), InvalidPacket);
        CHECK_THROWS_AS(propagate_free(p, 1.0, 0.0), InvalidPacket);
    }
}

TEST_CASE("propagation invariants on random packets") {
    const double m = constants::neutron_mass;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = test::random_packet(rng);
        const double t1 = 1e-3 * u(rng), t2 = 1e-3 * u(rng);

        const auto whole = propagate_free(p, t1 + t2, m);
        const auto split = propagate_free(propagate_free(p, t1, m), t2, m);
        CHECK(std::abs(norm_squared(whole) - norm_squared(p)) < 1e-12 * norm_squared(p));

        double worst = 0.0;
        const double w = probability_width(whole);
        for (int i = 0; i <= 200; ++i) {
            const double x = whole.center + w * (-4.0 + 8.0 * i / 200.0);
            worst = std::max(worst, rel_err(evaluate(split, x), evaluate(whole, x)));
        }
        CHECK(worst < 1e-10);

        const double drift = constants::hbar * p.wave_number / m * (t1 + t2);
        CHECK(whole.center == doctest::Approx(p.center + drift).epsilon(1e-12));
    }
}

TEST_CASE("superposition is linear") {
    std::mt19937_64 rng(17);
    PacketSuperposition s;
    std::vector<std::pair<cplx, ChirpedGaussian>> terms;
    for (int i = 0; i < 4; ++i) {
        const auto p = test::random_packet(rng);
        const cplx w(0.3 * i + 0.1, -0.2 * i);
        s.add(w, p);
        terms.emplace_back(w, p);
    }
    for (int i = 0; i <= 100; ++i) {
        const double x = -40e-6 + 80e-6 * i / 100.0;
        cplx direct{0.0, 0.0};
        for (const auto& [w, p] : terms) direct += w * evaluate(p, x);
        CHECK(std::abs(s.evaluate(x) - direct) <= 1e-14 * std::abs(direct) + 1e-300);
    }
    const double quad = test::trapezoid([&](double x) { return std::norm(s.evaluate(x)); }, -200e-6, 200e-6, 80000);
    CHECK(s.norm_squared() == doctest::Approx(quad).epsilon(1e-9));
}
