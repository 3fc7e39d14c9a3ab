#include "doctest.h"

#include <random>

#include "nslit/beam.hpp"
#include "nslit/constants.hpp"
#include "nslit/grating.hpp"
#include "test_support.hpp"

using namespace nslit;
using nslit::test::rel_err;

namespace {

GratingGeometry desk_geometry() { return {22e-6, 22e-6, 104e-6}; }

ChirpedGaussian desk_incoming(double k = 0.0) {
    BeamConfig beam;
    beam.entrance_slit_width = 20e-6;
    beam.source_distance = 5.0;
    return incoming_packet(beam, k, 2e-9);
}

struct Moments {
    double center;
    double momentum;
};

// Centroid of |f|^2 and hbar * <k> from a central-difference phase gradient.
Moments brute_moments(const std::function<cplx(double)>& f, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double w = 0, xw = 0, kw = 0;
    for (int i = 1; i < n; ++i) {
        const double x = lo + h * i;
        const cplx v = f(x);
        const cplx dv = (f(x + h) - f(x - h)) / (2.0 * h);
        w += std::norm(v);
        xw += x * std::norm(v);
        kw += (std::conj(v) * dv).imag();
    }
    return {xw / w, constants::hbar * kw / w};
}

}  // namespace

TEST_CASE("geometry") {
    const auto g = desk_geometry();
    CHECK(g.slit_center(1) == doctest::Approx(-63e-6));
    CHECK(g.slit_center(2) == doctest::Approx(63e-6));
    CHECK(g.slit_sigma(1) == doctest::Approx(22e-6 / std::sqrt(12.0)));
    CHECK(sharp_transmission(g, 63e-6) == 1.0);
    CHECK(sharp_transmission(g, 0.0) == 0.0);
    CHECK_THROWS_AS((GratingGeometry{-1e-6, 1e-6, 1e-6}.validate()), ConfigError);
    CHECK_THROWS_AS((GratingGeometry{1e-6, 1e-6, 0.0}.validate()), ConfigError);
}

TEST_CASE("model one decomposition") {
    const auto geom = desk_geometry();

    SUBCASE("mirror symmetry at k = 0") {
        const auto r = model_one_outgoing(desk_incoming(), geom);
        CHECK(r.slits[0].center == doctest::Approx(-r.slits[1].center).epsilon(1e-14));
        CHECK(r.slits[0].momentum == doctest::Approx(-r.slits[1].momentum).epsilon(1e-14));
        CHECK(r.slits[0].alpha == r.slits[1].alpha);
        CHECK(r.slits[0].momentum < 0.0);
        CHECK(r.slits[1].momentum > 0.0);
    }

    SUBCASE("closed-form slit packets and brute-force moments") {
        BeamConfig beam;
        beam.entrance_slit_width = 20e-6;
        beam.source_distance = 5.0;
        const auto flight = flight_geometry(beam, 2e-9, constants::neutron_mass);
        const auto in = desk_incoming();
        const auto r = model_one_outgoing(in, geom);
        for (int j = 1; j <= 2; ++j) {
            const double sj = geom.slit_sigma(j), xj = geom.slit_center(j), s = flight.width;
            const double alpha = 0.5 / (s * s) + 0.5 / (sj * sj);
            const auto& slit = r.slits[j - 1];
            CHECK(slit.alpha == doctest::Approx(alpha).epsilon(1e-13));
            CHECK(slit.center == doctest::Approx(xj / (2.0 * alpha * sj * sj)).epsilon(1e-13));
            CHECK(slit.momentum ==
                  doctest::Approx(constants::hbar * flight.gamma * xj / (sj * sj + s * s)).epsilon(1e-13));

            const auto term = [&](double x) {
                return evaluate(in, x) * std::exp(-(x - xj) * (x - xj) / (2.0 * sj * sj)) / sj;
            };
            const auto m = brute_moments(term, xj - 12.0 * sj, xj + 12.0 * sj, 20000);
            CHECK(m.center == doctest::Approx(slit.center).epsilon(1e-8));
            CHECK(m.momentum == doctest::Approx(slit.momentum).epsilon(1e-6));
        }
    }

    SUBCASE("momenta shrink as the incoming width grows") {
        const double gamma = 2.0;
        double previous = INFINITY;
        for (double s : {40e-6, 400e-6}) {
            const auto r = model_one_outgoing(chirped_incoming(s, gamma, 0.0, 0.0), geom);
            const double p = std::abs(r.slits[1].momentum);
            CHECK(p < previous);
            previous = p;
        }
    }

    SUBCASE("pointwise equal to F psi_in") {
        for (double k : {0.0, 3000.0, -12000.0}) {
            const auto in = desk_incoming(k);
            const auto r = model_one_outgoing(in, geom);
            double worst = 0.0;
            for (int i = 0; i <= 2000; ++i) {
                const double x = -120e-6 + 240e-6 * i / 2000.0;
                const cplx direct = gaussian_transmission(geom, x) * evaluate(in, x);
                worst = std::max(worst, rel_err(r.outgoing.evaluate(x), direct));
            }
            CHECK(worst < 1e-10);
        }
    }

    SUBCASE("k != 0 momenta are relative to the incoming wave number") {
        const double k = 8000.0;
        const auto r = model_one_outgoing(desk_incoming(k), geom);
        for (int j = 0; j < 2; ++j) {
            CHECK(r.slits[j].packet.wave_number == doctest::Approx(k + r.slits[j].momentum / constants::hbar));
        }
    }

    SUBCASE("amplitude independence and opposite signs on random geometries") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            const GratingGeometry g{(5.0 + 40.0 * u(rng)) * 1e-6, (5.0 + 40.0 * u(rng)) * 1e-6,
                                    (20.0 + 200.0 * u(rng)) * 1e-6};
            const auto in = chirped_incoming((10.0 + 200.0 * u(rng)) * 1e-6, 0.1 + 20.0 * u(rng), 0.0, 0.0);
            auto scaled = in;
            scaled.amplitude *= cplx(3.0, -4.0);
            const auto a = model_one_outgoing(in, g);
            const auto b = model_one_outgoing(scaled, g);
            CHECK(a.slits[0].center * a.slits[1].center < 0.0);
            CHECK(a.slits[0].momentum * a.slits[1].momentum < 0.0);
            CHECK(b.slits[0].momentum == a.slits[0].momentum);
            CHECK(b.slits[1].momentum == a.slits[1].momentum);
        }
    }
}

TEST_CASE("model two") {
    const auto geom = desk_geometry();

    SUBCASE("equal weights for a centered packet") {
        const auto in = desk_incoming();
        const auto out = model_two_outgoing(in, geom, {}, 0.0);
        REQUIRE(out.size() == 2);
        CHECK(std::abs(out.terms()[0].weight) == doctest::Approx(std::abs(out.terms()[1].weight)).epsilon(1e-14));
        CHECK(out.norm_squared() == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(out.terms()[0].packet.wave_number == 0.0);
        CHECK(out.terms()[1].packet.wave_number == 0.0);
    }

    SUBCASE("packet closer to slit 1 weights slit 1 more") {
        auto in = desk_incoming();
        in.center = geom.slit_center(1);
        const auto out = model_two_outgoing(in, geom, {}, 0.0);
        CHECK(std::abs(out.terms()[0].weight) > std::abs(out.terms()[1].weight));
        const double ratio = std::abs(out.terms()[0].weight) / std::abs(out.terms()[1].weight);
        CHECK(ratio == doctest::Approx(std::abs(evaluate(in, geom.slit_center(1))) /
                                       std::abs(evaluate(in, geom.slit_center(2))))
                           .epsilon(1e-12));
    }

    SUBCASE("drift wave numbers") {
        const double m = constants::neutron_mass;
        const ModelTwoParams params{-0.0034 * m, 0.0029 * m};
        const double k = 1234.0;
        const auto out = model_two_outgoing(desk_incoming(k), geom, params, k);
        CHECK(out.terms()[0].packet.wave_number == doctest::Approx(k + params.momentum1 / constants::hbar));
        CHECK(out.terms()[1].packet.wave_number == doctest::Approx(k + params.momentum2 / constants::hbar));
        CHECK(out.terms()[0].packet.center == geom.slit_center(1));
        CHECK(probability_width(out.terms()[1].packet) == doctest::Approx(geom.slit_sigma(2)));
        CHECK(out.norm_squared() == doctest::Approx(1.0).epsilon(1e-13));
    }

    SUBCASE("degenerate transmission") {
        auto in = desk_incoming();
        in.center = 1.0;  // a metre away from both slits
        CHECK_THROWS_AS(model_two_outgoing(in, geom, {}, 0.0), NumericalError);
    }
}
