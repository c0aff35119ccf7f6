#include "doctest.h"

#include <cmath>

#include "cvmdi/model.hpp"

using namespace cvmdi;

TEST_CASE("epr_variance maps channel noise to cloner variance") {
    CHECK(epr_variance({0.5, 2.0}) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(epr_variance({1.0, 0.0}) == 1.0);
    CHECK(epr_variance({0.25, 0.01}) == doctest::Approx(1.0 + 0.25 * 0.01 / 0.75).epsilon(1e-12));

    CHECK_THROWS_AS(epr_variance({1.0, 0.01}), invalid_parameters);
    CHECK_THROWS_AS(epr_variance({0.0, 0.0}), invalid_parameters);
    CHECK_THROWS_AS(epr_variance({-0.1, 0.0}), invalid_parameters);
    CHECK_THROWS_AS(epr_variance({0.5, -0.1}), invalid_parameters);
}

TEST_CASE("epr_variance round trip recovers the excess noise") {
    for (double t : {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        for (double eps : {0.0, 1e-6, 0.005, 0.05, 0.5, 3.0}) {
            const double n = epr_variance({t, eps});
            CHECK(excess_noise_from_epr(t, n) == doctest::Approx(eps).epsilon(1e-12));
            CHECK(n >= 1.0);
        }
    }
}

TEST_CASE("fiber transmission follows the dB law") {
    CHECK(fiber_transmission({0.2, 0.0}) == 1.0);
    CHECK(fiber_transmission({0.2, 15.0}) == doctest::Approx(std::pow(10.0, -0.3)).epsilon(1e-12));
    CHECK(fiber_transmission({0.2, 50.0}) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(fiber_transmission({0.2, -1.0}), invalid_parameters);

    // multiplicative in distance
    for (double d1 : {0.0, 3.7, 12.0}) {
        for (double d2 : {0.5, 8.25, 40.0}) {
            const double lhs = fiber_transmission({0.2, d1 + d2});
            const double rhs = fiber_transmission({0.2, d1}) * fiber_transmission({0.2, d2});
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }

    // monotone decreasing
    double prev = 2.0;
    for (double d = 0.0; d <= 100.0; d += 5.0) {
        const double t = fiber_transmission({0.2, d});
        CHECK(t < prev);
        prev = t;
    }
}

TEST_CASE("absorb_detector folds BHD imperfections into the channel") {
    const ChannelParams id = absorb_detector({0.5, 0.01}, 1.0, 0.0);
    CHECK(id.transmission == 0.5);
    CHECK(id.excess_noise == 0.01);

    const ChannelParams e = absorb_detector({0.5, 0.0}, 0.6, 0.015);
    CHECK(e.transmission == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(e.excess_noise == doctest::Approx(0.05).epsilon(1e-12));

    const ChannelParams d = absorb_detector({0.8, 0.005}, 0.99, 0.01);
    CHECK(d.transmission == doctest::Approx(0.792).epsilon(1e-12));
    CHECK(d.excess_noise == doctest::Approx(0.005 + 0.01 / 0.792).epsilon(1e-12));

    CHECK_THROWS_AS(absorb_detector({0.0, 0.0}, 0.9, 0.0), invalid_parameters);
    CHECK_THROWS_AS(absorb_detector({0.5, 0.0}, 0.0, 0.0), invalid_parameters);
    CHECK_THROWS_AS(absorb_detector({0.5, 0.0}, 1.0, -0.1), invalid_parameters);
}

TEST_CASE("absorb_detector composes in the efficiencies") {
    const ChannelParams base{0.7, 0.02};
    for (double eta1 : {0.5, 0.8, 0.95}) {
        for (double eta2 : {0.6, 0.9}) {
            const ChannelParams two_step = absorb_detector(absorb_detector(base, eta1, 0.0), eta2, 0.0);
            const ChannelParams one_step = absorb_detector(base, eta1 * eta2, 0.0);
            CHECK(two_step.transmission == doctest::Approx(one_step.transmission).epsilon(1e-12));
            CHECK(two_step.excess_noise == doctest::Approx(one_step.excess_noise).epsilon(1e-12));
        }
    }
}

TEST_CASE("absorbed channel reproduces the direct detector model in the recast variance") {
    // eta*(T*V + (1-T)*N) + (1-eta) + v_el must equal the same leg of b_v
    // computed from the absorbed channel.
    const double t = 0.8, eps = 0.005, eta = 0.99, v_el = 0.01, v = 20.0;
    const double n = epr_variance({t, eps});
    const double direct = eta * (t * v + (1.0 - t) * n) + (1.0 - eta) + v_el;
    const ChannelParams ch = absorb_detector({t, eps}, eta, v_el);
    const double n2 = epr_variance(ch);
    const double absorbed = ch.transmission * v + (1.0 - ch.transmission) * n2;
    CHECK(absorbed == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("key rate point keeps its decomposition identity") {
    const KeyRatePoint p = KeyRatePoint::assemble(0.95, 2.5, 0.7, 1.1);
    CHECK(p.key_rate == 0.95 * 2.5 - 0.7 - 1.1);
    CHECK(p.key_rate == p.mutual_info_ab * 0.95 - p.eve_shannon - p.eve_holevo);
}

TEST_CASE("protocol parameter validation") {
    ProtocolParams p;
    p.modulation_variance = 4.0;
    CHECK(p.total_variance() == 5.0);
    CHECK_NOTHROW(p.validate());

    p.beta = 0.0;
    CHECK_THROWS_AS(p.validate(), invalid_parameters);
    p.beta = 1.0;
    p.modulation_variance = -1.0;
    CHECK_THROWS_AS(p.validate(), invalid_parameters);
    p.modulation_variance = 1.0;
    p.detector_efficiency = 1.2;
    CHECK_THROWS_AS(p.validate(), invalid_parameters);
}
