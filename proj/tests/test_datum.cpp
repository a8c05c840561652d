#include "priceflow/datum.hpp"
#include "priceflow/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace priceflow;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("make_datum accepts the tent and rejects flipped signs") {
    const Datum tent = make_datum({-1.0, 0.0, 1.0}, {1.0, 0.0, -1.0}, 0.0, 1.0);
    CHECK(tent(-0.5) == doctest::Approx(0.5));
    CHECK(tent(0.0) == 0.0);
    CHECK(tent(0.25) == doctest::Approx(-0.25));
    CHECK(tent(1.5) == 0.0);

    CHECK(kind_of([] { make_datum({-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}, 0.0, 1.0); }) ==
          ErrorKind::SignViolation);
}

TEST_CASE("make_datum error paths") {
    CHECK(kind_of([] { make_datum({-1.0, 1.0, 0.0}, {1.0, 0.0, -1.0}, 0.0, 1.0); }) ==
          ErrorKind::BadGrid);
    CHECK(kind_of([] { make_datum({-1.0, 0.0}, {1.0, 0.0, -1.0}, 0.0, 1.0); }) ==
          ErrorKind::BadGrid);
    CHECK(kind_of([] { make_datum({-1.0, 0.0, 1.0}, {1.0, 0.5, -1.0}, 0.0, 1.0); }) ==
          ErrorKind::MissingZero);
    // the interpolant crosses zero at 0.5, not at p0 = 0
    CHECK(kind_of([] { make_datum({-1.0, 1.0}, {1.0, -0.5}, 0.0, 1.0); }) ==
          ErrorKind::MissingZero);
    // interior zero on the buyer side
    CHECK(kind_of([] { make_datum({-2.0, -1.0, 0.0, 1.0}, {1.0, 0.0, 0.0, -1.0}, 0.0, 1.0); }) ==
          ErrorKind::SignViolation);
    CHECK(kind_of([] { make_datum({-1.0, 0.0, 1.0}, {1.0, 0.0, -1.0}, 0.0, 0.0); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("p0 between knots is inserted without changing the interpolant") {
    const Datum d = make_datum({-1.0, 1.0}, {1.0, -1.0}, 0.0, 1.0);
    REQUIRE(d.knots().size() == 3);
    CHECK(d.knots()[1] == 0.0);
    CHECK(d.values()[1] == 0.0);
    CHECK(d(-0.5) == doctest::Approx(0.5));
    const MassPair m = masses(d);
    CHECK(m.m_plus == doctest::Approx(0.5));
    CHECK(m.m_minus == doctest::Approx(0.5));
}

TEST_CASE("masses of the presets") {
    const MassPair tent = masses(preset("tent"));
    CHECK(tent.m_plus == doctest::Approx(0.5));
    CHECK(tent.m_minus == doctest::Approx(0.5));

    const MassPair skew = masses(preset("skew"));
    CHECK(skew.m_plus == doctest::Approx(1.0));
    CHECK(skew.m_minus == doctest::Approx(0.5));

    const MassPair zm = masses(preset("zero-mass-asym"));
    CHECK(zm.zero_total_mass());

    const MassPair tripled = masses(preset("skew").scaled(3.0));
    CHECK(tripled.m_plus == doctest::Approx(3.0));
    CHECK(tripled.m_minus == doctest::Approx(1.5));
}

TEST_CASE("masses are invariant under refinement") {
    const Datum skew = preset("skew");
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> knots(skew.knots().begin(), skew.knots().end());
        for (int extra = 0; extra < 5; ++extra)
            knots.push_back(skew.x_min() + unit(rng) * (skew.x_max() - skew.x_min()));
        std::sort(knots.begin(), knots.end());
        knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
        std::vector<double> values;
        for (const double k : knots) values.push_back(skew(k));
        const MassPair m = masses(make_datum(knots, values, 0.0, 1.0));
        CHECK(m.m_plus == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(m.m_minus == doctest::Approx(0.5).epsilon(1e-13));
    }
}

TEST_CASE("weighted center") {
    CHECK(std::abs(weighted_center(preset("tent"))) < 1e-15);

    // midpoint rule with 10^6 samples over the support
    const Datum skew = preset("skew");
    const int samples = 1000000;
    const double lo = skew.x_min();
    const double width = (skew.x_max() - lo) / samples;
    double moment = 0.0;
    double mass = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double z = lo + (i + 0.5) * width;
        moment += z * std::abs(skew(z)) * width;
        mass += std::abs(skew(z)) * width;
    }
    CHECK(weighted_center(skew) == doctest::Approx(moment / mass).epsilon(1e-9));
    CHECK(weighted_center(skew) == doctest::Approx(-0.5));

    // two narrow unit-mass triangles centred at -b1 and +b2, joined by a
    // negligible ramp so the sign stays strict inside the support
    const double b1 = 3.0, b2 = 5.0, w = 1e-3, eps = 1e-13;
    const Datum narrow = make_datum({-b1 - w, -b1, -b1 + w, 0.0, b2 - w, b2, b2 + w},
                                    {0.0, 1.0 / w, eps, 0.0, -eps, -1.0 / w, 0.0}, 0.0, 1.0);
    CHECK(weighted_center(narrow) == doctest::Approx((b2 - b1) / 2.0).epsilon(1e-9));

    const Datum zero = make_datum({-1.0, 0.0, 1.0}, {0.0, 0.0, 0.0}, 0.0, 1.0);
    CHECK_THROWS_AS(weighted_center(zero), Error);
}

TEST_CASE("weighted center of random antisymmetric data vanishes") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int half = 2 + trial % 5;
        std::vector<double> right_knots{0.0};
        for (int i = 0; i < half; ++i) right_knots.push_back(right_knots.back() + unit(rng));
        std::vector<double> right_values{0.0};
        for (int i = 0; i < half; ++i) right_values.push_back(-unit(rng));
        std::vector<double> knots, values;
        for (int i = half; i >= 1; --i) {
            knots.push_back(-right_knots[i]);
            values.push_back(-right_values[i]);
        }
        knots.insert(knots.end(), right_knots.begin(), right_knots.end());
        values.insert(values.end(), right_values.begin(), right_values.end());
        const Datum d = make_datum(knots, values, 0.0, 1.0);
        CHECK(std::abs(weighted_center(d)) <= 1e-12);
        CHECK(std::abs(d(0.0)) == 0.0);
    }
}

TEST_CASE("reflection and fingerprint") {
    const Datum skew = preset("skew");
    const Datum mirror = skew.reflected();
    for (double x = -3.0; x <= 3.0; x += 0.37) CHECK(mirror(-x) == doctest::Approx(-skew(x)));
    CHECK(skew.fingerprint() == preset("skew").fingerprint());
    CHECK(skew.fingerprint() != mirror.fingerprint());
    CHECK(skew.fingerprint().size() == 16);
}
