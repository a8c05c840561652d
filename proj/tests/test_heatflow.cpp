#include "priceflow/error.hpp"
#include "priceflow/heatflow.hpp"
#include "priceflow/pricepath.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace priceflow;

TEST_CASE("heat kernel") {
    CHECK(heat_kernel(1.0, 0.0) == doctest::Approx(1.0 / std::sqrt(4.0 * std::numbers::pi)));
    CHECK(heat_kernel(1.0, 0.0) == doctest::Approx(0.2820948).epsilon(1e-7));
    for (double x : {0.1, 1.3, 4.0}) CHECK(heat_kernel(0.7, x) == heat_kernel(0.7, -x));
    const double mass = oracle::integrate_panels([](double x) { return heat_kernel(1.0, x); },
                                                 -40.0, 40.0, 1e-13, 1.0);
    CHECK(std::abs(mass - 1.0) <= 1e-10);
    CHECK_THROWS_AS(heat_kernel(0.0, 1.0), Error);
    CHECK_THROWS_AS(heat_kernel(-1.0, 1.0), Error);
}

TEST_CASE("segment integrals") {
    const double inf = std::numeric_limits<double>::infinity();
    const auto full = segment_integrals(1.0, 0.0, -inf, inf);
    CHECK(full.i0 == doctest::Approx(1.0));
    CHECK(std::abs(full.i1) < 1e-15);
    CHECK(segment_integrals(1.0, 0.0, 0.0, inf).i0 == doctest::Approx(0.5));
    CHECK_THROWS_AS(segment_integrals(0.0, 0.0, 0.0, 1.0), Error);

    for (const auto& [t, x, z0, z1] : {std::array{0.3, 0.2, -1.0, 0.5},
                                       std::array{2.0, 5.0, -3.0, -1.0},
                                       std::array{0.01, -0.7, -0.8, -0.6},
                                       std::array{50.0, 100.0, 80.0, 81.0}}) {
        const auto s = segment_integrals(t, x, z0, z1);
        const double i0 = oracle::integrate([&](double z) { return oracle::kernel(t, x - z); },
                                            z0, z1, 1e-15);
        const double i1 = oracle::integrate(
            [&](double z) { return z * oracle::kernel(t, x - z); }, z0, z1, 1e-15);
        CHECK(s.i0 == doctest::Approx(i0).epsilon(1e-12));
        CHECK(s.i1 == doctest::Approx(i1).epsilon(1e-12));
    }
}

TEST_CASE("F at t = 0 is the transformed datum and t -> 0+ recovers it") {
    const HeatField hf(forward_transform(preset("tent")));
    CHECK(evaluate_F(hf, -0.5, 0.0) == doctest::Approx(0.5));
    CHECK(evaluate_F(hf, -0.5, 1e-8) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(evaluate_Fx(hf, 0.0, 1e-8) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK_THROWS_AS(evaluate_F(hf, 0.0, -1.0), Error);
    CHECK_THROWS_AS(evaluate_Fx(hf, 0.0, 0.0), Error);
}

TEST_CASE("odd symmetry is preserved for the tent") {
    const HeatField hf(forward_transform(preset("tent")));
    for (double t : {0.01, 0.1, 1.0, 10.0, 100.0, 1e4}) {
        CHECK(std::abs(evaluate_F(hf, 0.0, t)) <= hf.tail_tolerance());
        for (double x : {0.3, 1.7, 12.0})
            CHECK(evaluate_F(hf, x, t) == doctest::Approx(-evaluate_F(hf, -x, t)).epsilon(1e-12));
    }
}

TEST_CASE("closed form agrees with adaptive quadrature of the convolution") {
    const Datum skew = preset("skew");
    const HeatField hf(forward_transform(skew));
    const double radius = hf.truncation_radius(1.0, true) + 5.0;
    const double oracle_value = oracle::heat_value(skew, 0.5, 1.0, radius, 1e-11);
    CHECK(std::abs(evaluate_F(hf, 0.5, 1.0) - oracle_value) <= 1e-8);

    for (const auto& name : preset_names()) {
        const Datum d = preset(name);
        const HeatField field(forward_transform(d));
        for (double t : {0.05, 0.7, 4.0}) {
            const double r = field.truncation_radius(t, true) + 2.0;
            for (double x : {-3.1, -0.4, 0.0, 0.9, 2.6}) {
                CHECK(std::abs(field.value(x, t) - oracle::heat_value(d, x, t, r, 1e-11)) <= 1e-8);
                INFO(name << " t=" << t << " x=" << x);
                CHECK(std::abs(field.slope(x, t) - oracle::heat_slope(d, x, t, r, 1e-11)) <= 1e-8);
            }
        }
    }
}

TEST_CASE("F_x agrees with central differences of F") {
    for (const auto& name : preset_names()) {
        const HeatField hf(forward_transform(preset(name)));
        const double h = 1e-5;
        for (double t : {0.02, 0.3, 2.0, 25.0}) {
            for (double x = -4.0; x <= 4.0; x += 0.73) {
                const double fd = (hf.value(x + h, t) - hf.value(x - h, t)) / (2.0 * h);
                CHECK(std::abs(hf.slope(x, t) - fd) <= 1e-6);
            }
        }
    }
}

TEST_CASE("Hopf sign at the free boundary") {
    const HeatField hf(forward_transform(preset("skew")));
    const PricePoint pp = find_price(hf, 1.0);
    CHECK(evaluate_Fx(hf, pp.p, 1.0) < 0.0);
}

TEST_CASE("comparison principle") {
    for (const auto& name : preset_names()) {
        const HeatField hf(forward_transform(preset(name)));
        const auto& tf = hf.transformed();
        double sup_initial = 0.0;
        for (double x = -15.0; x <= 15.0; x += 1e-3) sup_initial = std::max(sup_initial, std::abs(tf(x)));
        for (const double k : tf.datum().knots()) sup_initial = std::max(sup_initial, std::abs(tf(k)));
        for (double t : {0.01, 0.5, 5.0, 50.0}) {
            double sup = 0.0;
            for (double x = -15.0; x <= 15.0; x += 0.01) sup = std::max(sup, std::abs(hf.value(x, t)));
            CHECK(sup <= sup_initial + hf.tail_tolerance() + 1e-12);
        }
    }
}

TEST_CASE("semigroup: evolving a resampled F(., t1) by t2 matches F(., t1 + t2)") {
    const HeatField hf(forward_transform(preset("skew")));
    const double t1 = 0.5, t2 = 0.5;
    const double window = 25.0, step = 0.01;
    std::vector<LinearPiece> pieces;
    double previous_x = -window;
    double previous_v = hf.value(previous_x, t1);
    for (double x = -window + step; x <= window + 1e-12; x += step) {
        const double v = hf.value(x, t1);
        pieces.push_back({previous_x, x, previous_v, v});
        previous_x = x;
        previous_v = v;
    }
    for (double x : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
        const ValueAndSlope evolved = convolve_pieces(pieces, x, t2);
        CHECK(std::abs(evolved.value - hf.value(x, t1 + t2)) <= 1e-4);
        CHECK(std::abs(evolved.slope - hf.slope(x, t1 + t2)) <= 1e-4);
    }
}

TEST_CASE("truncation radius shrinks as the tolerance loosens") {
    const TransformedField tf = forward_transform(preset("skew"));
    const HeatField tight(tf, 1e-14);
    const HeatField loose(tf, 1e-4);
    CHECK(tight.truncation_radius(10.0) > loose.truncation_radius(10.0));
    CHECK(loose.truncation_radius(10.0, true) >= loose.truncation_radius(10.0));
    // the truncated tail stays within the requested budget
    const double x = 0.3, t = 10.0;
    CHECK(std::abs(loose.value(x, t) - tight.value(x, t)) <= 1e-4 + 1e-14);
}
