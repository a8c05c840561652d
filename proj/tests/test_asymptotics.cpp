#include "priceflow/asymptotics.hpp"
#include "priceflow/error.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace priceflow;

namespace {

// paper_erf from its integral definition
double erf_oracle(double u) {
    return oracle::integrate([](double z) { return std::exp(-z * z / 4.0); }, u, u + 60.0, 1e-14) /
           std::sqrt(4.0 * std::numbers::pi);
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("paper_erf") {
    CHECK(paper_erf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(paper_erf(2.0) == doctest::Approx(erf_oracle(2.0)).epsilon(1e-12));
    CHECK(paper_erf(2.0) == doctest::Approx(0.0786496).epsilon(1e-6));
    for (double u : {-3.0, -0.7, 0.3, 1.1, 5.0}) {
        CHECK(paper_erf(u) + paper_erf(-u) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(paper_erf(u) == doctest::Approx(erf_oracle(u)).epsilon(1e-10));
    }
    CHECK(paper_erf(-40.0) == 1.0);
    CHECK(paper_erf(40.0) >= 0.0);
}

TEST_CASE("q_infinity") {
    CHECK(q_infinity({1.0, 1.0}) == 0.0);
    CHECK(q_infinity({1.0, 1.0 + 1e-12}) == 0.0);

    const double q = q_infinity({1.0, 0.5});
    CHECK(paper_erf(q) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(q == doctest::Approx(0.609140388348).epsilon(1e-9));
    CHECK(q_infinity({0.5, 1.0}) == doctest::Approx(-q).epsilon(1e-13));
    CHECK(q_infinity({7.0, 3.5}) == doctest::Approx(q).epsilon(1e-13));

    // more buyers push the price up
    CHECK(q_infinity({2.0, 1.0}) < q_infinity({4.0, 1.0}));

    CHECK(kind_of([] { q_infinity({0.0, 1.0}); }) == ErrorKind::DegenerateMasses);
    CHECK(kind_of([] { q_infinity({1.0, 0.0}); }) == ErrorKind::DegenerateMasses);
}

TEST_CASE("p_infinity for zero total mass") {
    const Datum d = preset("zero-mass-asym");
    const MassPair m = masses(d);
    CHECK(m.m_plus == doctest::Approx(1.0));
    CHECK(m.m_minus == doctest::Approx(1.0));

    // moment oracle: integral of z |f(z)| over the support, halved by the total mass
    const double moment =
        oracle::integrate_panels([&](double z) { return z * std::abs(d(z)); }, -1.0, 2.0, 1e-13);
    CHECK(p_infinity_zero_mass(d) == doctest::Approx(moment / 2.0).epsilon(1e-10));
    CHECK(p_infinity_zero_mass(d) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p_infinity_zero_mass(preset("tent")) == doctest::Approx(0.0).epsilon(1e-14));

    CHECK(kind_of([] { p_infinity_zero_mass(preset("skew")); }) == ErrorKind::NotZeroMass);
    const Datum zero = make_datum({-1.0, 0.0, 1.0}, {0.0, 0.0, 0.0}, 0.0, 1.0);
    CHECK(kind_of([&] { p_infinity_zero_mass(zero); }) == ErrorKind::ZeroDatum);
}

TEST_CASE("asymptotic_law") {
    const AsymptoticLaw skew = asymptotic_law(preset("skew"));
    CHECK(skew.kind == LawKind::SqrtDrift);
    CHECK(skew.q_inf == doctest::Approx(0.609140388348).epsilon(1e-9));
    CHECK(skew.predict(100.0) == doctest::Approx(10.0 * skew.q_inf));

    const AsymptoticLaw zm = asymptotic_law(preset("zero-mass-asym"));
    CHECK(zm.kind == LawKind::BoundedLimit);
    CHECK(zm.predict(1e6) == doctest::Approx(0.25));

    // scaling x -> c x, t -> c^2 t leaves q_inf alone
    const Datum wide = preset("skew").scaled(3.0);
    CHECK(asymptotic_law(wide).q_inf == doctest::Approx(skew.q_inf).epsilon(1e-12));
}

TEST_CASE("fit_sqrt_coefficient") {
    PriceTrajectory exact;
    for (double t : {1.0, 4.0, 9.0, 16.0, 25.0}) exact.points.push_back({t, 0.5 * std::sqrt(t), 0.0, 0.0, 0.0});
    SqrtFit fit = fit_sqrt_coefficient(exact, 0.0, 100.0);
    CHECK(fit.q_hat == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(fit.residual <= 1e-14);
    CHECK(fit.count == 5);

    PriceTrajectory shifted = exact;
    for (auto& pt : shifted.points) pt.p += 2.0;
    CHECK(fit_sqrt_coefficient(shifted, 0.0, 100.0, 2.0).q_hat == doctest::Approx(0.5));
    CHECK(fit_sqrt_coefficient(exact, 4.0, 16.0).count == 3);

    CHECK(kind_of([&] { fit_sqrt_coefficient(exact, 10.0, 20.0); }) == ErrorKind::InsufficientPoints);
}

TEST_CASE("fitted coefficient approaches q_inf") {
    const Datum skew = preset("skew");
    const HeatField hf(forward_transform(skew));
    std::vector<double> times;
    for (int k = 0; k <= 30; ++k) times.push_back(std::pow(10.0, 2.0 + 2.0 * k / 30.0));
    const PriceTrajectory traj = trajectory(hf, times);
    const double q = q_infinity(masses(skew));
    const SqrtFit early = fit_sqrt_coefficient(traj, 100.0, 1000.0);
    const SqrtFit late = fit_sqrt_coefficient(traj, 1000.0, 10000.0);
    CHECK(std::abs(late.q_hat - q) < std::abs(early.q_hat - q));
    CHECK(late.q_hat == doctest::Approx(q).epsilon(0.02));
}
