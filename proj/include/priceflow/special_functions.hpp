#pragma once

#include "priceflow/error.hpp"

#include <cmath>
#include <numbers>

namespace priceflow {

/// Upper tail of the N(0, 2) distribution,
///   (4 pi)^{-1/2} * integral_u^inf exp(-x^2 / 4) dx  =  erfc(u / 2) / 2.
/// Decreasing from 1 to 0 with value 1/2 at u = 0. Not the standard erf.
template <typename Scalar>
Scalar paper_erf(Scalar u) {
    using std::erfc;
    return Scalar(0.5) * erfc(u / Scalar(2));
}

/// Heat kernel (4 pi t)^{-1/2} exp(-x^2 / (4t)).
template <typename Scalar>
Scalar heat_kernel(Scalar t, Scalar x) {
    using std::exp;
    using std::sqrt;
    if (!(t > Scalar(0))) throw Error(ErrorKind::NonpositiveTime, "heat kernel needs t > 0");
    return exp(-x * x / (Scalar(4) * t)) / sqrt(Scalar(4) * std::numbers::pi_v<Scalar> * t);
}

template <typename Scalar>
struct SegmentIntegrals {
    Scalar i0;  ///< integral of G(t, x - z) over [z0, z1]
    Scalar i1;  ///< integral of z G(t, x - z) over [z0, z1]
};

namespace detail {

// Probability that x + W lies in [z0, z1] for W ~ N(0, 2t), written with
// erfc on the side where it does not cancel. s = sqrt(4t).
template <typename Scalar>
Scalar gaussian_window_mass(Scalar s, Scalar x, Scalar z0, Scalar z1) {
    using std::erfc;
    const Scalar u0 = (z0 - x) / s;
    const Scalar u1 = (z1 - x) / s;
    if (u1 <= Scalar(0)) return Scalar(0.5) * (erfc(-u1) - erfc(-u0));
    if (u0 >= Scalar(0)) return Scalar(0.5) * (erfc(u0) - erfc(u1));
    return Scalar(1) - Scalar(0.5) * (erfc(-u0) + erfc(u1));
}

// G(t, d) with infinite d mapped to 0.
template <typename Scalar>
Scalar kernel_or_zero(Scalar t, Scalar d) {
    return std::isinf(d) ? Scalar(0) : heat_kernel(t, d);
}

}  // namespace detail

/// Closed-form Gaussian moments of a segment; infinite endpoints allowed.
/// A linear piece alpha + beta z convolves to alpha * i0 + beta * i1.
template <typename Scalar>
SegmentIntegrals<Scalar> segment_integrals(Scalar t, Scalar x, Scalar z0, Scalar z1) {
    using std::sqrt;
    if (!(t > Scalar(0))) throw Error(ErrorKind::NonpositiveTime, "segment integrals need t > 0");
    const Scalar s = sqrt(Scalar(4) * t);
    const Scalar i0 = detail::gaussian_window_mass(s, x, z0, z1);
    // integral of (z - x) G(t, x - z) dz = 2t [G(t, z0 - x) - G(t, z1 - x)]
    const Scalar centered = Scalar(2) * t *
                            (detail::kernel_or_zero(t, z0 - x) - detail::kernel_or_zero(t, z1 - x));
    return {i0, x * i0 + centered};
}

}  // namespace priceflow
