#pragma once

#include "priceflow/datum.hpp"
#include "priceflow/pricepath.hpp"
#include "priceflow/special_functions.hpp"

namespace priceflow {

inline constexpr double kMassTolerance = 1e-9;

enum class LawKind { SqrtDrift, BoundedLimit };

/// Large-time behaviour of p(t):
///   SqrtDrift:     p(t) ~ p0 + q_inf sqrt(t)
///   BoundedLimit:  p(t) -> p_inf
struct AsymptoticLaw {
    LawKind kind = LawKind::SqrtDrift;
    double q_inf = 0.0;
    double p_inf = 0.0;
    double p0 = 0.0;

    double predict(double t) const;
};

/// Root of paper_erf(q) = M- / (M+ + M-). Positive when M+ > M-, zero when
/// the masses agree to kMassTolerance. Only the mass ratio enters, so the
/// value is unaffected by the normalisation x -> (x - p0) / a, t -> t / a^2.
/// Throws DegenerateMasses when either mass vanishes.
double q_infinity(const MassPair& m);

/// Limit price for data with zero total mass (the weighted center).
/// Throws NotZeroMass or ZeroDatum.
double p_infinity_zero_mass(const Datum& d);

AsymptoticLaw asymptotic_law(const Datum& d);

struct SqrtFit {
    double q_hat = 0.0;
    double residual = 0.0;  ///< RMS of (p - origin) / sqrt(t) - q_hat
    std::size_t count = 0;
};

/// Least-squares fit of p(t) - origin = q sqrt(t) over points with
/// t_lo <= t <= t_hi. Throws InsufficientPoints for fewer than 3 points.
SqrtFit fit_sqrt_coefficient(const PriceTrajectory& traj, double t_lo, double t_hi,
                             double origin = 0.0);

}  // namespace priceflow
