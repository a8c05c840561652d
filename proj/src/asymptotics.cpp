#include "priceflow/asymptotics.hpp"

#include "priceflow/error.hpp"

#include <cmath>

namespace priceflow {

namespace {

// q >= 0 with paper_erf(q) = target, for target in (0, 1/2].
double solve_nonnegative(double target) {
    double lo = 0.0;
    double hi = 60.0;  // paper_erf(60) underflows to 0
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (paper_erf(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double AsymptoticLaw::predict(double t) const {
    return kind == LawKind::SqrtDrift ? p0 + q_inf * std::sqrt(t) : p_inf;
}

double q_infinity(const MassPair& m) {
    if (!(m.m_plus > 0.0) || !(m.m_minus > 0.0))
        throw Error(ErrorKind::DegenerateMasses,
                    "both masses must be positive for a finite drift coefficient");
    if (m.zero_total_mass(kMassTolerance)) return 0.0;
    if (m.m_plus < m.m_minus) return -q_infinity({m.m_minus, m.m_plus});
    return solve_nonnegative(m.m_minus / (m.m_plus + m.m_minus));
}

double p_infinity_zero_mass(const Datum& d) {
    const MassPair m = masses(d);
    if (!(m.total() > 0.0)) throw Error(ErrorKind::ZeroDatum, "datum has no mass");
    if (!m.zero_total_mass(kMassTolerance))
        throw Error(ErrorKind::NotZeroMass, "M+ and M- differ; the price drifts like sqrt(t)");
    return weighted_center(d);
}

AsymptoticLaw asymptotic_law(const Datum& d) {
    const MassPair m = masses(d);
    if (!(m.total() > 0.0)) throw Error(ErrorKind::ZeroDatum, "datum has no mass");
    AsymptoticLaw law;
    law.p0 = d.p0();
    if (m.zero_total_mass(kMassTolerance)) {
        law.kind = LawKind::BoundedLimit;
        law.p_inf = weighted_center(d);
    } else {
        law.kind = LawKind::SqrtDrift;
        law.q_inf = q_infinity(m);
    }
    return law;
}

SqrtFit fit_sqrt_coefficient(const PriceTrajectory& traj, double t_lo, double t_hi,
                             double origin) {
    double num = 0.0;
    double den = 0.0;
    SqrtFit fit;
    for (const auto& pt : traj.points) {
        if (pt.t < t_lo || pt.t > t_hi) continue;
        if (!(pt.t > 0.0)) throw Error(ErrorKind::InvalidArgument, "fit window needs t > 0");
        num += (pt.p - origin) * std::sqrt(pt.t);
        den += pt.t;
        ++fit.count;
    }
    if (fit.count < 3)
        throw Error(ErrorKind::InsufficientPoints, "need at least 3 points in the fit window");
    fit.q_hat = num / den;
    double sum_sq = 0.0;
    for (const auto& pt : traj.points) {
        if (pt.t < t_lo || pt.t > t_hi) continue;
        const double r = (pt.p - origin) / std::sqrt(pt.t) - fit.q_hat;
        sum_sq += r * r;
    }
    fit.residual = std::sqrt(sum_sq / static_cast<double>(fit.count));
    return fit;
}

}  // namespace priceflow
