#pragma once

#include "priceflow/datum.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace priceflow {

/// Lazy evaluator of the transformed initial datum
///   F_I(x) = sum_{n>=0} f_I^+(x + n a) - sum_{n>=0} f_I^-(x - n a).
/// The first sum vanishes for x > p0 and the second for x < p0, so the
/// expression holds on the whole line. Each point needs finitely many terms.
class TransformedField {
public:
    explicit TransformedField(Datum datum);

    const Datum& datum() const { return datum_; }
    double p0() const { return datum_.p0(); }
    double a() const { return datum_.a(); }
    double x_min() const { return datum_.x_min(); }
    double x_max() const { return datum_.x_max(); }

    /// (ceil((x_max - x_min) / a) + 1) * sup|f_I|, an upper bound on sup|F_I|.
    double sup_bound() const { return sup_bound_; }

    double operator()(double x) const;

private:
    Datum datum_;
    double sup_bound_;
};

TransformedField forward_transform(const Datum& d);

struct MeanLevels {
    double c_plus;   ///< left-tail period average, M+ / a
    double c_minus;  ///< magnitude of the right-tail period average, M- / a
};

MeanLevels periodic_mean_levels(const TransformedField& tf);

/// Recovers f(x, t) from a heat solution F(., t) with zero at p_t:
///   F^+(x) - F^+(x + a)   for x < p_t,
///  -F^-(x) + F^-(x - a)   for x > p_t,
/// and 0 at x = p_t.
template <typename Field>
double reconstruct_f(const Field& field, double p_t, double a, double x) {
    if (x < p_t) return std::max(field(x), 0.0) - std::max(field(x + a), 0.0);
    if (x > p_t) return -std::max(-field(x), 0.0) + std::max(-field(x - a), 0.0);
    return 0.0;
}

}  // namespace priceflow
