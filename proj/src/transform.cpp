#include "priceflow/transform.hpp"

namespace priceflow {

TransformedField::TransformedField(Datum datum) : datum_(std::move(datum)) {
    const double periods = std::ceil((datum_.x_max() - datum_.x_min()) / datum_.a());
    sup_bound_ = (periods + 1.0) * datum_.sup_abs();
}

double TransformedField::operator()(double x) const {
    const double a = datum_.a();
    const double p0 = datum_.p0();
    double sum = 0.0;
    if (x < p0) {
        // x + n a inside [x_min, p0]
        // widened by one index on each side; out-of-range terms evaluate to zero
        const double lo = std::max(0.0, std::ceil((x_min() - x) / a) - 1.0);
        const double hi = std::floor((p0 - x) / a) + 1.0;
        for (double n = lo; n <= hi; n += 1.0) sum += std::max(datum_(x + n * a), 0.0);
    } else if (x > p0) {
        // x - n a inside [p0, x_max]
        const double lo = std::max(0.0, std::ceil((x - x_max()) / a) - 1.0);
        const double hi = std::floor((x - p0) / a) + 1.0;
        for (double n = lo; n <= hi; n += 1.0) sum -= std::max(-datum_(x - n * a), 0.0);
    }
    return sum;
}

TransformedField forward_transform(const Datum& d) { return TransformedField(d); }

MeanLevels periodic_mean_levels(const TransformedField& tf) {
    const MassPair m = masses(tf.datum());
    return {m.m_plus / tf.a(), m.m_minus / tf.a()};
}

}  // namespace priceflow
