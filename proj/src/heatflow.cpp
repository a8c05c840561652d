#include "priceflow/heatflow.hpp"

#include "priceflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace priceflow {

namespace {

// Kernel constants for a fixed t, hoisted out of the translate loops.
struct KernelAtTime {
    explicit KernelAtTime(double t)
        : t(t),
          s(std::sqrt(4.0 * t)),
          inv_4t(1.0 / (4.0 * t)),
          norm(1.0 / std::sqrt(4.0 * std::numbers::pi * t)) {}

    double gauss(double d) const { return norm * std::exp(-d * d * inv_4t); }

    double t, s, inv_4t, norm;
};

ValueAndSlope convolve_piece(const KernelAtTime& k, const LinearPiece& piece, double x) {
    const double beta = piece.slope();
    const double i0 = detail::gaussian_window_mass(k.s, x, piece.z0, piece.z1);
    const double g0 = k.gauss(x - piece.z0);
    const double g1 = k.gauss(x - piece.z1);
    const double value_at_x = piece.v0 + beta * (x - piece.z0);
    return {value_at_x * i0 + beta * 2.0 * k.t * (g0 - g1),
            g0 * piece.v0 - g1 * piece.v1 + beta * i0};
}

void accumulate(ValueAndSlope& acc, const KernelAtTime& k, std::span<const LinearPiece> pieces,
                double x, double sign) {
    for (const auto& piece : pieces) {
        const ValueAndSlope c = convolve_piece(k, piece, x);
        acc.value += sign * c.value;
        acc.slope += sign * c.slope;
    }
}

}  // namespace

ValueAndSlope convolve_piece(const LinearPiece& piece, double x, double t) {
    if (!(t > 0.0)) throw Error(ErrorKind::NonpositiveTime, "convolution needs t > 0");
    return convolve_piece(KernelAtTime(t), piece, x);
}

ValueAndSlope convolve_pieces(std::span<const LinearPiece> pieces, double x, double t) {
    if (!(t > 0.0)) throw Error(ErrorKind::NonpositiveTime, "convolution needs t > 0");
    ValueAndSlope acc;
    accumulate(acc, KernelAtTime(t), pieces, x, 1.0);
    return acc;
}

HeatField::HeatField(TransformedField tf, double tail_tolerance)
    : tf_(std::move(tf)), tail_tolerance_(tail_tolerance) {
    if (!(tail_tolerance > 0.0))
        throw Error(ErrorKind::InvalidArgument, "tail_tolerance must be positive");
    const auto& plus = tf_.datum().positive_pieces();
    const auto& minus = tf_.datum().negative_pieces();
    plus_lo_ = plus.empty() ? 0.0 : plus.front().z0;
    plus_hi_ = plus.empty() ? 0.0 : plus.back().z1;
    minus_lo_ = minus.empty() ? 0.0 : minus.front().z0;
    minus_hi_ = minus.empty() ? 0.0 : minus.back().z1;
}

double HeatField::truncation_radius(double t, bool derivative) const {
    const double sup = tf_.sup_bound();
    const double log_ratio = std::max(0.0, std::log(sup / tail_tolerance_));
    double radius = std::sqrt(4.0 * t * log_ratio);
    if (derivative) {
        const double ratio = 2.0 * sup / (tail_tolerance_ * std::sqrt(4.0 * std::numbers::pi * t));
        radius = std::max(radius, std::sqrt(4.0 * t * std::max(0.0, std::log(ratio))));
    }
    return radius + tf_.a();
}

ValueAndSlope HeatField::evaluate(double x, double t) const {
    if (!(t > 0.0)) throw Error(ErrorKind::NonpositiveTime, "F(x, t) needs t > 0 here");
    const KernelAtTime kernel(t);
    const double radius = truncation_radius(t, true);
    const double a = tf_.a();
    const auto& datum = tf_.datum();
    ValueAndSlope acc;

    if (!datum.positive_pieces().empty()) {
        // copy n occupies [plus_lo - n a, plus_hi - n a]
        const double lo = std::max(0.0, std::ceil((plus_lo_ - x - radius) / a));
        const double hi = std::floor((plus_hi_ - x + radius) / a);
        for (double n = lo; n <= hi; n += 1.0)
            accumulate(acc, kernel, datum.positive_pieces(), x + n * a, 1.0);
    }
    if (!datum.negative_pieces().empty()) {
        // copy n occupies [minus_lo + n a, minus_hi + n a]
        const double lo = std::max(0.0, std::ceil((x - radius - minus_hi_) / a));
        const double hi = std::floor((x + radius - minus_lo_) / a);
        for (double n = lo; n <= hi; n += 1.0)
            accumulate(acc, kernel, datum.negative_pieces(), x - n * a, -1.0);
    }
    return acc;
}

double HeatField::value(double x, double t) const {
    if (t == 0.0) return tf_(x);
    if (t < 0.0) throw Error(ErrorKind::NonpositiveTime, "F(x, t) needs t >= 0");
    return evaluate(x, t).value;
}

double HeatField::slope(double x, double t) const { return evaluate(x, t).slope; }

double evaluate_F(const HeatField& hf, double x, double t) { return hf.value(x, t); }
double evaluate_Fx(const HeatField& hf, double x, double t) { return hf.slope(x, t); }

}  // namespace priceflow
