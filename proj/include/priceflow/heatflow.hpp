#pragma once

#include "priceflow/datum.hpp"
#include "priceflow/special_functions.hpp"
#include "priceflow/transform.hpp"

#include <span>

namespace priceflow {

struct ValueAndSlope {
    double value = 0.0;
    double slope = 0.0;
};

/// (G_t * piece)(x) and its x-derivative, in closed form. The piece is
/// treated as zero outside [z0, z1], so jumps at the ends are exact.
ValueAndSlope convolve_piece(const LinearPiece& piece, double x, double t);

/// Sum of convolve_piece over a piecewise-linear function given as pieces.
ValueAndSlope convolve_pieces(std::span<const LinearPiece> pieces, double x, double t);

/// Heat evolution F(x, t) = (G_t * F_I)(x) of a transformed datum.
///
/// F_I is a sum of shifted copies of f_I^+ and f_I^-, so the convolution is
/// a sum of closed-form piece convolutions. Copies lying entirely outside
/// [x - R, x + R] are dropped; R is chosen so the dropped mass is at most
/// tail_tolerance (see truncation_radius).
class HeatField {
public:
    explicit HeatField(TransformedField tf, double tail_tolerance = 1e-10);

    const TransformedField& transformed() const { return tf_; }
    const Datum& datum() const { return tf_.datum(); }
    double tail_tolerance() const { return tail_tolerance_; }

    /// sqrt(4 t ln(S / tol)) + a with S = sup|F_I| bound. With derivative set,
    /// also large enough that S * 2 G(t, R) <= tol.
    double truncation_radius(double t, bool derivative = false) const;

    /// F(x, t); t = 0 returns F_I(x).
    double value(double x, double t) const;
    /// F_x(x, t), t > 0.
    double slope(double x, double t) const;
    /// Both at once, sharing the translate enumeration.
    ValueAndSlope evaluate(double x, double t) const;

private:
    TransformedField tf_;
    double tail_tolerance_;
    double plus_lo_, plus_hi_;    // support of f_I^+
    double minus_lo_, minus_hi_;  // support of f_I^-
};

double evaluate_F(const HeatField& hf, double x, double t);
double evaluate_Fx(const HeatField& hf, double x, double t);

}  // namespace priceflow
