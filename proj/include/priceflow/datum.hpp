#pragma once

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <vector>

namespace priceflow {

/// One linear piece of a piecewise-linear function on [z0, z1].
struct LinearPiece {
    double z0;
    double z1;
    double v0;
    double v1;

    double slope() const { return (v1 - v0) / (z1 - z0); }
};

struct MassPair {
    double m_plus = 0.0;
    double m_minus = 0.0;

    double total() const { return m_plus + m_minus; }
    /// |M+ - M-| <= rel_tol * (M+ + M-)
    bool zero_total_mass(double rel_tol = 1e-9) const;
};

/// Initial buyer/vendor density: a compactly supported piecewise-linear
/// function that is positive left of p0, negative right of p0 and vanishes
/// at p0. Zero outside [knots.front(), knots.back()].
///
/// Immutable; construct through make_datum() or preset().
class Datum {
public:
    const Eigen::VectorXd& knots() const { return knots_; }
    const Eigen::VectorXd& values() const { return values_; }
    double p0() const { return p0_; }
    double a() const { return a_; }

    double x_min() const { return knots_[0]; }
    double x_max() const { return knots_[knots_.size() - 1]; }
    double sup_abs() const { return values_.cwiseAbs().maxCoeff(); }

    /// f_I(x).
    double operator()(double x) const;

    /// Pieces of f_I^+ (support within [x_min, p0]), values nonnegative.
    const std::vector<LinearPiece>& positive_pieces() const { return plus_; }
    /// Pieces of f_I^- (support within [p0, x_max]), values nonnegative.
    const std::vector<LinearPiece>& negative_pieces() const { return minus_; }

    /// Mirror image x -> 2 p0 - x, f -> -f. Satisfies the same sign conditions.
    Datum reflected() const;
    Datum scaled(double factor) const;

    /// Stable 16-hex-digit hash of (knots, values, p0, a).
    std::string fingerprint() const;

private:
    friend Datum make_datum(const Eigen::Ref<const Eigen::VectorXd>&,
                            const Eigen::Ref<const Eigen::VectorXd>&, double, double);
    Datum() = default;

    Eigen::VectorXd knots_;
    Eigen::VectorXd values_;
    double p0_ = 0.0;
    double a_ = 1.0;
    std::vector<LinearPiece> plus_;
    std::vector<LinearPiece> minus_;
};

/// Validates the sign structure and returns a Datum. If p0 falls strictly
/// inside a segment it is inserted as a knot (the interpolant is unchanged).
///
/// Throws Error with kind BadGrid, SignViolation, MissingZero or InvalidArgument.
Datum make_datum(const Eigen::Ref<const Eigen::VectorXd>& knots,
                 const Eigen::Ref<const Eigen::VectorXd>& values, double p0, double a);
Datum make_datum(const std::vector<double>& knots, const std::vector<double>& values,
                 double p0, double a);

/// Named presets: "tent", "skew", "zero-mass-asym".
Datum preset(std::string_view name);
std::vector<std::string> preset_names();

/// Exact masses of the positive and negative parts.
MassPair masses(const Datum& d);

/// Integral of z |f_I(z)| divided by M+ + M-. Throws ZeroMassPair for a zero datum.
double weighted_center(const Datum& d);

}  // namespace priceflow
