#include "priceflow/datum.hpp"

#include "priceflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>
#include <iomanip>

namespace priceflow {

namespace {

double trapezoid(const LinearPiece& piece) {
    return 0.5 * (piece.z1 - piece.z0) * (piece.v0 + piece.v1);
}

// Exact integral of z * v(z) for linear v.
double first_moment(const LinearPiece& piece) {
    const double width = piece.z1 - piece.z0;
    return width / 6.0 *
           (piece.z0 * (2.0 * piece.v0 + piece.v1) + piece.z1 * (piece.v0 + 2.0 * piece.v1));
}

}  // namespace

bool MassPair::zero_total_mass(double rel_tol) const {
    return std::abs(m_plus - m_minus) <= rel_tol * (m_plus + m_minus);
}

double Datum::operator()(double x) const {
    const auto n = knots_.size();
    if (x < knots_[0] || x > knots_[n - 1]) return 0.0;
    const double* begin = knots_.data();
    const double* it = std::upper_bound(begin, begin + n, x);
    if (it == begin + n) return values_[n - 1];
    const auto i = static_cast<Eigen::Index>(it - begin) - 1;
    const double w = (x - knots_[i]) / (knots_[i + 1] - knots_[i]);
    return (1.0 - w) * values_[i] + w * values_[i + 1];
}

Datum Datum::reflected() const {
    const auto n = knots_.size();
    Eigen::VectorXd k(n), v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k[i] = 2.0 * p0_ - knots_[n - 1 - i];
        v[i] = -values_[n - 1 - i];
    }
    return make_datum(k, v, p0_, a_);
}

Datum Datum::scaled(double factor) const {
    return make_datum(knots_, values_ * factor, p0_, a_);
}

std::string Datum::fingerprint() const {
    std::uint64_t hash = 14695981039346656037ull;
    auto mix = [&hash](double value) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &value, sizeof bits);
        for (int byte = 0; byte < 8; ++byte) {
            hash ^= (bits >> (8 * byte)) & 0xffu;
            hash *= 1099511628211ull;
        }
    };
    for (Eigen::Index i = 0; i < knots_.size(); ++i) {
        mix(knots_[i]);
        mix(values_[i]);
    }
    mix(p0_);
    mix(a_);
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << hash;
    return out.str();
}

Datum make_datum(const Eigen::Ref<const Eigen::VectorXd>& knots,
                 const Eigen::Ref<const Eigen::VectorXd>& values, double p0, double a) {
    if (knots.size() != values.size())
        throw Error(ErrorKind::BadGrid, "knots and values differ in length");
    if (knots.size() < 2) throw Error(ErrorKind::BadGrid, "at least two knots are required");
    if (!knots.allFinite() || !values.allFinite() || !std::isfinite(p0))
        throw Error(ErrorKind::InvalidArgument, "non-finite datum entry");
    if (!(a > 0.0) || !std::isfinite(a))
        throw Error(ErrorKind::InvalidArgument, "transaction cost a must be positive");
    for (Eigen::Index i = 1; i < knots.size(); ++i) {
        if (!(knots[i] > knots[i - 1]))
            throw Error(ErrorKind::BadGrid, "knots must be strictly increasing");
    }

    std::vector<double> k(knots.begin(), knots.end());
    std::vector<double> v(values.begin(), values.end());
    const double scale = values.cwiseAbs().maxCoeff();
    const double zero_tol = 1e-12 * scale;

    // Make p0 a knot whenever it lies inside the support.
    if (p0 >= k.front() && p0 <= k.back()) {
        auto it = std::lower_bound(k.begin(), k.end(), p0);
        const auto i = static_cast<std::size_t>(it - k.begin());
        if (*it == p0) {
            if (std::abs(v[i]) > zero_tol)
                throw Error(ErrorKind::MissingZero, "f_I(p0) != 0");
            v[i] = 0.0;
        } else {
            const double w = (p0 - k[i - 1]) / (k[i] - k[i - 1]);
            const double at_p0 = (1.0 - w) * v[i - 1] + w * v[i];
            if (std::abs(at_p0) > zero_tol)
                throw Error(ErrorKind::MissingZero, "interpolant does not vanish at p0");
            k.insert(k.begin() + static_cast<std::ptrdiff_t>(i), p0);
            v.insert(v.begin() + static_cast<std::ptrdiff_t>(i), 0.0);
        }
    }

    // Strict signs on the open support; zeros only at the endpoints and at p0.
    const std::size_t n = k.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (k[i] == p0) continue;
        const bool endpoint = (i == 0 || i + 1 == n);
        const double signed_value = k[i] < p0 ? v[i] : -v[i];
        if (signed_value < 0.0 || (!endpoint && signed_value == 0.0)) {
            std::ostringstream msg;
            msg << "value " << v[i] << " at knot " << k[i] << " has the wrong sign relative to p0="
                << p0;
            throw Error(ErrorKind::SignViolation, msg.str());
        }
    }

    Datum d;
    d.knots_ = Eigen::Map<const Eigen::VectorXd>(k.data(), static_cast<Eigen::Index>(n));
    d.values_ = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(n));
    d.p0_ = p0;
    d.a_ = a;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (k[i + 1] <= p0)
            d.plus_.push_back({k[i], k[i + 1], v[i], v[i + 1]});
        else
            d.minus_.push_back({k[i], k[i + 1], -v[i], -v[i + 1]});
    }
    return d;
}

Datum make_datum(const std::vector<double>& knots, const std::vector<double>& values,
                 double p0, double a) {
    return make_datum(
        Eigen::Map<const Eigen::VectorXd>(knots.data(), static_cast<Eigen::Index>(knots.size())),
        Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())),
        p0, a);
}

Datum preset(std::string_view name) {
    if (name == "tent") return make_datum({-1.0, 0.0, 1.0}, {1.0, 0.0, -1.0}, 0.0, 1.0);
    if (name == "skew")
        return make_datum({-2.0, -1.0, 0.0, 0.5, 1.0}, {0.0, 1.0, 0.0, -1.0, 0.0}, 0.0, 1.0);
    if (name == "zero-mass-asym")
        return make_datum({-1.0, -0.5, 0.0, 1.0, 2.0}, {0.0, 2.0, 0.0, -1.0, 0.0}, 0.0, 1.0);
    throw Error(ErrorKind::ValidationError, "unknown datum preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"tent", "skew", "zero-mass-asym"}; }

MassPair masses(const Datum& d) {
    MassPair m;
    for (const auto& piece : d.positive_pieces()) m.m_plus += trapezoid(piece);
    for (const auto& piece : d.negative_pieces()) m.m_minus += trapezoid(piece);
    return m;
}

double weighted_center(const Datum& d) {
    const MassPair m = masses(d);
    if (!(m.total() > 0.0))
        throw Error(ErrorKind::ZeroMassPair, "weighted center of a zero datum is undefined");
    double moment = 0.0;
    for (const auto& piece : d.positive_pieces()) moment += first_moment(piece);
    for (const auto& piece : d.negative_pieces()) moment += first_moment(piece);
    return moment / m.total();
}

}  // namespace priceflow
