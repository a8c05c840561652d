#pragma once

#include "priceflow/heatflow.hpp"

#include <optional>
#include <string>
#include <vector>

namespace priceflow {

struct PricePoint {
    double t = 0.0;
    double p = 0.0;
    double lambda = 0.0;  ///< transaction rate -f_x(p, t), clamped at 0
    double lo = 0.0;      ///< F(lo, t) >= 0
    double hi = 0.0;      ///< F(hi, t) <= 0
};

enum class Method { HeatTransform, FdReference };

std::string to_string(Method method);

struct PriceTrajectory {
    std::vector<PricePoint> points;
    Method method = Method::HeatTransform;
    std::string datum_fingerprint;
};

struct PriceSearchOptions {
    double xtol = 1e-8;
    /// Bracket expansion stops past this radius around the start; default
    /// 50 (1 + sqrt(t)) when unset.
    std::optional<double> max_radius;
    /// Bracket centre; p0 when unset.
    std::optional<double> start;
};

/// Zero of F(., t): expands [start - 1, start + 1] by doubling until it
/// certifies a sign change, then bisects down to xtol.
/// Throws BracketFailure when the radius cap is reached first.
PricePoint find_price(const HeatField& hf, double t, const PriceSearchOptions& options = {});

/// max(0, -F_x(p, t)). Near p the shifted positive parts in the
/// reconstruction vanish, so f_x(p, t) = F_x(p, t).
double lambda_at(const HeatField& hf, const PricePoint& pp);

/// Checks that F has the expected sign at `samples` log-spaced points on
/// each side outside the bracket, out to `reach`.
bool certify_single_crossing(const HeatField& hf, const PricePoint& pp, int samples = 16,
                             double reach = 0.0);

struct TrajectoryOptions {
    double xtol = 1e-8;
    bool warm_start = true;
    /// Worker threads; 0 reads PRICEFLOW_THREADS (default 1).
    unsigned threads = 0;
};

/// One PricePoint per time. Times must be strictly increasing and positive.
PriceTrajectory trajectory(const HeatField& hf, const std::vector<double>& times,
                           const TrajectoryOptions& options = {});

/// Worker count from PRICEFLOW_THREADS, at least 1.
unsigned thread_budget();

}  // namespace priceflow
