#include "priceflow/pricepath.hpp"

#include "priceflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

namespace priceflow {

std::string to_string(Method method) {
    return method == Method::HeatTransform ? "heat-transform" : "fd-reference";
}

PricePoint find_price(const HeatField& hf, double t, const PriceSearchOptions& options) {
    if (!(t > 0.0)) throw Error(ErrorKind::NonpositiveTime, "find_price needs t > 0");
    if (!(options.xtol > 0.0)) throw Error(ErrorKind::InvalidArgument, "xtol must be positive");

    const double centre = options.start.value_or(hf.datum().p0());
    const double cap = options.max_radius.value_or(50.0 * (1.0 + std::sqrt(t)));

    double left_radius = 1.0;
    double right_radius = 1.0;
    double lo = centre - left_radius;
    double hi = centre + right_radius;
    double f_lo = hf.value(lo, t);
    double f_hi = hf.value(hi, t);
    // Both ends need a strict sign: an exact zero far out is usually
    // underflow, not a crossing.
    while (!(f_lo > 0.0 && f_hi < 0.0)) {
        if (!(f_lo > 0.0)) {
            if (left_radius > cap) break;
            if (f_lo < 0.0) {
                hi = lo;
                f_hi = f_lo;
            }
            left_radius *= 2.0;
            lo = centre - left_radius;
            f_lo = hf.value(lo, t);
        } else {
            if (right_radius > cap) break;
            if (f_hi > 0.0) {
                lo = hi;
                f_lo = f_hi;
            }
            right_radius *= 2.0;
            hi = centre + right_radius;
            f_hi = hf.value(hi, t);
        }
    }
    if (!(f_lo > 0.0 && f_hi < 0.0)) {
        std::ostringstream msg;
        msg << "no sign change of F(., t=" << t << ") within radius " << cap << " of "
            << centre;
        throw Error(ErrorKind::BracketFailure, msg.str());
    }

    while (hi - lo > options.xtol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = hf.value(mid, t);
        if (f_mid > 0.0) {
            lo = mid;
        } else if (f_mid < 0.0) {
            hi = mid;
        } else {
            lo = hi = mid;
        }
    }
    PricePoint pp;
    pp.t = t;
    pp.lo = lo;
    pp.hi = hi;
    pp.p = 0.5 * (lo + hi);
    pp.lambda = lambda_at(hf, pp);
    return pp;
}

double lambda_at(const HeatField& hf, const PricePoint& pp) {
    return std::max(0.0, -hf.slope(pp.p, pp.t));
}

bool certify_single_crossing(const HeatField& hf, const PricePoint& pp, int samples,
                             double reach) {
    if (reach <= 0.0) reach = 20.0 * (1.0 + std::sqrt(pp.t)) + hf.datum().a();
    const double first = std::max(hf.transformed().a() * 1e-3, pp.hi - pp.lo);
    for (int k = 0; k < samples; ++k) {
        const double offset =
            first * std::pow(reach / first, static_cast<double>(k) / std::max(1, samples - 1));
        if (!(hf.value(pp.lo - offset, pp.t) > 0.0)) return false;
        if (!(hf.value(pp.hi + offset, pp.t) < 0.0)) return false;
    }
    return true;
}

unsigned thread_budget() {
    if (const char* env = std::getenv("PRICEFLOW_THREADS")) {
        const long requested = std::strtol(env, nullptr, 10);
        if (requested > 0) return static_cast<unsigned>(requested);
    }
    return 1;
}

PriceTrajectory trajectory(const HeatField& hf, const std::vector<double>& times,
                           const TrajectoryOptions& options) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0))
            throw Error(ErrorKind::InvalidArgument, "trajectory times must be positive");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw Error(ErrorKind::InvalidArgument, "trajectory times must be strictly increasing");
    }

    PriceTrajectory out;
    out.method = Method::HeatTransform;
    out.datum_fingerprint = hf.datum().fingerprint();
    out.points.resize(times.size());
    if (times.empty()) return out;

    const unsigned workers = std::clamp<unsigned>(
        options.threads == 0 ? thread_budget() : options.threads, 1u,
        static_cast<unsigned>(times.size()));

    // Each worker takes a contiguous block so warm starts stay local.
    auto run_block = [&](std::size_t begin, std::size_t end) {
        std::optional<double> previous;
        for (std::size_t i = begin; i < end; ++i) {
            PriceSearchOptions search;
            search.xtol = options.xtol;
            if (options.warm_start) search.start = previous;
            try {
                out.points[i] = find_price(hf, times[i], search);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::BracketFailure || !search.start) throw;
                // a warm start far from the answer must not change the outcome
                search.start.reset();
                out.points[i] = find_price(hf, times[i], search);
            }
            previous = out.points[i].p;
        }
    };

    if (workers == 1) {
        run_block(0, times.size());
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        const std::size_t block = (times.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * block;
            const std::size_t end = std::min(times.size(), begin + block);
            if (begin >= end) break;
            pool.emplace_back([&, w, begin, end] {
                try {
                    run_block(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& error : errors)
        if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace priceflow
