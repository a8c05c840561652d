#include "priceflow/refsolver.hpp"

#include "priceflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace priceflow {

namespace {

constexpr double kRampGrowth = 1.25;

// Nearest index i to `hint` with f[i] > 0 >= f[i + 1].
std::optional<Eigen::Index> locate_crossing(const Eigen::VectorXd& f, Eigen::Index hint) {
    const Eigen::Index last = f.size() - 2;
    if (last < 0) return std::nullopt;
    hint = std::clamp<Eigen::Index>(hint < 0 ? f.size() / 2 : hint, 0, last);
    auto is_crossing = [&f](Eigen::Index i) { return f[i] > 0.0 && f[i + 1] <= 0.0; };
    for (Eigen::Index offset = 0; offset <= last; ++offset) {
        if (hint - offset >= 0 && is_crossing(hint - offset)) return hint - offset;
        if (hint + offset <= last && is_crossing(hint + offset)) return hint + offset;
        if (hint - offset < 0 && hint + offset > last) break;
    }
    return std::nullopt;
}

// Slope at p from the cells on either side of the crossing cell [i, i+1],
// linearly interpolated to p. When p sits on node i+1 the centred
// difference about that node is used.
double boundary_slope(const Eigen::VectorXd& f, Eigen::Index i, double p, const FDGrid& g) {
    const double h = g.h();
    if (i < 1 || i + 2 >= f.size())
        throw Error(ErrorKind::DomainTooSmall, "free boundary reached the domain edge");
    if (f[i + 1] == 0.0) return (f[i + 2] - f[i]) / (2.0 * h);
    const double left = (f[i] - f[i - 1]) / h;       // at node(i) - h/2
    const double right = (f[i + 2] - f[i + 1]) / h;  // at node(i+1) + h/2
    const double w = (p - (g.node(i) - 0.5 * h)) / (2.0 * h);
    return left + w * (right - left);
}

}  // namespace

Eigen::VectorXd FDGrid::nodes() const {
    Eigen::VectorXd x(n + 1);
    for (Eigen::Index i = 0; i <= n; ++i) x[i] = node(i);
    return x;
}

FDGrid make_grid(double L, Eigen::Index n, double dt, Scheme scheme) {
    if (!(L > 0.0) || n < 4) throw Error(ErrorKind::BadGrid, "need L > 0 and at least 4 cells");
    FDGrid g{L, n, dt, scheme};
    const double h = g.h();
    if (!(dt > 0.0)) g.dt = scheme == Scheme::Explicit ? 0.4 * h * h : 0.5 * h;
    if (scheme == Scheme::Explicit && g.dt > 0.5 * h * h) {
        std::ostringstream msg;
        msg << "explicit scheme needs dt <= h^2/2 = " << 0.5 * h * h << ", got " << g.dt;
        throw Error(ErrorKind::Instability, msg.str());
    }
    return g;
}

FDState init_state(const Datum& d, const FDGrid& g) {
    const double h = g.h();
    if (d.a() / h < 8.0) throw Error(ErrorKind::BadGrid, "a / h must be at least 8");
    const double lo = std::min(d.x_min(), d.p0() - 2.0 * d.a());
    const double hi = std::max(d.x_max(), d.p0() + 2.0 * d.a());
    if (lo < -0.5 * g.L || hi > 0.5 * g.L) {
        std::ostringstream msg;
        msg << "support [" << lo << ", " << hi << "] does not fit in [-L/2, L/2] with L=" << g.L;
        throw Error(ErrorKind::DomainTooSmall, msg.str());
    }
    FDState s;
    s.f.resize(g.n + 1);
    for (Eigen::Index i = 0; i <= g.n; ++i) s.f[i] = d(g.node(i));
    s.t = 0.0;
    s.p = d.p0();
    s.a = d.a();
    const auto hint = static_cast<Eigen::Index>(std::floor((d.p0() + g.L) / h));
    if (const auto cell = locate_crossing(s.f, hint)) {
        s.cell = *cell;
        s.lambda = std::max(0.0, -boundary_slope(s.f, s.cell, s.p, g));
    }
    return s;
}

MassPair masses(const FDState& state, const FDGrid& g) {
    const double h = g.h();
    MassPair m;
    for (Eigen::Index i = 0; i + 1 < state.f.size(); ++i) {
        const double u = state.f[i];
        const double v = state.f[i + 1];
        if (u >= 0.0 && v >= 0.0) {
            m.m_plus += 0.5 * h * (u + v);
        } else if (u <= 0.0 && v <= 0.0) {
            m.m_minus -= 0.5 * h * (u + v);
        } else {
            // linear piece changes sign inside the cell
            const double zero = h * u / (u - v);
            const double pos = u > 0.0 ? 0.5 * zero * u : 0.5 * (h - zero) * v;
            const double neg = u > 0.0 ? -0.5 * (h - zero) * v : -0.5 * zero * u;
            m.m_plus += pos;
            m.m_minus += neg;
        }
    }
    return m;
}

FDSolver::FDSolver(const Datum& d, FDGrid g) : FDSolver(init_state(d, g), g) {}

FDSolver::FDSolver(FDState state, FDGrid g)
    : grid_(g), state_(std::move(state)), work_(g.n + 1) {
    if (state_.f.size() != g.n + 1)
        throw Error(ErrorKind::BadGrid, "state does not match the grid");
}

const FDSolver::Factor& FDSolver::factor_for(double dt) {
    const double h = grid_.h();
    const double r = dt / (h * h);
    Factor& slot = (dt == grid_.dt) ? main_factor_ : scratch_factor_;
    if (slot.r == r) return slot;
    const Eigen::Index m = grid_.n - 1;
    slot.r = r;
    slot.c.resize(m);
    slot.scale.resize(m);
    slot.carry.resize(m);
    double previous_c = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        const double denom = 1.0 + 2.0 * r + r * previous_c;
        slot.scale[k] = 1.0 / denom;
        slot.carry[k] = r / denom;
        slot.c[k] = -r / denom;
        previous_c = slot.c[k];
    }
    return slot;
}

double FDSolver::diffuse(double dt) {
    const Eigen::Index n = grid_.n;
    const double h = grid_.h();
    const double r = dt / (h * h);
    const double* f = state_.f.data();
    double* u = work_.data();
    double sup = 0.0;
    u[0] = 0.0;
    u[n] = 0.0;
    if (grid_.scheme == Scheme::Explicit) {
        for (Eigen::Index k = 1; k < n; ++k) {
            u[k] = f[k] + r * (f[k - 1] - 2.0 * f[k] + f[k + 1]);
            sup = std::max(sup, std::abs(u[k]));
        }
    } else {
        // (1 + 2r) u_k - r u_{k-1} - r u_{k+1} = f_k on interior nodes 1..n-1.
        // Backward Euler obeys the maximum principle, so sup|f| cannot grow.
        const Factor& fac = factor_for(dt);
        const double* c = fac.c.data();
        const double* scale = fac.scale.data();
        const double* carry = fac.carry.data();
        const Eigen::Index m = n - 1;
        double previous = 0.0;
        for (Eigen::Index k = 0; k < m; ++k) {
            previous = f[k + 1] * scale[k] + carry[k] * previous;
            u[k + 1] = previous;
        }
        for (Eigen::Index k = m - 2; k >= 0; --k) u[k + 1] -= c[k] * u[k + 2];
        sup = sup_;
    }
    state_.f.swap(work_);
    return sup;
}

void FDSolver::deposit(double x, double mass) {
    const double h = grid_.h();
    const auto j = static_cast<Eigen::Index>(std::floor((x + grid_.L) / h));
    if (j < 1 || j + 1 > grid_.n - 1)
        throw Error(ErrorKind::DomainTooSmall, "delta source left the computational domain");
    const double w = (x - grid_.node(j)) / h;
    state_.f[j] += (1.0 - w) * mass / h;
    state_.f[j + 1] += w * mass / h;
    sup_ = std::max({sup_, std::abs(state_.f[j]), std::abs(state_.f[j + 1])});
}

void FDSolver::relocate() {
    const auto cell = locate_crossing(state_.f, state_.cell);
    if (!cell) {
        state_.cell = -1;
        state_.lambda = 0.0;
        return;
    }
    const Eigen::Index i = *cell;
    const double u = state_.f[i];
    const double v = state_.f[i + 1];
    state_.cell = i;
    state_.p = grid_.node(i) + grid_.h() * u / (u - v);
    state_.lambda = std::max(0.0, -boundary_slope(state_.f, i, state_.p, grid_));
}

void FDSolver::advance(double dt) {
    if (sup_ < 0.0) sup_ = state_.f.cwiseAbs().maxCoeff();
    const double before = sup_;
    sup_ = diffuse(dt);
    // Backward Euler removes mass across p at the rate of the new state, so
    // the implicit scheme takes p and lambda after diffusion; the explicit
    // scheme keeps the values from the start of the step.
    if (grid_.scheme == Scheme::Implicit) relocate();
    if (state_.lambda > 0.0) {
        deposit(state_.p - state_.a, state_.lambda * dt);
        deposit(state_.p + state_.a, -state_.lambda * dt);
    }
    state_.t += dt;
    ++steps_;
    if (!std::isfinite(sup_) || (before > 0.0 && sup_ > 2.0 * before)) {
        std::ostringstream msg;
        msg << "sup|f| grew from " << before << " to " << sup_ << " at t=" << state_.t;
        throw Error(ErrorKind::Instability, msg.str());
    }
    relocate();
}

double FDSolver::nominal_dt() const {
    if (grid_.scheme == Scheme::Explicit) return grid_.dt;
    // Geometric start-up ramp from h^2: the first steps resolve the kink of
    // the initial datum at p0.
    const double h = grid_.h();
    const double ramped = h * h * std::pow(kRampGrowth, static_cast<double>(steps_));
    return std::min(grid_.dt, ramped);
}

void FDSolver::advance_to(double target) {
    while (state_.t < target) {
        const double remaining = target - state_.t;
        const double dt = nominal_dt();
        if (remaining <= dt * (1.0 + 1e-9)) {
            advance(remaining);
            state_.t = target;
        } else {
            advance(dt);
        }
    }
}

FDState step(FDState state, const FDGrid& g) {
    FDSolver solver(std::move(state), g);
    solver.advance(g.dt);
    return std::move(solver).release();
}

FDSolution solve(const Datum& d, const FDGrid& g, double T, const std::vector<double>& sample_times,
                 bool keep_snapshots) {
    if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "T must be positive");
    std::vector<double> samples = sample_times;
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
    if (!samples.empty() && (samples.front() < 0.0 || samples.back() > T))
        throw Error(ErrorKind::InvalidArgument, "sample times must lie in [0, T]");

    FDSolver solver(d, g);
    FDSolution out;
    out.trajectory.method = Method::FdReference;
    out.trajectory.datum_fingerprint = d.fingerprint();
    for (const double ts : samples) {
        solver.advance_to(ts);
        const FDState& s = solver.state();
        PricePoint pp;
        pp.t = ts;
        pp.p = s.p;
        pp.lambda = s.lambda;
        pp.lo = s.cell >= 0 ? g.node(s.cell) : s.p;
        pp.hi = s.cell >= 0 ? g.node(s.cell + 1) : s.p;
        out.trajectory.points.push_back(pp);
        if (keep_snapshots) out.snapshots.push_back({ts, s.f});
    }
    solver.advance_to(T);
    return out;
}

}  // namespace priceflow
