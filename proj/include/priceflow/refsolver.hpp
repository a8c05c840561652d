#pragma once

#include "priceflow/datum.hpp"
#include "priceflow/pricepath.hpp"

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace priceflow {

enum class Scheme { Explicit, Implicit };

/// Uniform grid on [-L, L] with n cells (n + 1 nodes) and time step dt.
struct FDGrid {
    double L = 30.0;
    Eigen::Index n = 15000;
    double dt = 0.0;
    Scheme scheme = Scheme::Implicit;

    double h() const { return 2.0 * L / static_cast<double>(n); }
    /// Node i; computed so that node(n - i) == -node(i) exactly.
    double node(Eigen::Index i) const {
        return static_cast<double>(2 * i - n) * L / static_cast<double>(n);
    }
    Eigen::VectorXd nodes() const;
};

/// Validated grid. dt <= 0 selects the default: 0.4 h^2 for the explicit
/// scheme, h / 2 for the implicit one. An explicit dt above h^2 / 2 is
/// rejected with Instability.
FDGrid make_grid(double L, Eigen::Index n, double dt = 0.0, Scheme scheme = Scheme::Implicit);

struct FDState {
    Eigen::VectorXd f;  ///< nodal density, f(+-L) = 0
    double t = 0.0;
    double p = 0.0;
    double lambda = 0.0;
    double a = 1.0;          ///< transaction cost (offset of the sources)
    Eigen::Index cell = -1;  ///< crossing lies in [node(cell), node(cell + 1)]; -1 if none
};

/// Samples f_I on the grid. Requires supp(f_I) and [p0 - 2a, p0 + 2a] inside
/// [-L/2, L/2] (DomainTooSmall) and a / h >= 8 (BadGrid).
FDState init_state(const Datum& d, const FDGrid& g);

/// One step: diffuse with homogeneous Dirichlet ends, then deposit
/// +lambda dt at p - a and -lambda dt at p + a with hat weights, where p is
/// the interpolated nodal zero and lambda the slope estimate at p (taken
/// after diffusion for the implicit scheme, before it for the explicit one).
/// Throws Instability if sup|f| more than doubles.
FDState step(FDState state, const FDGrid& g);

/// Exact integrals of the positive and negative parts of the nodal interpolant.
MassPair masses(const FDState& state, const FDGrid& g);

/// Time marcher that reuses the tridiagonal factorisation between steps.
class FDSolver {
public:
    FDSolver(const Datum& d, FDGrid g);
    FDSolver(FDState state, FDGrid g);

    const FDState& state() const { return state_; }
    FDState release() && { return std::move(state_); }
    const FDGrid& grid() const { return grid_; }

    void advance(double dt);
    /// Steps of at most grid().dt, landing exactly on `target`. The implicit
    /// scheme ramps the step up geometrically from h^2 over the first steps.
    void advance_to(double target);

private:
    struct Factor {
        double r = -1.0;
        Eigen::VectorXd c;      // modified super-diagonal
        Eigen::VectorXd scale;  // 1 / modified diagonal
        Eigen::VectorXd carry;  // r / modified diagonal
    };
    const Factor& factor_for(double dt);
    double diffuse(double dt);  // returns sup|f| after the update
    void deposit(double x, double mass);
    void relocate();

    FDGrid grid_;
    FDState state_;
    Factor main_factor_;
    Factor scratch_factor_;
    Eigen::VectorXd work_;
    double nominal_dt() const;

    long steps_ = 0;
    double sup_ = -1.0;  // sup|f| of the current state, -1 until known
};

struct Snapshot {
    double t = 0.0;
    Eigen::VectorXd f;
};

struct FDSolution {
    PriceTrajectory trajectory;
    std::vector<Snapshot> snapshots;
};

/// Marches to T, recording a PricePoint and a snapshot at each sample time.
FDSolution solve(const Datum& d, const FDGrid& g, double T, const std::vector<double>& sample_times,
                 bool keep_snapshots = true);

}  // namespace priceflow
