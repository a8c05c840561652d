#pragma once

#include "priceflow/config.hpp"
#include "priceflow/pricepath.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace priceflow {

enum class Command { Simulate, Fd, Field, DumpTransform, Asympt, Compare };

std::optional<Command> parse_command(std::string_view name);

/// Fixed-format real: 17 significant digits, "%.17g".
std::string format_real(double value);

inline constexpr std::string_view kTrajectoryHeader = "t,p,lambda,method";

/// Writes rows "t,p,lambda,method" (header included) for each trajectory.
void write_trajectory_csv(std::ostream& out, const std::vector<PriceTrajectory>& trajectories);

/// Reads a file written by write_trajectory_csv; rows of every method are
/// returned in file order.
PriceTrajectory read_trajectory_csv(std::istream& in);

struct ComparisonReport {
    std::size_t shared = 0;
    double max_abs = 0.0;
    double rms_abs = 0.0;
    double gate = 0.0;
    bool passed() const { return shared > 0 && max_abs <= gate; }
};

/// |p_heat - p_fd| over times present in both trajectories.
ComparisonReport compare_trajectories(const PriceTrajectory& heat, const PriceTrajectory& fd,
                                      double gate);

/// Executes a subcommand. Returns 0 on success, 2 on configuration errors,
/// 3 on solver errors; failures print one "error kind=... message=..." line
/// to `err`.
int run(const RunConfig& config, Command command, std::ostream& out, std::ostream& err);

}  // namespace priceflow
