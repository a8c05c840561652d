#include "priceflow/runner.hpp"

#include "priceflow/asymptotics.hpp"
#include "priceflow/error.hpp"
#include "priceflow/heatflow.hpp"
#include "priceflow/refsolver.hpp"
#include "priceflow/transform.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace priceflow {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    return out;
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create output directory " + dir);
    return fs::path(dir);
}

PriceTrajectory run_heat(const RunConfig& cfg, const Datum& d) {
    const HeatField hf(forward_transform(d), cfg.tail_tolerance);
    TrajectoryOptions options;
    options.xtol = cfg.xtol;
    return trajectory(hf, cfg.sample_times(), options);
}

FDSolution run_fd(const RunConfig& cfg, const Datum& d, bool keep_snapshots) {
    const FDGrid g = make_grid(cfg.L, cfg.n, cfg.dt, cfg.scheme);
    const auto times = cfg.sample_times();
    return solve(d, g, times.back(), times, keep_snapshots);
}

void write_snapshots(const fs::path& dir, const RunConfig& cfg, const FDSolution& sol) {
    const fs::path snap_dir = prepare_dir((dir / "snapshots").string());
    const FDGrid g = make_grid(cfg.L, cfg.n, cfg.dt, cfg.scheme);
    const Eigen::VectorXd x = g.nodes();
    std::ofstream index = open_output(snap_dir / "index.csv");
    index << "index,t,file\n";
    for (std::size_t k = 0; k < sol.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%04zu.csv", k);
        index << k << ',' << format_real(sol.snapshots[k].t) << ',' << name << '\n';
        std::ofstream out = open_output(snap_dir / name);
        out << "x,f\n";
        for (Eigen::Index i = 0; i < x.size(); ++i)
            out << format_real(x[i]) << ',' << format_real(sol.snapshots[k].f[i]) << '\n';
    }
}

void write_gnuplot(const fs::path& dir, bool heat, bool fd) {
    std::ofstream gp = open_output(dir / "trajectory.gp");
    gp << "set datafile separator ','\n"
          "set xlabel 't'\n"
          "set ylabel 'p(t)'\n"
          "set logscale x\n"
          "set key left top\n"
          "plot ";
    bool first = true;
    for (const auto& [enabled, tag] :
         {std::pair{heat, "heat-transform"}, std::pair{fd, "fd-reference"}}) {
        if (!enabled) continue;
        if (!first) gp << ", \\\n     ";
        gp << "'trajectory.csv' using 1:(strcol(4) eq '" << tag << "' ? $2 : 1/0) "
           << "with linespoints title '" << tag << "'";
        first = false;
    }
    gp << '\n';
}

void write_report(const fs::path& dir, const ComparisonReport& report, std::ostream& out) {
    std::ofstream file = open_output(dir / "report.txt");
    for (std::ostream* s : {static_cast<std::ostream*>(&file), &out}) {
        *s << "shared_times=" << report.shared << '\n'
           << "max_abs_dev=" << format_real(report.max_abs) << '\n'
           << "rms_abs_dev=" << format_real(report.rms_abs) << '\n'
           << "gate=" << format_real(report.gate) << '\n'
           << "status=" << (report.passed() ? "pass" : "fail") << '\n';
    }
}

void simulate(const RunConfig& cfg, MethodSelection method, bool fd_snapshots, std::ostream& out) {
    const Datum d = cfg.build_datum();
    const fs::path dir = prepare_dir(cfg.out_dir);
    const bool heat = method != MethodSelection::Fd;
    const bool fd = method != MethodSelection::Heat;

    std::vector<PriceTrajectory> trajectories;
    if (heat) trajectories.push_back(run_heat(cfg, d));
    if (fd) {
        FDSolution sol = run_fd(cfg, d, fd_snapshots);
        if (fd_snapshots) write_snapshots(dir, cfg, sol);
        trajectories.push_back(std::move(sol.trajectory));
    }
    {
        std::ofstream csv = open_output(dir / "trajectory.csv");
        write_trajectory_csv(csv, trajectories);
    }
    out << "wrote " << (dir / "trajectory.csv").string() << '\n';
    if (cfg.gnuplot) write_gnuplot(dir, heat, fd);
    if (heat && fd) write_report(dir, compare_trajectories(trajectories[0], trajectories[1], cfg.gate), out);
}

void field(const RunConfig& cfg, std::ostream& out) {
    const Datum d = cfg.build_datum();
    const fs::path dir = prepare_dir(cfg.out_dir);
    const HeatField hf(forward_transform(d), cfg.tail_tolerance);
    std::ofstream csv = open_output(dir / "field.csv");
    csv << "x,t,F,F_x\n";
    for (const double t : cfg.sample_times()) {
        for (int i = 0; i < cfg.nx; ++i) {
            const double x = cfg.x_min + (cfg.x_max - cfg.x_min) * i / (cfg.nx - 1);
            const ValueAndSlope v = hf.evaluate(x, t);
            csv << format_real(x) << ',' << format_real(t) << ',' << format_real(v.value) << ','
                << format_real(v.slope) << '\n';
        }
    }
    out << "wrote " << (dir / "field.csv").string() << '\n';
}

void dump_transform(const RunConfig& cfg, std::ostream& out) {
    const TransformedField tf = forward_transform(cfg.build_datum());
    const fs::path dir = prepare_dir(cfg.out_dir);
    std::ofstream csv = open_output(dir / "transform.csv");
    csv << "x,F_I\n";
    for (int i = 0; i < cfg.nx; ++i) {
        const double x = cfg.x_min + (cfg.x_max - cfg.x_min) * i / (cfg.nx - 1);
        csv << format_real(x) << ',' << format_real(tf(x)) << '\n';
    }
    out << "wrote " << (dir / "transform.csv").string() << '\n';
}

void asympt(const RunConfig& cfg, std::ostream& out) {
    const Datum d = cfg.build_datum();
    const AsymptoticLaw law = asymptotic_law(d);
    if (law.kind == LawKind::SqrtDrift) {
        out << "kind=sqrt-drift\n" << "q_inf=" << format_real(law.q_inf) << '\n';
    } else {
        out << "kind=bounded-limit\n" << "p_inf=" << format_real(law.p_inf) << '\n';
    }
    if (cfg.trajectory_csv.empty()) return;
    std::ifstream in(cfg.trajectory_csv);
    if (!in) throw Error(ErrorKind::IoError, "cannot read " + cfg.trajectory_csv);
    const PriceTrajectory traj = read_trajectory_csv(in);
    const SqrtFit fit = fit_sqrt_coefficient(traj, cfg.fit_t_min.value_or(0.0),
                                             cfg.fit_t_max.value_or(INFINITY), d.p0());
    out << "fit_points=" << fit.count << '\n'
        << "q_hat=" << format_real(fit.q_hat) << '\n'
        << "residual=" << format_real(fit.residual) << '\n';
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
    if (name == "simulate") return Command::Simulate;
    if (name == "fd") return Command::Fd;
    if (name == "field") return Command::Field;
    if (name == "dump-transform") return Command::DumpTransform;
    if (name == "asympt") return Command::Asympt;
    if (name == "compare") return Command::Compare;
    return std::nullopt;
}

std::string format_real(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

void write_trajectory_csv(std::ostream& out, const std::vector<PriceTrajectory>& trajectories) {
    out << kTrajectoryHeader << '\n';
    for (const auto& traj : trajectories) {
        const std::string tag = to_string(traj.method);
        for (const auto& pt : traj.points)
            out << format_real(pt.t) << ',' << format_real(pt.p) << ',' << format_real(pt.lambda)
                << ',' << tag << '\n';
    }
}

PriceTrajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryHeader)
        throw Error(ErrorKind::ParseError, "trajectory CSV must start with t,p,lambda,method");
    PriceTrajectory traj;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string t, p, lambda, method;
        if (!std::getline(row, t, ',') || !std::getline(row, p, ',') ||
            !std::getline(row, lambda, ',') || !std::getline(row, method))
            throw Error(ErrorKind::ParseError, "malformed trajectory row " + std::to_string(line_no));
        PricePoint pt;
        try {
            pt.t = std::stod(t);
            pt.p = std::stod(p);
            pt.lambda = std::stod(lambda);
        } catch (const std::exception&) {
            throw Error(ErrorKind::ParseError, "bad number in trajectory row " + std::to_string(line_no));
        }
        pt.lo = pt.hi = pt.p;
        traj.method = method == "fd-reference" ? Method::FdReference : Method::HeatTransform;
        traj.points.push_back(pt);
    }
    return traj;
}

ComparisonReport compare_trajectories(const PriceTrajectory& heat, const PriceTrajectory& fd,
                                      double gate) {
    ComparisonReport report;
    report.gate = gate;
    double sum_sq = 0.0;
    std::size_t j = 0;
    for (const auto& h : heat.points) {
        while (j < fd.points.size() && fd.points[j].t < h.t * (1.0 - 1e-12)) ++j;
        if (j == fd.points.size()) break;
        if (std::abs(fd.points[j].t - h.t) > 1e-12 * std::max(1.0, h.t)) continue;
        const double dev = std::abs(h.p - fd.points[j].p);
        report.max_abs = std::max(report.max_abs, dev);
        sum_sq += dev * dev;
        ++report.shared;
    }
    if (report.shared > 0) report.rms_abs = std::sqrt(sum_sq / static_cast<double>(report.shared));
    return report;
}

int run(const RunConfig& config, Command command, std::ostream& out, std::ostream& err) {
    try {
        switch (command) {
            case Command::Simulate: simulate(config, config.method, config.snapshots, out); break;
            case Command::Fd: simulate(config, MethodSelection::Fd, true, out); break;
            case Command::Compare: simulate(config, MethodSelection::Both, config.snapshots, out); break;
            case Command::Field: field(config, out); break;
            case Command::DumpTransform: dump_transform(config, out); break;
            case Command::Asympt: asympt(config, out); break;
        }
    } catch (const Error& e) {
        const bool config_error = e.kind() == ErrorKind::ParseError ||
                                  e.kind() == ErrorKind::UnknownKey ||
                                  e.kind() == ErrorKind::ValidationError ||
                                  e.kind() == ErrorKind::IoError;
        err << "error kind=" << to_string(e.kind()) << " message=\"" << e.what() << "\"\n";
        return config_error ? 2 : 3;
    }
    return 0;
}

}  // namespace priceflow
