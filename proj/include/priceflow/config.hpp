#pragma once

#include "priceflow/datum.hpp"
#include "priceflow/refsolver.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace priceflow {

enum class MethodSelection { Heat, Fd, Both };

struct DatumSpec {
    std::string name = "tent";  ///< preset name or "custom"
    std::vector<double> knots;
    std::vector<double> values;
    std::optional<double> p0;
    std::optional<double> a;
};

/// Explicit list, or log-spaced from t_min to t_max.
struct TimesSpec {
    std::vector<double> list;
    double t_min = 0.1;
    double t_max = 100.0;
    int count = 0;  ///< 0: points_per_decade per decade
    double points_per_decade = 20.0;
};

struct RunConfig {
    DatumSpec datum;
    MethodSelection method = MethodSelection::Heat;
    TimesSpec times;

    double xtol = 1e-8;
    double tail_tolerance = 1e-10;

    double L = 30.0;
    long n = 15000;
    double dt = 0.0;  ///< 0: scheme default
    Scheme scheme = Scheme::Implicit;

    std::string out_dir = ".";
    bool gnuplot = false;
    bool snapshots = false;
    double gate = 5e-2;  ///< max |p_heat - p_fd| accepted by the comparison report

    // field / dump-transform window
    double x_min = -5.0;
    double x_max = 5.0;
    int nx = 201;

    // asympt
    std::string trajectory_csv;
    std::optional<double> fit_t_min;
    std::optional<double> fit_t_max;

    Datum build_datum() const;
    std::vector<double> sample_times() const;
};

/// Flat key = value text (TOML syntax subset: strings, numbers, booleans,
/// single-line numeric arrays, # comments). Omitted keys keep their defaults.
/// Throws ParseError, UnknownKey or ValidationError.
RunConfig parse_config(std::string_view text);

std::vector<std::string> config_keys();

}  // namespace priceflow
