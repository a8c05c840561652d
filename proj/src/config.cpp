#include "priceflow/config.hpp"

#include "priceflow/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <variant>

namespace priceflow {

namespace {

using Value = std::variant<double, bool, std::string, std::vector<double>>;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(int line, const std::string& what) {
    std::ostringstream msg;
    msg << "line " << line << ": " << what;
    throw Error(ErrorKind::ParseError, msg.str());
}

double parse_number(std::string_view token, int line) {
    token = trim(token);
    std::string text(token);
    std::erase(text, '_');
    if (!text.empty() && text.front() == '+') text.erase(0, 1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || text.empty())
        parse_error(line, "expected a number, got '" + std::string(token) + "'");
    return value;
}

// Strips a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

Value parse_value(std::string_view raw, int line) {
    const std::string_view text = trim(raw);
    if (text.empty()) parse_error(line, "missing value");
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"') parse_error(line, "unterminated string");
        return std::string(text.substr(1, text.size() - 2));
    }
    if (text == "true") return true;
    if (text == "false") return false;
    if (text.front() == '[') {
        if (text.back() != ']') parse_error(line, "unterminated array");
        std::vector<double> items;
        std::string_view body = trim(text.substr(1, text.size() - 2));
        while (!body.empty()) {
            const auto comma = body.find(',');
            const std::string_view item = trim(body.substr(0, comma));
            if (item.empty()) {
                if (comma == std::string_view::npos) break;  // trailing comma
                parse_error(line, "empty array element");
            }
            items.push_back(parse_number(item, line));
            if (comma == std::string_view::npos) break;
            body = trim(body.substr(comma + 1));
        }
        return items;
    }
    return parse_number(text, line);
}

struct Entry {
    Value value;
    int line;
};

double as_number(const std::string& key, const Entry& e) {
    if (const auto* v = std::get_if<double>(&e.value)) return *v;
    parse_error(e.line, "key '" + key + "' expects a number");
}

std::string as_string(const std::string& key, const Entry& e) {
    if (const auto* v = std::get_if<std::string>(&e.value)) return *v;
    parse_error(e.line, "key '" + key + "' expects a string");
}

bool as_bool(const std::string& key, const Entry& e) {
    if (const auto* v = std::get_if<bool>(&e.value)) return *v;
    parse_error(e.line, "key '" + key + "' expects true or false");
}

std::vector<double> as_array(const std::string& key, const Entry& e) {
    if (const auto* v = std::get_if<std::vector<double>>(&e.value)) return *v;
    parse_error(e.line, "key '" + key + "' expects an array of numbers");
}

long as_integer(const std::string& key, const Entry& e) {
    const double v = as_number(key, e);
    if (v != std::floor(v) || std::abs(v) > 1e15)
        parse_error(e.line, "key '" + key + "' expects an integer");
    return static_cast<long>(v);
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ValidationError, what); }

}  // namespace

std::vector<std::string> config_keys() {
    return {"datum",   "knots",  "values",    "p0",        "a",
            "method",  "times",  "t_min",     "t_max",     "t_count",
            "points_per_decade", "xtol",      "tail_tolerance", "L",
            "n",       "dt",     "scheme",    "out_dir",   "gnuplot",
            "snapshots", "gate", "x_min",     "x_max",     "nx",
            "trajectory_csv", "fit_t_min", "fit_t_max"};
}

Datum RunConfig::build_datum() const {
    if (datum.name == "custom") {
        if (datum.knots.empty() || datum.values.empty())
            invalid("datum=\"custom\" needs both knots and values");
        if (!datum.p0) invalid("datum=\"custom\" needs p0");
        return make_datum(datum.knots, datum.values, *datum.p0, datum.a.value_or(1.0));
    }
    Datum d = preset(datum.name);
    if (datum.a) d = make_datum(d.knots(), d.values(), d.p0(), *datum.a);
    return d;
}

std::vector<double> RunConfig::sample_times() const {
    if (!times.list.empty()) return times.list;
    const double decades = std::log10(times.t_max / times.t_min);
    int count = times.count;
    if (count <= 0)
        count = std::max(2, static_cast<int>(std::ceil(times.points_per_decade * decades)) + 1);
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = times.t_min;
        return out;
    }
    for (int k = 0; k < count; ++k)
        out[static_cast<std::size_t>(k)] =
            times.t_min * std::pow(10.0, decades * k / static_cast<double>(count - 1));
    out.front() = times.t_min;
    out.back() = times.t_max;
    return out;
}

RunConfig parse_config(std::string_view text) {
    const auto keys = config_keys();
    std::vector<std::pair<std::string, Entry>> entries;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        const std::string_view raw =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const std::string_view line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') parse_error(line_no, "tables are not supported; use flat keys");
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) parse_error(line_no, "expected key = value");
        std::string key(trim(line.substr(0, eq)));
        if (key.empty()) parse_error(line_no, "empty key");
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            std::ostringstream msg;
            msg << "line " << line_no << ": unknown key '" << key << "'";
            throw Error(ErrorKind::UnknownKey, msg.str());
        }
        for (const auto& [seen, entry] : entries)
            if (seen == key) parse_error(line_no, "duplicate key '" + key + "'");
        entries.emplace_back(key, Entry{parse_value(line.substr(eq + 1), line_no), line_no});
    }

    RunConfig cfg;
    for (const auto& [key, e] : entries) {
        if (key == "datum") cfg.datum.name = as_string(key, e);
        else if (key == "knots") cfg.datum.knots = as_array(key, e);
        else if (key == "values") cfg.datum.values = as_array(key, e);
        else if (key == "p0") cfg.datum.p0 = as_number(key, e);
        else if (key == "a") cfg.datum.a = as_number(key, e);
        else if (key == "method") {
            const std::string m = as_string(key, e);
            if (m == "heat") cfg.method = MethodSelection::Heat;
            else if (m == "fd") cfg.method = MethodSelection::Fd;
            else if (m == "both") cfg.method = MethodSelection::Both;
            else invalid("method must be heat, fd or both");
        }
        else if (key == "times") cfg.times.list = as_array(key, e);
        else if (key == "t_min") cfg.times.t_min = as_number(key, e);
        else if (key == "t_max") cfg.times.t_max = as_number(key, e);
        else if (key == "t_count") cfg.times.count = static_cast<int>(as_integer(key, e));
        else if (key == "points_per_decade") cfg.times.points_per_decade = as_number(key, e);
        else if (key == "xtol") cfg.xtol = as_number(key, e);
        else if (key == "tail_tolerance") cfg.tail_tolerance = as_number(key, e);
        else if (key == "L") cfg.L = as_number(key, e);
        else if (key == "n") cfg.n = as_integer(key, e);
        else if (key == "dt") cfg.dt = as_number(key, e);
        else if (key == "scheme") {
            const std::string s = as_string(key, e);
            if (s == "implicit") cfg.scheme = Scheme::Implicit;
            else if (s == "explicit") cfg.scheme = Scheme::Explicit;
            else invalid("scheme must be implicit or explicit");
        }
        else if (key == "out_dir") cfg.out_dir = as_string(key, e);
        else if (key == "gnuplot") cfg.gnuplot = as_bool(key, e);
        else if (key == "snapshots") cfg.snapshots = as_bool(key, e);
        else if (key == "gate") cfg.gate = as_number(key, e);
        else if (key == "x_min") cfg.x_min = as_number(key, e);
        else if (key == "x_max") cfg.x_max = as_number(key, e);
        else if (key == "nx") cfg.nx = static_cast<int>(as_integer(key, e));
        else if (key == "trajectory_csv") cfg.trajectory_csv = as_string(key, e);
        else if (key == "fit_t_min") cfg.fit_t_min = as_number(key, e);
        else if (key == "fit_t_max") cfg.fit_t_max = as_number(key, e);
    }

    // Validation
    if (cfg.datum.name != "custom") {
        const auto names = preset_names();
        if (std::find(names.begin(), names.end(), cfg.datum.name) == names.end())
            invalid("unknown datum '" + cfg.datum.name + "'");
    }
    try {
        (void)cfg.build_datum();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ValidationError) throw;
        invalid(std::string("datum rejected: ") + e.what());
    }
    const auto& list = cfg.times.list;
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (!(list[i] > 0.0)) invalid("times must be positive");
        if (i > 0 && !(list[i] > list[i - 1])) invalid("times must be strictly increasing");
    }
    if (list.empty()) {
        if (!(cfg.times.t_min > 0.0)) invalid("t_min must be positive for log spacing");
        if (!(cfg.times.t_max >= cfg.times.t_min)) invalid("t_max must be at least t_min");
        if (!(cfg.times.points_per_decade > 0.0)) invalid("points_per_decade must be positive");
    }
    if (!(cfg.xtol > 0.0)) invalid("xtol must be positive");
    if (!(cfg.tail_tolerance > 0.0)) invalid("tail_tolerance must be positive");
    if (!(cfg.L > 0.0)) invalid("L must be positive");
    if (cfg.n < 4) invalid("n must be at least 4");
    if (cfg.dt < 0.0) invalid("dt must be nonnegative (0 selects the default)");
    if (!(cfg.gate > 0.0)) invalid("gate must be positive");
    if (!(cfg.x_max > cfg.x_min) || cfg.nx < 2) invalid("field window needs x_max > x_min, nx >= 2");
    return cfg;
}

}  // namespace priceflow
