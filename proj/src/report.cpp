#include "melnlab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "melnlab/errors.hpp"

namespace melnlab {

nlohmann::json to_json(const RunManifest& m) {
    return {{"command", m.command},
            {"config", m.config_path},
            {"interval", {m.interval_lo, m.interval_hi}},
            {"grid", {{"points", m.grid_points}, {"spacing", m.grid_log ? "log" : "lin"}}},
            {"orders", m.orders},
            {"family", m.family},
            {"case", m.case_id},
            {"out", m.out_dir},
            {"seed", m.seed},
            {"version", m.version}};
}

namespace {

void write_string(std::ostream& os, const std::string& s) { os << nlohmann::json(s).dump(); }

void write(std::ostream& os, const nlohmann::json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) os << ",\n";
                first = false;
                os << inner;
                write_string(os, k);
                os << ": ";
                write(os, v, indent + 1);
            }
            os << '\n' << pad << '}';
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // Short arrays of scalars stay on one line.
            const bool flat = j.size() <= 8 && std::all_of(j.begin(), j.end(), [](const auto& e) { return e.is_primitive(); });
            os << '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << (flat ? ", " : ",");
                if (!flat) os << '\n' << inner;
                write(os, j[i], indent + 1);
            }
            if (!flat) os << '\n' << pad;
            os << ']';
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                write_string(os, std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf"));
                return;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            std::string s(buf);
            if (s.find_first_of(".eE") == std::string::npos) s += ".0";
            os << s;
            return;
        }
        default: os << j.dump();
    }
}

}  // namespace

std::string dump_json(const nlohmann::json& j) {
    std::ostringstream os;
    write(os, j, 0);
    os << '\n';
    return os.str();
}

namespace {

double parse_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse " + what + " '" + s + "'");
    }
    if (used != s.size()) throw ConfigError("cannot parse " + what + " '" + s + "'");
    return v;
}

int parse_int(const std::string& s, const std::string& what) {
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("cannot parse " + what + " '" + s + "'");
    return v;
}

}  // namespace

std::pair<double, double> parse_interval(const std::string& s) {
    const auto c = s.find(':');
    if (c == std::string::npos) throw ConfigError("interval must look like A:B");
    const double a = parse_double(s.substr(0, c), "interval bound"), b = parse_double(s.substr(c + 1), "interval bound");
    if (!(a < b)) throw ConfigError("interval needs A < B");
    return {a, b};
}

std::pair<int, bool> parse_grid(const std::string& s) {
    bool log = true;
    std::string num = s;
    if (s.size() > 3 && (s.ends_with("log") || s.ends_with("lin"))) {
        log = s.ends_with("log");
        num = s.substr(0, s.size() - 3);
    }
    const int n = parse_int(num, "grid size");
    if (n < 2) throw ConfigError("grid needs at least 2 points");
    return {n, log};
}

std::vector<int> parse_orders(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto d = tok.find('-');
        if (d != std::string::npos && d > 0) {
            const int a = parse_int(tok.substr(0, d), "order"), b = parse_int(tok.substr(d + 1), "order");
            if (a > b) throw ConfigError("order range '" + tok + "' is decreasing");
            for (int i = a; i <= b; ++i) out.push_back(i);
        } else {
            out.push_back(parse_int(tok, "order"));
        }
    }
    if (out.empty()) throw ConfigError("no orders given");
    for (int i : out)
        if (i < 1) throw ConfigError("orders must be positive");
    return out;
}

std::vector<double> make_grid(double lo, double hi, int points, bool log_spacing) {
    if (points < 2 || !(hi > lo)) throw ConfigError("grid needs lo < hi and at least 2 points");
    if (log_spacing && !(lo > 0.0)) throw ConfigError("log grid needs a positive lower bound");
    std::vector<double> x(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        x[static_cast<std::size_t>(i)] = log_spacing ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
    }
    x.back() = hi;
    return x;
}

std::string gnuplot_script(const std::string& csv_name, const std::vector<std::string>& columns, bool log_x,
                           const std::string& title) {
    std::ostringstream os;
    os << "set datafile separator ','\n";
    os << "set key autotitle columnhead\n";
    os << "set title \"" << title << "\"\n";
    if (log_x) os << "set logscale x\n";
    os << "set terminal pngcairo size 900,600\n";
    os << "set output '" << csv_name.substr(0, csv_name.rfind('.')) << ".png'\n";
    os << "plot ";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os << ", \\\n     ";
        os << "'" << csv_name << "' using 1:" << i + 2 << " with lines title '" << columns[i] << "'";
    }
    os << '\n';
    return os.str();
}

}  // namespace melnlab
