#include "melnlab/core_model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "melnlab/errors.hpp"

namespace melnlab {

std::array<double, 12> OrderCoefficients::flat() const {
    return {a[0], a[1], a[2], b[0], b[1], b[2], alpha[0], alpha[1], alpha[2], beta[0], beta[1], beta[2]};
}

OrderCoefficients OrderCoefficients::from_flat(const std::array<double, 12>& v) {
    OrderCoefficients c;
    for (int j = 0; j < 3; ++j) {
        c.a[j] = v[j];
        c.b[j] = v[3 + j];
        c.alpha[j] = v[6 + j];
        c.beta[j] = v[9 + j];
    }
    return c;
}

SystemConfig::SystemConfig(int n_, int k_) : n(n_), k(k_), orders(static_cast<std::size_t>(k_ > 0 ? k_ : 0)) {}

void SystemConfig::validate() const {
    if (n < 1) throw ConfigError("n must be a positive integer");
    if (k < 1 || k > 6) throw ConfigError("k must satisfy 1 <= k <= 6");
    if (orders.size() != static_cast<std::size_t>(k)) throw ConfigError("coefficient list length differs from k");
    for (const auto& o : orders)
        for (double v : o.flat())
            if (!std::isfinite(v)) throw ConfigError("non-finite coefficient");
}

SystemConfig SystemConfig::with_order(int new_k) const {
    SystemConfig c(n, new_k);
    for (int i = 1; i <= std::min(k, new_k); ++i) c.order(i) = order(i);
    return c;
}

double SystemConfig::magnitude() const {
    double m = 0.0;
    for (const auto& o : orders)
        for (double v : o.flat()) m = std::max(m, std::abs(v));
    return m;
}

namespace {

std::array<double, 3> read_triple(const nlohmann::json& v, const char* name) {
    if (!v.is_array() || v.size() != 3) throw ConfigError(std::string("field '") + name + "' must be an array of 3 numbers");
    std::array<double, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!v[i].is_number()) throw ConfigError(std::string("field '") + name + "' must contain numbers");
        out[i] = v[i].get<double>();
    }
    return out;
}

}  // namespace

SystemConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> top{"n", "k", "orders"};
    static const std::set<std::string> per{"i", "a", "b", "alpha", "beta"};
    for (const auto& [key, _] : j.items())
        if (!top.count(key)) throw ConfigError("unknown key '" + key + "'");
    if (!j.contains("n") || !j["n"].is_number_integer()) throw ConfigError("missing integer 'n'");
    if (!j.contains("k") || !j["k"].is_number_integer()) throw ConfigError("missing integer 'k'");
    SystemConfig c(j["n"].get<int>(), j["k"].get<int>());
    if (c.k < 1 || c.k > 6) throw ConfigError("k must satisfy 1 <= k <= 6");
    std::set<int> seen;
    if (j.contains("orders")) {
        if (!j["orders"].is_array()) throw ConfigError("'orders' must be an array");
        for (const auto& o : j["orders"]) {
            if (!o.is_object()) throw ConfigError("order entries must be objects");
            for (const auto& [key, _] : o.items())
                if (!per.count(key)) throw ConfigError("unknown key '" + key + "' in order entry");
            if (!o.contains("i") || !o["i"].is_number_integer()) throw ConfigError("order entry without integer 'i'");
            const int i = o["i"].get<int>();
            if (i < 1 || i > c.k) throw ConfigError("order index out of range 1..k");
            if (!seen.insert(i).second) throw ConfigError("duplicate order index");
            auto& oc = c.order(i);
            if (o.contains("a")) oc.a = read_triple(o["a"], "a");
            if (o.contains("b")) oc.b = read_triple(o["b"], "b");
            if (o.contains("alpha")) oc.alpha = read_triple(o["alpha"], "alpha");
            if (o.contains("beta")) oc.beta = read_triple(o["beta"], "beta");
        }
    }
    c.validate();
    return c;
}

nlohmann::json config_to_json(const SystemConfig& c) {
    nlohmann::json j;
    j["n"] = c.n;
    j["k"] = c.k;
    j["orders"] = nlohmann::json::array();
    for (int i = 1; i <= c.k; ++i) {
        const auto& o = c.order(i);
        j["orders"].push_back({{"i", i}, {"a", o.a}, {"b", o.b}, {"alpha", o.alpha}, {"beta", o.beta}});
    }
    return j;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

namespace {

const TrigPoly& cos1() {
    static const TrigPoly p = TrigPoly::cos_mode(1);
    return p;
}
const TrigPoly& sin1() {
    static const TrigPoly p = TrigPoly::sin_mode(1);
    return p;
}

void pick(const OrderCoefficients& c, Region s, std::array<double, 3>& p, std::array<double, 3>& q) {
    p = s == Region::plus ? c.a : c.alpha;
    q = s == Region::plus ? c.b : c.beta;
}

}  // namespace

TrigLaurent polar_A(const OrderCoefficients& c, Region s) {
    std::array<double, 3> p, q;
    pick(c, s, p, q);
    const TrigPoly& C = cos1();
    const TrigPoly& S = sin1();
    TrigLaurent A;
    A.add_term(0, C * p[0] + S * q[0]);
    A.add_term(1, (C * C) * p[1] + (S * C) * (p[2] + q[1]) + (S * S) * q[2]);
    return A;
}

TrigLaurent polar_B(const OrderCoefficients& c, Region s) {
    std::array<double, 3> p, q;
    pick(c, s, p, q);
    const TrigPoly& C = cos1();
    const TrigPoly& S = sin1();
    TrigLaurent B;
    B.add_term(-1, C * q[0] - S * p[0]);
    B.add_term(0, (C * C) * q[1] + (S * C) * (q[2] - p[1]) - (S * S) * p[2]);
    return B;
}

PolarField::PolarField(const SystemConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    for (Region s : {Region::plus, Region::minus}) {
        std::vector<TrigLaurent> A, B, F;
        for (int i = 1; i <= cfg_.k; ++i) {
            A.push_back(polar_A(cfg_.order(i), s));
            B.push_back(polar_B(cfg_.order(i), s));
        }
        // A/(-1 + B) as a truncated ε-series: F_i = -A_i + sum_{j<i} F_j B_{i-j}.
        for (int i = 1; i <= cfg_.k; ++i) {
            TrigLaurent Fi = A[static_cast<std::size_t>(i - 1)] * -1.0;
            for (int j = 1; j < i; ++j) Fi += F[static_cast<std::size_t>(j - 1)] * B[static_cast<std::size_t>(i - j - 1)];
            F.push_back(std::move(Fi));
        }
        (s == Region::plus ? plus_ : minus_) = std::move(F);
    }
}

const TrigLaurent& PolarField::F(int i, Region s) const {
    if (i < 1 || i > cfg_.k) throw DomainError("field order outside 1..k");
    return (s == Region::plus ? plus_ : minus_)[static_cast<std::size_t>(i - 1)];
}

PolarField build_polar_field(const SystemConfig& cfg) { return PolarField(cfg); }

SwitchingGeometry::SwitchingGeometry(int n) : n_(n) {
    if (n < 1) throw ConfigError("n must be a positive integer");
}

double SwitchingGeometry::x_of_r(double r) const {
    if (!(r > 0.0)) throw DomainError("r must be positive");
    if (n_ == 1) return r / std::numbers::sqrt2;
    // x² + x^{2n} - r² is convex and increasing on x > 0; Newton from the right is monotone.
    double x = std::min(r, std::pow(r, 1.0 / n_));
    for (int it = 0; it < 200; ++it) {
        const double x2n1 = std::pow(x, 2 * n_ - 1);
        const double f = x * x + x2n1 * x - r * r;
        const double df = 2.0 * x + 2.0 * n_ * x2n1;
        const double step = f / df;
        const double xn = x - step;
        if (!(xn > 0.0)) {
            x *= 0.5;
            continue;
        }
        if (std::abs(step) <= 1e-16 * xn) {
            x = xn;
            break;
        }
        x = xn;
    }
    return x;
}

double SwitchingGeometry::r_of_x(double x) const {
    if (!(x > 0.0)) throw DomainError("x must be positive");
    return x * std::sqrt(1.0 + std::pow(x, 2 * n_ - 2));
}

double SwitchingGeometry::theta1(double r) const {
    if (!(r > 0.0)) throw DomainError("r must be positive");
    if (n_ == 1) return std::numbers::pi / 4.0;
    return std::atan(std::pow(x_of_r(r), n_ - 1));
}

double SwitchingGeometry::theta2(double r) const {
    const double t1 = theta1(r);
    return n_ % 2 ? std::numbers::pi + t1 : std::numbers::pi - t1;
}

double SwitchingGeometry::theta(int j, double r) const {
    switch (j) {
        case 0: return 0.0;
        case 1: return theta1(r);
        case 2: return theta2(r);
        case 3: return 2.0 * std::numbers::pi;
        default: throw DomainError("switching index outside 0..3");
    }
}

Jet SwitchingGeometry::x_jet(double r0, std::size_t order) const {
    const Jet r = Jet::variable(r0, order, JetVar::x);
    if (n_ == 1) return r / std::numbers::sqrt2;
    Jet x = Jet::constant(x_of_r(r0), r0, order, JetVar::x);
    // Newton on jets doubles the number of correct coefficients per step.
    std::size_t correct = 1;
    while (correct <= order + 1) {
        const Jet x2n1 = powi(x, 2 * n_ - 1);
        const Jet G = x * x + x2n1 * x - r * r;
        const Jet dG = 2.0 * x + (2.0 * n_) * x2n1;
        x -= G / dG;
        correct *= 2;
    }
    return x;
}

Jet SwitchingGeometry::theta_jet(int j, double r0, std::size_t order) const {
    switch (j) {
        case 0: return Jet::constant(0.0, r0, order, JetVar::x);
        case 3: return Jet::constant(2.0 * std::numbers::pi, r0, order, JetVar::x);
        case 1:
        case 2: {
            Jet t1 = n_ == 1 ? Jet::constant(std::numbers::pi / 4.0, r0, order, JetVar::x)
                             : atan(powi(x_jet(r0, order), n_ - 1));
            if (j == 1) return t1;
            return n_ % 2 ? std::numbers::pi + t1 : std::numbers::pi - t1;
        }
        default: throw DomainError("switching index outside 0..3");
    }
}

Region SwitchingGeometry::region_at(double r, double theta) const {
    const double g = std::sin(theta) - std::pow(r, n_ - 1) * std::pow(std::cos(theta), n_);
    return g > 0.0 ? Region::plus : Region::minus;
}

std::pair<double, double> switching_angles(double r, int n) {
    SwitchingGeometry g(n);
    return g.angles(r);
}

double switching_function(int n, double x, double y) { return y - std::pow(x, n); }

AffineField region_affine_field(const SystemConfig& cfg, Region s, double eps) {
    AffineField f{{0.0, 1.0, -1.0, 0.0}, {0.0, 0.0}};
    double e = 1.0;
    for (int i = 1; i <= cfg.k; ++i) {
        e *= eps;
        const auto& o = cfg.order(i);
        const auto& p = s == Region::plus ? o.a : o.alpha;
        const auto& q = s == Region::plus ? o.b : o.beta;
        f.c[0] += e * p[0];
        f.A[0] += e * p[1];
        f.A[1] += e * p[2];
        f.c[1] += e * q[0];
        f.A[2] += e * q[1];
        f.A[3] += e * q[2];
    }
    return f;
}

CartesianVelocity cartesian_field(const SystemConfig& cfg, double x, double y, double eps) {
    const double g = switching_function(cfg.n, x, y);
    if (g == 0.0) throw DomainError("point lies on the switching curve; use event logic");
    const AffineField f = region_affine_field(cfg, g > 0.0 ? Region::plus : Region::minus, eps);
    return {f.A[0] * x + f.A[1] * y + f.c[0], f.A[2] * x + f.A[3] * y + f.c[1]};
}

}  // namespace melnlab
