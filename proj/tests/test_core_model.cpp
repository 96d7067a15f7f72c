#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <numbers>
#include <random>

#include "melnlab/core_model.hpp"
#include "melnlab/errors.hpp"
#include "test_support.hpp"

using namespace melnlab;
using cd = std::complex<double>;

namespace {

// ε^i coefficient of A(ε)/(-1 + B(ε)) by a discrete Cauchy integral over |ε| = ρ.
double quotient_coefficient(const SystemConfig& cfg, Region s, int i, double r, double th) {
    const double x = r * std::cos(th), y = r * std::sin(th);
    const int M = 64;
    const double rho = 0.05;
    cd acc(0.0);
    for (int q = 0; q < M; ++q) {
        const cd e = std::polar(rho, 2.0 * std::numbers::pi * q / M);
        cd A(0.0), B(0.0), ep(1.0);
        for (int m = 1; m <= cfg.k; ++m) {
            ep *= e;
            const auto& o = cfg.order(m);
            const auto& p = s == Region::plus ? o.a : o.alpha;
            const auto& qq = s == Region::plus ? o.b : o.beta;
            const double P = p[0] + p[1] * x + p[2] * y;
            const double Q = qq[0] + qq[1] * x + qq[2] * y;
            A += ep * (std::cos(th) * P + std::sin(th) * Q);
            B += ep * ((std::cos(th) * Q - std::sin(th) * P) / r);
        }
        acc += (A / (-1.0 + B)) / std::pow(e, i);
    }
    return (acc / static_cast<double>(M)).real();
}

// Same coefficient by scalar truncated-series division: q_i = -a_i + sum_{j<i} q_j b_{i-j}.
double scalar_series_coefficient(const SystemConfig& cfg, Region s, int i, double r, double th) {
    const double x = r * std::cos(th), y = r * std::sin(th);
    std::vector<double> A(static_cast<std::size_t>(cfg.k) + 1), B(A.size()), q(A.size());
    for (int m = 1; m <= cfg.k; ++m) {
        const auto& o = cfg.order(m);
        const auto& p = s == Region::plus ? o.a : o.alpha;
        const auto& qq = s == Region::plus ? o.b : o.beta;
        const double P = p[0] + p[1] * x + p[2] * y;
        const double Q = qq[0] + qq[1] * x + qq[2] * y;
        A[static_cast<std::size_t>(m)] = std::cos(th) * P + std::sin(th) * Q;
        B[static_cast<std::size_t>(m)] = (std::cos(th) * Q - std::sin(th) * P) / r;
    }
    for (int m = 1; m <= i; ++m) {
        double v = -A[static_cast<std::size_t>(m)];
        for (int j = 1; j < m; ++j) v += q[static_cast<std::size_t>(j)] * B[static_cast<std::size_t>(m - j)];
        q[static_cast<std::size_t>(m)] = v;
    }
    return q[static_cast<std::size_t>(i)];
}

}  // namespace

TEST_CASE("all-zero config gives a vanishing polar field") {
    const SystemConfig c(3, 4);
    const PolarField f(c);
    for (int i = 1; i <= 4; ++i)
        for (Region s : {Region::plus, Region::minus}) CHECK(f.F(i, s).is_zero());
}

TEST_CASE("F1+ at r = 1, theta = 0 equals -a01 - a11") {
    SystemConfig c(2, 1);
    c.order(1).a = {0.3, -1.7, 0.9};
    const PolarField f(c);
    CHECK(f.eval(1, Region::plus, 1.0, 0.0) == doctest::Approx(-0.3 + 1.7).epsilon(1e-15));
}

TEST_CASE("higher F_i match the series quotient oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const SystemConfig c = testsupport::random_config(rng, 3, 4);
        const PolarField f(c);
        for (int i = 1; i <= 4; ++i)
            for (Region s : {Region::plus, Region::minus})
                for (double r : {0.4, 1.3})
                    for (double th : {0.2, 2.1, 4.4}) {
                        const double got = f.eval(i, s, r, th);
                        const double want = scalar_series_coefficient(c, s, i, r, th);
                        CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
                        // The contour oracle loses about 1/ρ^i to rounding.
                        const double contour = quotient_coefficient(c, s, i, r, th);
                        CHECK(std::abs(got - contour) <= 1e-9 * std::max(1.0, std::abs(contour)));
                    }
    }
}

TEST_CASE("F_i is a Laurent polynomial with r-exponents in [1-i, 1] and period 2 pi") {
    std::mt19937_64 rng(5);
    const SystemConfig c = testsupport::random_config(rng, 2, 5);
    const PolarField f(c);
    for (int i = 1; i <= 5; ++i) {
        CHECK(f.F(i, Region::plus).max_power() <= 1);
        CHECK(f.F(i, Region::plus).min_power() >= 1 - i);
        CHECK(f.eval(i, Region::minus, 0.8, 1.1) == doctest::Approx(f.eval(i, Region::minus, 0.8, 1.1 + 2 * std::numbers::pi)).epsilon(1e-12));
    }
}

TEST_CASE("polar field agrees with the chain rule applied to the cartesian field") {
    std::mt19937_64 rng(17);
    const SystemConfig c = testsupport::random_config(rng, 3, 6);
    const PolarField f(c);
    const double eps = 2e-3;
    for (double r : {0.5, 1.5})
        for (double th : {0.3, 1.9, 3.5, 5.5}) {
            const double x = r * std::cos(th), y = r * std::sin(th);
            const CartesianVelocity v = cartesian_field(c, x, y, eps);
            const double rdot = (x * v.dx + y * v.dy) / r;
            const double thdot = (x * v.dy - y * v.dx) / (r * r);
            const Region s = switching_function(3, x, y) > 0 ? Region::plus : Region::minus;
            double series = 0.0, e = 1.0;
            for (int i = 1; i <= 6; ++i) {
                e *= eps;
                series += e * f.eval(i, s, r, th);
            }
            CHECK(std::abs(rdot / thdot - series) < 1e-12);
        }
}

TEST_CASE("switching angles follow the curve y = x^n") {
    const double pi = std::numbers::pi;
    auto a3 = switching_angles(std::sqrt(2.0), 3);  // x = 1 on the curve
    CHECK(a3.first == doctest::Approx(pi / 4).epsilon(1e-14));
    CHECK(a3.second == doctest::Approx(5 * pi / 4).epsilon(1e-14));
    auto a2 = switching_angles(std::sqrt(2.0), 2);
    CHECK(a2.first == doctest::Approx(pi / 4).epsilon(1e-14));
    CHECK(a2.second == doctest::Approx(3 * pi / 4).epsilon(1e-14));
    auto a1 = switching_angles(3.0, 1);
    CHECK(a1.first == doctest::Approx(pi / 4));
    CHECK(a1.second == doctest::Approx(5 * pi / 4));
    for (int n = 2; n <= 7; ++n)
        for (double r : {0.05, 0.7, 2.0, 9.0}) {
            const auto [t1, t2] = switching_angles(r, n);
            CHECK(0.0 < t1);
            CHECK(t1 < pi / 2);
            CHECK(t1 < t2);
            CHECK(t2 < 2 * pi);
            CHECK(std::abs(std::sin(t1) - std::pow(r, n - 1) * std::pow(std::cos(t1), n)) < 1e-14);
            CHECK(std::abs(std::sin(t2) - std::pow(r, n - 1) * std::pow(std::cos(t2), n)) < 1e-13);
        }
    CHECK_THROWS_AS(switching_angles(0.0, 2), DomainError);
    CHECK_THROWS_AS(switching_angles(-1.0, 2), DomainError);
}

TEST_CASE("sector labels match the sign of sin(theta) - r^(n-1) cos^n(theta)") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> R(0.01, 5.0), T(0.0, 2 * std::numbers::pi);
    for (int n = 1; n <= 5; ++n) {
        const SwitchingGeometry g(n);
        int mismatches = 0;
        for (int q = 0; q < 2000; ++q) {
            const double r = R(rng), th = T(rng);
            const double t1 = g.theta1(r), t2 = g.theta2(r);
            const int j = th < t1 ? 0 : (th < t2 ? 1 : 2);
            if (std::min(std::abs(th - t1), std::abs(th - t2)) < 1e-9) continue;
            if (g.region_at(r, th) != SwitchingGeometry::sector_region(j)) ++mismatches;
        }
        CHECK(mismatches == 0);
    }
}

TEST_CASE("theta jets match finite differences of the crossing angle") {
    for (int n : {2, 3, 5}) {
        const SwitchingGeometry g(n);
        const double r = 0.9, h = 1e-4;
        const Jet J = g.theta_jet(1, r, 4);
        const double d1 = (g.theta1(r + h) - g.theta1(r - h)) / (2 * h);
        const double d2 = (g.theta1(r + h) - 2 * g.theta1(r) + g.theta1(r - h)) / (h * h);
        CHECK(J.derivative(1) == doctest::Approx(d1).epsilon(1e-7));
        CHECK(J.derivative(2) == doctest::Approx(d2).epsilon(1e-5));
        CHECK(g.theta_jet(2, r, 4).value() == doctest::Approx(g.theta2(r)).epsilon(1e-15));
        CHECK(g.r_of_x(g.x_of_r(r)) == doctest::Approx(r).epsilon(1e-15));
    }
}

TEST_CASE("cartesian field: center at eps = 0 and affine forms at eps = 1") {
    SystemConfig c(2, 1);
    c.order(1).a = {0.1, 0.2, 0.3};
    c.order(1).b = {0.4, 0.5, 0.6};
    c.order(1).alpha = {-0.1, -0.2, -0.3};
    c.order(1).beta = {-0.4, -0.5, -0.6};
    const auto v0 = cartesian_field(c, 0.5, 0.7, 0.0);
    CHECK(v0.dx == doctest::Approx(0.7));
    CHECK(v0.dy == doctest::Approx(-0.5));
    const auto vp = cartesian_field(c, 0.5, 0.7, 1.0);  // 0.7 > 0.25: plus region
    CHECK(vp.dx == doctest::Approx(0.7 + 0.1 + 0.2 * 0.5 + 0.3 * 0.7));
    CHECK(vp.dy == doctest::Approx(-0.5 + 0.4 + 0.5 * 0.5 + 0.6 * 0.7));
    const auto vm = cartesian_field(c, 0.5, 0.1, 1.0);
    CHECK(vm.dx == doctest::Approx(0.1 - 0.1 - 0.2 * 0.5 - 0.3 * 0.1));
    CHECK_THROWS_AS(cartesian_field(c, 0.5, 0.25, 1.0), DomainError);
}

TEST_CASE("config JSON round trip and validation") {
    std::mt19937_64 rng(3);
    const SystemConfig c = testsupport::random_config(rng, 4, 3);
    const SystemConfig d = config_from_json(config_to_json(c));
    CHECK(d.n == 4);
    CHECK(d.k == 3);
    for (int i = 1; i <= 3; ++i) CHECK(d.order(i).flat() == c.order(i).flat());
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"n":2,"k":1,"eps":0.1})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"n":2,"k":1,"orders":[{"i":1,"c":[1,2,3]}]})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"n":0,"k":1})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"n":2,"k":7})")), ConfigError);
    SystemConfig bad(2, 1);
    bad.order(1).a[0] = std::nan("");
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(PolarField{bad}, ConfigError);
}
