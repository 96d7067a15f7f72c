#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "melnlab/errors.hpp"
#include "melnlab/combinatorics.hpp"
#include "melnlab/filippov.hpp"
#include "melnlab/recursion.hpp"
#include "test_support.hpp"

using namespace melnlab;

namespace {

double polar_angle(const std::array<double, 2>& u) {
    double a = std::atan2(u[1], u[0]);
    return a < 0 ? a + 2 * std::numbers::pi : a;
}

}  // namespace

TEST_CASE("unperturbed return map is the identity") {
    std::mt19937_64 rng(1);
    for (int n = 1; n <= 5; ++n) {
        const SystemConfig c = testsupport::random_config(rng, n, 2);
        for (double x0 : {0.05, 0.6, 1.7, 4.0}) {
            const PoincareResult p = integrate_return(x0, 0.0, c);
            CHECK(std::abs(p.displacement) <= 1e-12);
            REQUIRE(p.crossing_times.size() == 2);
            CHECK(p.crossing_times[0] < p.crossing_times[1]);
            CHECK(p.crossing_times[1] < p.segments.back().t1);
            const SwitchingGeometry g(n);
            CHECK(std::abs(polar_angle(p.crossing_points[0]) - g.theta1(x0)) < 1e-10);
            CHECK(std::abs(polar_angle(p.crossing_points[1]) - g.theta2(x0)) < 1e-10);
            for (const auto& u : p.crossing_points) CHECK(std::abs(u[1] - std::pow(u[0], n)) <= 1e-12);
        }
    }
}

TEST_CASE("first-order displacement over eps approaches M1") {
    std::mt19937_64 rng(2);
    for (int n : {2, 3, 4}) {
        const SystemConfig c = testsupport::random_config(rng, n, 1);
        for (double x0 : {0.4, 1.2}) {
            const double m1 = testsupport::m1_quadrature(c, x0);
            const double eps = 1e-4;
            const double d = integrate_return(x0, eps, c).displacement / eps;
            CHECK(std::abs(d - m1) <= 1e-3 * std::max(1.0, std::abs(m1)));
        }
    }
}

TEST_CASE("Richardson extraction of M1 matches the order-one integral") {
    std::mt19937_64 rng(3);
    for (int n : {2, 3}) {
        const SystemConfig c = testsupport::random_config(rng, n, 1);
        for (int q = 0; q < 10; ++q) {
            const double x0 = 0.2 + 0.25 * q;
            const ExtractionResult e = extract_melnikov(x0, 1, c);
            const double m1 = testsupport::m1_quadrature(c, x0);
            CHECK(std::abs(e.value - m1) <= 1e-4 * std::max(1.0, std::abs(m1)));
            CHECK_FALSE(e.flagged);
        }
    }
    const SystemConfig zero(3, 3);
    for (int i = 1; i <= 3; ++i) CHECK(std::abs(extract_melnikov(0.8, i, zero).value) < 1e-10);
}

TEST_CASE("Taylor-jet return map agrees with the recursion through order 6") {
    std::mt19937_64 rng(4);
    for (int n : {1, 2, 3, 4}) {
        const SystemConfig c = testsupport::random_config(rng, n, 6, 0.5);
        const MelnikovEngine e(c);
        for (double x0 : {0.3, 1.1}) {
            const auto jet = extract_melnikov_jet(x0, c, 6);
            const auto rec = e.melnikov_all(x0);
            for (int i = 0; i < 6; ++i) CHECK(testsupport::rel_err(rec[static_cast<std::size_t>(i)], jet[static_cast<std::size_t>(i)]) < 1e-9);
        }
    }
}

TEST_CASE("crossing-time coefficients match root-solved crossings") {
    std::mt19937_64 rng(5);
    const SystemConfig c = testsupport::random_config(rng, 3, 3);
    const double x0 = 0.9;
    const ZTable t = MelnikovEngine(c).compute(x0);
    for (int j = 1; j <= 2; ++j) {
        const CrossingJet cj = crossing_jet(x0, c, j, 3);
        CHECK(testsupport::rel_err(t.w_ij(3, j), cj.w[3]) < 1e-4);
        CHECK(testsupport::rel_err(t.w_ij(1, j), cj.w[1]) < 1e-10);
        for (int q = 1; q <= 2; ++q) CHECK(testsupport::rel_err(t.alpha_q(j, q), factorial(q) * cj.alpha[static_cast<std::size_t>(q)]) < 1e-9);
        // Second ε-derivative of the crossing angle by central differences.
        const double h = 1e-3;
        auto ang = [&](double eps) { return polar_angle(integrate_return(x0, eps, c).crossing_points[static_cast<std::size_t>(j - 1)]); };
        const double d2 = (ang(h) - 2 * ang(0.0) + ang(-h)) / (h * h);
        CHECK(std::abs(d2 - t.alpha_q(j, 2)) <= 1e-5 * std::max(1.0, std::abs(d2)));
    }
}

TEST_CASE("integrating back from the return point recovers the start") {
    std::mt19937_64 rng(6);
    for (int n : {2, 3}) {
        const SystemConfig c = testsupport::random_config(rng, n, 2);
        SimOptions back;
        back.direction = Direction::clockwise;
        for (double x0 : {0.5, 1.5}) {
            const PoincareResult p = integrate_return(x0, 0.05, c);
            const PoincareResult q = integrate_return(p.value, 0.05, c, back);
            CHECK(std::abs(q.value - x0) <= 1e-9);
        }
    }
}

TEST_CASE("displacement is a smooth function of eps") {
    std::mt19937_64 rng(7);
    const int k = 3;
    const SystemConfig c = testsupport::random_config(rng, 2, k);
    const int S = 21;
    Eigen::MatrixXd V(S, k + 1);
    Eigen::VectorXd d(S);
    for (int q = 0; q < S; ++q) {
        const double e = -1e-3 + 2e-3 * q / (S - 1);
        d(q) = integrate_return(0.8, e, c).displacement;
        for (int p = 0; p <= k; ++p) V(q, p) = std::pow(e / 1e-3, p);
    }
    const Eigen::VectorXd coef = V.colPivHouseholderQr().solve(d);
    CHECK((V * coef - d).norm() / std::sqrt(static_cast<double>(S)) <= 1e-10);
}

TEST_CASE("exact region flow agrees with an adaptive Runge-Kutta-Fehlberg integration") {
    using namespace boost::numeric::odeint;
    std::mt19937_64 rng(8);
    const SystemConfig c = testsupport::random_config(rng, 2, 2);
    const PoincareResult p = integrate_return(1.1, 0.1, c);
    for (const auto& seg : p.segments) {
        const AffineField f = seg.field;
        std::array<double, 2> u = seg.start;
        auto rhs = [&](const std::array<double, 2>& s, std::array<double, 2>& ds, double) {
            ds[0] = f.A[0] * s[0] + f.A[1] * s[1] + f.c[0];
            ds[1] = f.A[2] * s[0] + f.A[3] * s[1] + f.c[1];
        };
        integrate_adaptive(make_controlled<runge_kutta_fehlberg78<std::array<double, 2>>>(1e-13, 1e-13), rhs, u, seg.t0, seg.t1, 1e-3);
        CHECK(std::abs(u[0] - seg.end[0]) < 1e-10);
        CHECK(std::abs(u[1] - seg.end[1]) < 1e-10);
        const auto mid = seg.eval(0.5 * (seg.t0 + seg.t1));
        const double g = mid[1] - mid[0] * mid[0];
        CHECK((g > 0) == (seg.region == Region::plus));
    }
}

TEST_CASE("error conditions: escape and inadmissible start") {
    SystemConfig c(2, 1);
    c.order(1).a = {0.0, 3.0, 0.0};
    c.order(1).beta = {0.0, 0.0, 3.0};
    c.order(1).alpha = {0.0, 3.0, 0.0};
    c.order(1).b = {0.0, 0.0, 3.0};
    CHECK_THROWS_AS(integrate_return(1.0, 1.0, c), NumericalError);
    CHECK_THROWS_AS(integrate_return(1e-5, 0.0, c), DomainError);
    CHECK_THROWS_AS(integrate_return(-1.0, 0.0, c), DomainError);
}

TEST_CASE("no perturbation: the limit-cycle search reports a period annulus") {
    std::mt19937_64 rng(9);
    const SystemConfig c = testsupport::random_config(rng, 2, 1);
    const CycleSearch s = find_limit_cycles(0.0, c, {0.5, 1.0, 2.0});
    CHECK(s.period_annulus);
    CHECK(s.cycles.empty());
}
