#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "melnlab/chebseries.hpp"
#include "melnlab/combinatorics.hpp"
#include "melnlab/errors.hpp"
#include "melnlab/jet.hpp"
#include "melnlab/trig.hpp"

using namespace melnlab;

TEST_CASE("jet arithmetic reproduces known Taylor series") {
    const Jet x = Jet::variable(0.7, 8);
    const Jet e = exp(x);
    for (std::size_t d = 0; d <= 8; ++d) CHECK(e.derivative(d) == doctest::Approx(std::exp(0.7)).epsilon(1e-14));
    const Jet s = sin(x), c = cos(x);
    const Jet one = s * s + c * c;
    CHECK(one[0] == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t d = 1; d <= 8; ++d) CHECK(std::abs(one[d]) < 1e-14);
    const Jet q = (x * x + 1.0) / (x * x + 1.0);
    CHECK(q[0] == doctest::Approx(1.0));
    for (std::size_t d = 1; d <= 8; ++d) CHECK(std::abs(q[d]) < 1e-14);
}

TEST_CASE("atan, sqrt, log and pow jets agree with derivative recurrences") {
    const Jet x = Jet::variable(1.3, 6);
    const Jet a = atan(x);
    CHECK(a[0] == doctest::Approx(std::atan(1.3)));
    CHECK(a.derivative(1) == doctest::Approx(1.0 / (1.0 + 1.69)).epsilon(1e-14));
    CHECK(a.derivative(2) == doctest::Approx(-2.0 * 1.3 / ((1.0 + 1.69) * (1.0 + 1.69))).epsilon(1e-13));
    const Jet r = sqrt(x);
    const Jet rr = r * r;
    for (std::size_t d = 0; d <= 6; ++d) CHECK(rr[d] == doctest::Approx(x[d]).epsilon(1e-14));
    const Jet l = log(exp(x));
    for (std::size_t d = 0; d <= 6; ++d) CHECK(l[d] == doctest::Approx(x[d]).epsilon(1e-13));
    const Jet p = pow(x, 2.5);
    CHECK(p.derivative(3) == doctest::Approx(2.5 * 1.5 * 0.5 * std::pow(1.3, -0.5)).epsilon(1e-13));
    const Jet pi = powi(x, -3);
    CHECK(pi.derivative(2) == doctest::Approx(12.0 * std::pow(1.3, -5)).epsilon(1e-13));
}

TEST_CASE("composition with the identity jet is the identity") {
    const Jet f = sin(Jet::variable(0.4, 7));
    const Jet id = Jet::variable(0.4, 7, JetVar::x);
    const Jet g = compose(f, id);
    for (std::size_t d = 0; d <= 7; ++d) CHECK(g[d] == doctest::Approx(f[d]).epsilon(1e-15));
}

TEST_CASE("jet order and variable mismatches are rejected") {
    CHECK_THROWS_AS(Jet::variable(0.0, 3) + Jet::variable(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(Jet::variable(0.0, 3, JetVar::t) + Jet::variable(0.0, 3, JetVar::x), std::invalid_argument);
}

TEST_CASE("jet derivatives agree with central finite differences") {
    auto f = [](double x) { return std::atan(x * x) * std::sqrt(1.0 + x); };
    const double x0 = 0.9, h = 1e-4;
    const Jet X = Jet::variable(x0, 4);
    const Jet J = atan(X * X) * sqrt(1.0 + X);
    const double d1 = (f(x0 + h) - f(x0 - h)) / (2 * h);
    const double d2 = (f(x0 + h) - 2 * f(x0) + f(x0 - h)) / (h * h);
    CHECK(std::abs(J.derivative(1) - d1) <= 1e-6 * std::abs(d1));
    CHECK(std::abs(J.derivative(2) - d2) <= 1e-6 * std::max(1.0, std::abs(d2)));
}

TEST_CASE("trigonometric polynomials: evaluation, products and Taylor jets") {
    const TrigPoly c = TrigPoly::cos_mode(1), s = TrigPoly::sin_mode(1);
    const TrigPoly p = c * s * 2.0;  // sin 2θ
    for (double t : {0.1, 1.0, 2.5, 4.0}) CHECK(p.eval(t) == doctest::Approx(std::sin(2 * t)).epsilon(1e-14));
    const auto tay = (c * c).taylor(0.3, 4);
    const Jet J = cos(Jet::variable(0.3, 4)) * cos(Jet::variable(0.3, 4));
    for (std::size_t d = 0; d <= 4; ++d) CHECK(tay[d] == doctest::Approx(J[d]).epsilon(1e-13));
    const TrigPoly dp = p.derivative();
    CHECK(dp.eval(0.7) == doctest::Approx(2 * std::cos(1.4)).epsilon(1e-14));
}

TEST_CASE("Laurent r-derivatives at fixed r") {
    TrigLaurent L;
    L.add_term(1, TrigPoly::cos_mode(1));
    L.add_term(-1, TrigPoly::constant(2.0));
    // ∂_r² of r cosθ + 2/r = 4/r³
    CHECK(L.r_derivative_at(1.5, 2).eval(0.3) == doctest::Approx(4.0 / (1.5 * 1.5 * 1.5)).epsilon(1e-14));
    CHECK(L.eval(2.0, 0.0) == doctest::Approx(3.0));
}

TEST_CASE("partition counts 1, 2, 3, 5, 7, 11 satisfy the Diophantine constraint") {
    const int expected[] = {1, 2, 3, 5, 7, 11};
    for (int l = 1; l <= 6; ++l) {
        const PartitionSet s = partitions(l);
        CHECK(static_cast<int>(s.tuples.size()) == expected[l - 1]);
        for (const auto& t : s.tuples) {
            int sum = 0, L = 0;
            for (int m = 1; m <= l; ++m) {
                sum += m * t.b[static_cast<std::size_t>(m - 1)];
                L += t.b[static_cast<std::size_t>(m - 1)];
            }
            CHECK(sum == l);
            CHECK(L == t.L);
        }
    }
    const PartitionSet two = partitions(2);
    CHECK(two.tuples.size() == 2);
    CHECK_THROWS_AS(partitions(0), DomainError);
    CHECK_THROWS_AS(partitions(13), DomainError);
}

TEST_CASE("compositions S_{q,l}") {
    const auto s = compositions(3, 2);
    REQUIRE(s.tuples.size() == 2);
    CHECK(s.tuples[0] == std::vector<int>{1, 2});
    CHECK(s.tuples[1] == std::vector<int>{2, 1});
    CHECK(compositions(2, 3).tuples.empty());
    CHECK(compositions(5, 3).tuples.size() == 6);
    for (int q = 1; q <= 8; ++q)
        for (int l = 1; l <= q; ++l) CHECK(static_cast<double>(compositions(q, l).tuples.size()) == binomial(q - 1, l - 1));
}

TEST_CASE("Chebyshev interpolation and spectral antiderivative") {
    const double a = 0.3, b = 2.9;
    const auto t = ChebSeries::lobatto_nodes(a, b, 40);
    CHECK(t.front() == a);
    CHECK(t.back() == b);
    std::vector<double> v;
    for (double s : t) v.push_back(std::cos(3 * s) * s);
    const ChebSeries c = ChebSeries::interpolate(a, b, v);
    CHECK(c.eval(1.234) == doctest::Approx(std::cos(3 * 1.234) * 1.234).epsilon(1e-13));
    CHECK(c.tail_ratio() < 1e-13);
    const ChebSeries I = c.integral();
    auto F = [](double s) { return std::sin(3 * s) * s / 3 + std::cos(3 * s) / 9; };
    CHECK(I.eval(a) == doctest::Approx(0.0));
    CHECK(std::abs(I.eval(2.0) - (F(2.0) - F(a))) < 1e-13);
    CHECK(std::abs(I.eval(b) - (F(b) - F(a))) < 1e-13);
}
