#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "melnlab/cheb_kit.hpp"
#include "melnlab/errors.hpp"
#include "wronskian_battery.hpp"

using namespace melnlab;

namespace {

using C = std::complex<double>;

// Independent complex evaluation of the basis, principal branches near the positive axis.
C basis_complex(int id, int k, double lam, C x) {
    const double K = k;
    auto M = [&](double p) { return std::pow(x, p); };
    const C p3 = (2 * K + 1) * M(2) + 1.0;
    const C at = std::atan(M(2 * K - 1));
    switch (id) {
        case 1: return 1.0;
        case 2: return x;
        case 3: return M(2 * K - 2);
        case 4: return M(2 * K);
        case 5: return M(2 * K + 1);
        case 6: return M(4 * K - 2);
        case 7: return M(4 * K);
        case 8: return M(4 * K + 1);
        case 9: return M(6 * K - 2);
        case 10: return M(6 * K);
        case 11: return M(6 * K + 1);
        case 12: return x * (1.0 + M(4 * K));
        case 13: return M(4 * K) + x * x;
        case 14: return x + (2 * K + 1) * M(8 * K + 1);
        case 15: return (M(4 * K) + x * x) * at;
        case 16: return (M(4 * K - 2) + 1.0) * (2 * K * M(4 * K - 1) + x);
        case 17: return (M(4 * K - 2) + 1.0) * (2 * K * M(4 * K - 1) + x) * at;
        case 18: return M(1 / K) * p3 * p3 * p3;
        case 19: return -M(1 / K) * std::pow((2 * K + 1) * M(3) + x, 2);
        case 20: return -M(1 / K + 3) * p3 * p3;
        case 21: return M(1.5 / K + 1) * p3 * p3 * p3;
        case 22: return M(1 / K + 1) * p3 * p3 * p3;
        case 23: return (x * x + 1.0) * M(1.5 / K) * p3 * p3 * p3;
        default: {
            const double l = lam;
            return M(5) * l * l * l * std::pow(2 * K + 1, 3) + x * x * (3 * (8 * K * K + 6 * K + 1) * l * l + 1) +
                   l * x * (-4 * K * K * l * l - 2 * K * (l * l - 3) + 3) + 1.0 +
                   (2 * K + 1) * (l * M(3) * ((4 * K * K + 1) * l * l + K * (4 * l * l - 6) + 3) + M(4) * (3 * l * l + K * (6 * l * l + 2)));
        }
    }
}

// m-th Taylor coefficient by the trapezoid rule on a circle of radius rho.
double contour_coeff(int id, int k, double lam, double x, int m, double rho) {
    const int N = 128;
    C s = 0.0;
    for (int q = 0; q < N; ++q) {
        const double t = 2 * std::numbers::pi * q / N;
        s += basis_complex(id, k, lam, x + rho * std::polar(1.0, t)) * std::polar(1.0, -m * t);
    }
    return (s / static_cast<double>(N)).real() / std::pow(rho, m);
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST_CASE("basis jets: trivial examples and domain") {
    const Jet one = BasisFunction{1, 3}.eval_jet(2.5, 4);
    CHECK(one[0] == 1.0);
    for (std::size_t i = 1; i <= 4; ++i) CHECK(one[i] == 0.0);
    const Jet sq = BasisFunction{4, 1}.eval_jet(3.0, 4);
    CHECK(sq.derivative(0) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(sq.derivative(1) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(sq.derivative(2) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(sq.derivative(3)) < 1e-14);
    CHECK(BasisFunction{12, 2}(1.5) == doctest::Approx(1.5 * (1 + std::pow(1.5, 8))).epsilon(1e-14));
    CHECK(BasisFunction{15, 1}(2.0) == doctest::Approx((16.0 + 4.0) * std::atan(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS((BasisFunction{3, 1}.eval_jet(0.0, 2)), DomainError);
    CHECK_THROWS_AS((BasisFunction{3, 1}.eval_jet(-1.0, 2)), DomainError);
    CHECK_THROWS_AS((BasisFunction{25, 1}.eval_jet(1.0, 2)), ConfigError);
    CHECK_THROWS_AS((BasisFunction{3, 1}.eval_jet(1.0, max_basis_order + 1)), ConfigError);
}

TEST_CASE("u15 derivatives agree with central differences of the next lower derivative") {
    const BasisFunction u{15, 1};
    const double x = 1.0, h = 1e-4;
    const Jet j = u.eval_jet(x, 3);
    for (std::size_t m = 1; m <= 3; ++m) {
        const double fd = (u.eval_jet(x + h, m - 1).derivative(m - 1) - u.eval_jet(x - h, m - 1).derivative(m - 1)) / (2 * h);
        CHECK(rel(j.derivative(m), fd) <= 1e-6);
    }
}

TEST_CASE("every basis jet matches a Cauchy-integral oracle through order 4") {
    for (int id = 1; id <= 24; ++id) {
        for (int k : {1, 2, 3}) {
            const double lam = id == 24 ? 1.5 : 0.0;
            for (int q = 0; q < 20; ++q) {
                const double x = 0.05 * std::pow(400.0, q / 19.0);
                const double rho = 0.2 * x / (2 * k);
                const Jet j = BasisFunction{id, k, lam}.eval_jet(x, 4);
                double scale = 0.0;
                for (std::size_t m = 0; m <= 4; ++m) scale = std::max(scale, std::abs(j[m]) * std::pow(rho, static_cast<double>(m)));
                for (int m = 0; m <= 4; ++m) {
                    const double ref = contour_coeff(id, k, lam, x, m, rho);
                    INFO("u" << id << " k=" << k << " x=" << x << " m=" << m);
                    // Coefficients that cancel to zero are compared against the jet's overall scale.
                    CHECK(std::abs(j[static_cast<std::size_t>(m)] - ref) * std::pow(rho, m) <=
                          1e-6 * std::max(std::abs(ref) * std::pow(rho, m), 1e-6 * scale));
                }
            }
        }
    }
}

TEST_CASE("Wronskian examples") {
    CHECK(wronskian(family_F(1, 1), 1.0, 1).value == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(wronskian(family_F(2, 1), 1.0, 3).value == doctest::Approx(8.0).epsilon(1e-14));
    const OrderedFamily f6 = family_F(6, 2);
    for (double x : {0.3, 1.0, 4.0}) CHECK(wronskian(f6, x, 0).value == doctest::Approx(1.0));
    const OrderedFamily f2 = family_F(2, 3);
    CHECK(wronskian(f2, 1.7, 0).value == doctest::Approx(BasisFunction{13, 3}(1.7)).epsilon(1e-14));
    CHECK_THROWS_AS(wronskian(f2, 1.0, 4), ConfigError);
    CHECK_THROWS_AS(wronskian(f2, 0.0, 1), DomainError);
}

TEST_CASE("swapping two members flips the Wronskian sign") {
    for (const auto& [idx, k] : std::vector<std::pair<int, int>>{{3, 1}, {6, 3}, {5, 2}}) {
        const OrderedFamily f = family_F(idx, k);
        OrderedFamily g = f;
        std::swap(g.members[1], g.members[3]);
        const std::size_t s = f.size() - 1;
        for (int q = 0; q < 100; ++q) {
            const double x = 0.1 * std::pow(100.0, q / 99.0);
            const WronskianValue a = wronskian(f, x, s), b = wronskian(g, x, s);
            CHECK(a.sign == -b.sign);
            CHECK(std::abs(a.log_abs - b.log_abs) <= 1e-12L * std::max(1.0L, std::abs(a.log_abs)));
        }
    }
}

TEST_CASE("printed Wronskian closed forms match determinant evaluation") {
    for (const auto& pw : testsupport::printed_wronskians()) {
        double worst = 0.0;
        for (int q = 0; q < 50; ++q) {
            const double x = 0.1 * std::pow(100.0, q / 49.0);
            const WronskianValue w = wronskian(pw.family, x, pw.s);
            const long double ref = pw.closed_form(x);
            const long double got = w.sign * std::exp(w.log_abs);
            worst = std::max(worst, static_cast<double>(std::abs(got - ref) / std::max(std::abs(got), std::abs(ref))));
        }
        INFO(pw.label());
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("zero isolation") {
    SUBCASE("linear function") {
        const ZeroReport r = isolate_zeros([](double x) { return x - 1.0; }, 0.5, 2.0);
        REQUIRE(r.count() == 1);
        CHECK(r.zeros[0].simple);
        CHECK(std::abs(r.zeros[0].x - 1.0) <= 1e-12);
        CHECK(r.zeros[0].lo <= 1.0);
        CHECK(r.zeros[0].hi >= 1.0);
        CHECK(r.exhaustive);
    }
    SUBCASE("second Wronskian of F1 for k = 1") {
        const OrderedFamily f = family_F(1, 1);
        const ZeroReport r = isolate_zeros([&](double x) { return wronskian(f, x, 2).value; }, 0.1, 10.0);
        REQUIRE(r.count() == 1);
        CHECK(r.zeros[0].simple);
        CHECK(std::abs(r.zeros[0].x - std::pow(1.0 / 15.0, 0.25)) <= 1e-11);
        CHECK(std::abs(r.zeros[0].x - 0.50813) < 1e-5);
    }
    SUBCASE("close pair inside one grid cell is recovered by refinement") {
        const ZeroReport r = isolate_zeros([](double x) { return (x - 1.0) * (x - 1.0) - 1e-10; }, 0.5, 2.0);
        REQUIRE(r.count() == 2);
        CHECK(std::abs(r.zeros[0].x - (1.0 - 1e-5)) < 1e-11);
        CHECK(std::abs(r.zeros[1].x - (1.0 + 1e-5)) < 1e-11);
        CHECK(r.exhaustive);
    }
    SUBCASE("double zero leaves the report non-exhaustive") {
        const ZeroReport r = isolate_zeros([](double x) { return (x - 1.3) * (x - 1.3); }, 0.5, 2.0);
        CHECK_FALSE(r.exhaustive);
    }
    SUBCASE("budget exhaustion is flagged") {
        IsolateOptions o;
        o.budget = 10;
        const ZeroReport r = isolate_zeros([](double x) { return (x - 1.3) * (x - 1.3) + 1e-30; }, 0.5, 2.0, o);
        CHECK(r.budget_exhausted);
        CHECK_FALSE(r.exhaustive);
    }
    CHECK_THROWS_AS(isolate_zeros([](double x) { return x; }, 1.0, 1.0), ConfigError);
}

TEST_CASE("family certification gives the expected verdicts") {
    const AccuracyVerdict f2 = certify_family(family_F(2, 1), 0.1, 10.0);
    CHECK(f2.classification == FamilyClass::ect);
    CHECK(f2.bound == 3);
    const AccuracyVerdict f1 = certify_family(family_F(1, 1), 0.1, 10.0);
    CHECK(f1.classification == FamilyClass::et_accuracy_one);
    CHECK(f1.bound == 3);
    const AccuracyVerdict f6 = certify_family(family_F(6, 2), 0.1, 10.0);
    CHECK(f6.classification == FamilyClass::et_accuracy_one);
    CHECK(f6.nu == std::vector<int>({0, 0, 0, 0, 0, 0, 1}));
    for (int k : {1, 2, 3}) CHECK(certify_family(family_F(5, k), 1e-3, 1e3).classification == FamilyClass::ect);
    CHECK(certify_family(family_F(3, 1), 1e-3, 1e3).classification == FamilyClass::ect);
    CHECK(certify_family(family_F(4, 2), 1e-3, 1e3).classification == FamilyClass::ect);
    CHECK(certify_family(family_F(4, 3), 1e-3, 1e3).classification == FamilyClass::et_accuracy_one);
    CHECK(certify_family(family_F(2, 2), 1e-3, 1e3).classification == FamilyClass::et_accuracy_one);
    const AccuracyVerdict f63 = certify_family(family_F(6, 3), 1e-3, 1e3);
    CHECK(f63.classification == FamilyClass::theorem3_bound);
    CHECK(f63.nu.back() == 2);
    CHECK(f63.bound == 8);
    CHECK(certify_family(family_G(3), 1e-3, 1e3).classification == FamilyClass::ect);
    IsolateOptions tiny;
    tiny.budget = 100;
    CHECK(certify_family(family_F(2, 1), 0.1, 10.0, tiny).classification == FamilyClass::inconclusive);
    CHECK_THROWS_AS(certify_family(family_F(2, 1), 0.0, 10.0), DomainError);
}

TEST_CASE("bound formula from the Wronskian zero counts") {
    CHECK(theorem3_bound({0, 0, 0}) == 2);
    CHECK(theorem3_bound({0, 0, 1}) == 3);
    CHECK(theorem3_bound({0, 0, 0, 0, 0, 0, 2}) == 8);
    CHECK(theorem3_bound({1}) == 1);
    CHECK(theorem3_bound({0, 1}) == 2);
    // n = 5: 5 + nu5 + nu4 + 2 (nu0 + nu1 + nu2 + nu3) + min(2 nu3, nu0) + min(2 nu4, nu0 + nu1).
    CHECK(theorem3_bound({1, 2, 0, 3, 1, 4}) == 5 + 4 + 1 + 2 * 6 + std::min(6, 1) + std::min(2, 3));
    CHECK(theorem3_bound({3, 0, 0, 0, 0, 0}) == 5 + 6);
    CHECK(theorem3_bound({0, 0, 0, 5, 0, 0}) == 5 + 10 + 0);
    CHECK_THROWS_AS(theorem3_bound({}), ConfigError);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> U(0, 4), len(1, 9);
    for (int t = 0; t < 500; ++t) {
        std::vector<int> nu(static_cast<std::size_t>(len(rng)));
        for (int& v : nu) v = U(rng);
        const int B = theorem3_bound(nu);
        for (std::size_t i = 0; i < nu.size(); ++i) {
            auto up = nu;
            ++up[i];
            CHECK(theorem3_bound(up) >= B);
        }
    }
}

TEST_CASE("F7 k=1 witness has 8 simple zeros on (0, 50)") {
    const Prop4Result p = prop4_check();
    CHECK(p.g.degree() == 19);
    CHECK(p.zeros.count() == 8);
    CHECK(p.zeros.simple_count() == 8);
    CHECK(p.zeros.exhaustive);
    CHECK_FALSE(p.a1_adjusted);
    CHECK_FALSE(p.note.empty());
    for (std::size_t i = 1; i < p.zeros.zeros.size(); ++i) CHECK(p.zeros.zeros[i].x - p.zeros.zeros[i - 1].x > 1e-6);
}

TEST_CASE("F7 k=2 sign ladder and nine-zero witness") {
    const Prop5Result p = prop5_witness(2);
    CHECK(p.ladder_ok);
    CHECK(p.ladder[0] > 0);
    CHECK(p.ladder[1] < 0);
    CHECK(p.ladder[2] == 0);
    CHECK(p.ladder[3] < 0);
    CHECK(p.ladder[4] > 0);
    CHECK(p.base_zeros.simple_count() == 4);
    CHECK(p.success);
    CHECK(p.zeros.simple_count() == 9);
    CHECK(p.zeros.count() == 9);
    for (double a : p.a) CHECK(std::abs(a) < 1.0);
    CHECK_THROWS_AS(prop5_witness(1), ConfigError);
}

TEST_CASE("F7 ceilings through derivative families") {
    const F7Ceiling c1 = f7_ceiling(1);
    CHECK(c1.verdict.classification == FamilyClass::ect);
    CHECK(c1.ceiling == 10);
    const F7Ceiling c2 = f7_ceiling(2);
    CHECK(c2.verdict.classification == FamilyClass::et_accuracy_one);
    CHECK(c2.ceiling == 14);
}

TEST_CASE("family parsing and reports") {
    CHECK(family_by_name("F7 k=1").lambda == 2.0);
    CHECK(family_by_name("F7 k=3").lambda == 1.0);
    CHECK(family_by_name("F7 k=1 lambda=0.5").lambda == 0.5);
    CHECK(family_by_name("H k=3 alpha=0.5 beta=-1").size() == 5);
    CHECK(family_by_name("J0").size() == 6);
    CHECK(family_by_name("H8 k=2").size() == 6);
    CHECK_THROWS_AS(family_by_name("F9 k=1"), ConfigError);
    CHECK_THROWS_AS(family_by_name("F2 k=x"), ConfigError);
    CHECK_THROWS_AS(family_by_name("F2 q=1"), ConfigError);
    CHECK_THROWS_AS(family_by_name("F2 k=0"), ConfigError);

    const AccuracyVerdict v = certify_family(family_F(1, 1), 0.1, 10.0);
    const nlohmann::json j = to_json(v);
    CHECK(j["classification"] == "ET-accuracy-1");
    CHECK(j["nu"] == std::vector<int>({0, 0, 1}));
    CHECK(j["wronskian_zeros"][2]["zeros"][0]["multiplicity"] == "simple");
    const nlohmann::json z = to_json(v.reports[2]);
    CHECK(z["ledger"].size() >= 1);
    const std::string csv = wronskian_csv(family_F(2, 1), 0.5, 2.0, 5);
    CHECK(csv.rfind("x,W0,W1,W2,W3\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}
