#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "melnlab/errors.hpp"
#include "melnlab/kernels.hpp"
#include "melnlab/recursion.hpp"
#include "test_support.hpp"

using namespace melnlab;

TEST_CASE("parallel kernels reproduce their serial references") {
    set_workers(4);
    CHECK(workers() == 4);
    std::mt19937_64 rng(17);
    const SystemConfig cfg = testsupport::random_config(rng, 3, 3);
    std::vector<double> r;
    for (int i = 0; i < 24; ++i) r.push_back(0.3 + 0.1 * i);
    const auto a = melnikov_table(cfg, r, true), b = melnikov_table(cfg, r, false);
    CHECK(a == b);
    const MelnikovEngine eng(cfg);
    CHECK(a[5] == eng.melnikov_all(r[5]));

    const std::vector<double> few{0.5, 1.0, 1.5, 2.0};
    const auto e1 = extraction_table(cfg.with_order(1), 1, few, {}, true);
    const auto e2 = extraction_table(cfg.with_order(1), 1, few, {}, false);
    for (std::size_t i = 0; i < few.size(); ++i) {
        CHECK(e1[i].value == e2[i].value);
        CHECK(e1[i].error_estimate == e2[i].error_estimate);
    }

    const OrderedFamily fam = family_F(5, 2);
    const auto w1 = wronskian_table(fam, 7, r, true), w2 = wronskian_table(fam, 7, r, false);
    for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(w1[i].log_abs == w2[i].log_abs);
        CHECK(w1[i].sign == w2[i].sign);
    }
}

TEST_CASE("exceptions inside parallel kernels reach the caller") {
    const OrderedFamily fam = family_F(2, 1);
    CHECK_THROWS_AS(wronskian_table(fam, 1, {1.0, -1.0, 2.0}, true), DomainError);
    CHECK_THROWS_AS(melnikov_table(SystemConfig(2, 1), {1.0, 0.0}, true), DomainError);
}
