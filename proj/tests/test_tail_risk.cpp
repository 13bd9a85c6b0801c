#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epitail/mixture.hpp"
#include "epitail/tail_risk.hpp"
#include "support/oracles.hpp"

using namespace epitail;
using oracles::rel_err;

TEST_CASE("baseline identities") {
    const GaussianSpec std_normal(0.0, 1.0);
    CHECK(exceedance({0.0, 0, 0.0, std_normal}) == 0.5);
    CHECK(rel_err(exceedance({1.0, 0, 0.0, std_normal}), 0.15865525393145705) <
          1e-13);
    // n = 0 is exactly half the complementary error function
    for (double k : {0.5, 2.0, 6.0}) {
        CHECK(exceedance({k, 0, 0.0, std_normal}) ==
              0.5 * epitail::erfc(k / std::sqrt(2.0)));
    }
}

TEST_CASE("location shifts translate the threshold") {
    const double centered = exceedance({3.0, 7, 0.1, GaussianSpec(0.0, 1.0)});
    const double shifted = exceedance({3.0 + 2.5, 7, 0.1, GaussianSpec(2.5, 1.0)});
    CHECK(centered == shifted);
}

TEST_CASE("frozen exceedance values, n=5 eps=0.1") {
    const GaussianSpec base(0.0, 1.0);
    CHECK(rel_err(exceedance({3.0, 5, 0.1, base}), 0.0037078990332599888) < 1e-12);
    CHECK(rel_err(exceedance({5.0, 5, 0.1, base}), 4.1880294117975904e-5) < 1e-12);
}

TEST_CASE("exceedance equals the integrated mixture density") {
    const struct {
        int n;
        double eps, k;
    } cases[] = {{5, 0.1, 3.0}, {10, 0.1, 5.0}, {7, 0.3, 2.0}};
    for (const auto& c : cases) {
        CAPTURE(c.n);
        CAPTURE(c.k);
        const GaussianSpec base(0.0, 1.0);
        const auto mix = mixture_from(base, ErrorSchedule::constant(c.eps, c.n));
        double smax = 0.0;
        for (const auto& comp : mix.components())
            smax = std::max(smax, comp.scale);
        const double integral = oracles::integrate(
            [&](double x) { return density(mix, x); }, c.k, 80.0 * smax, 1e-14);
        CHECK(std::fabs(exceedance({c.k, c.n, c.eps, base}) - integral) < 1e-10);
    }
}

TEST_CASE("ratio table matches the printed exceedance-ratio tables") {
    const GaussianSpec base(0.0, 1.0);
    const int ns[] = {5, 10, 15, 20, 25};
    const double ks[] = {3.0, 5.0, 10.0};

    // eps = 0.01 generates the {1.01724 .. 3347} table
    const auto small_eps = ratio_table(ns, ks, 0.01, base);
    CHECK(rel_err(small_eps.cells[0][0], 1.0172425) < 1e-6);
    CHECK(rel_err(small_eps.cells[1][1], 1.3269739) < 1e-6);
    CHECK(rel_err(small_eps.cells[0][2], 7.5735542) < 1e-6);
    CHECK(rel_err(small_eps.cells[4][2], 3346.9899) < 1e-6);

    // eps = 0.1 generates the {2.74 .. 3.62e18} table
    const auto big_eps = ratio_table(ns, ks, 0.1, base);
    CHECK(rel_err(big_eps.cells[0][0], 2.7467993) < 1e-6);
    CHECK(rel_err(big_eps.cells[0][2], 1.0922668e12) < 1e-6);
    CHECK(rel_err(big_eps.cells[4][2], 3.6234201e18) < 1e-6);
}

TEST_CASE("zero error rate gives an all-ones table, exactly") {
    const GaussianSpec base(0.0, 1.0);
    const int ns[] = {1, 5, 25};
    const double ks[] = {1.0, 3.0, 10.0};
    const auto table = ratio_table(ns, ks, 0.0, base);
    for (const auto& row : table.cells)
        for (double cell : row) CHECK(cell == 1.0);
}

TEST_CASE("cells grow strictly with n in the table pattern") {
    const GaussianSpec base(0.0, 1.0);
    const int ns[] = {5, 10, 15, 20, 25};
    const double ks[] = {3.0, 5.0, 10.0};
    for (double eps : {0.01, 0.1}) {
        const auto table = ratio_table(ns, ks, eps, base);
        for (std::size_t c = 0; c < 3; ++c) {
            for (std::size_t r = 1; r < 5; ++r) {
                CAPTURE(eps);
                CAPTURE(r);
                CAPTURE(c);
                CHECK(table.cells[r][c] > table.cells[r - 1][c]);
            }
        }
    }
}

TEST_CASE("probabilities stay inside (0,1) and vanish in the far tail") {
    const GaussianSpec base(0.0, 1.0);
    for (int n : {0, 5, 25}) {
        for (double k : {0.5, 3.0, 10.0, 30.0}) {
            const double p = exceedance({k, n, 0.1, base});
            CHECK(p > 0.0);
            CHECK(p < 1.0);
        }
    }
    CHECK(exceedance({30.0, 5, 0.1, base}) < exceedance({10.0, 5, 0.1, base}));
    CHECK(exceedance({60.0, 5, 0.1, base}) < 1e-100);
}

TEST_CASE("the large-n log-space path joins smoothly") {
    const GaussianSpec base(0.0, 1.0);
    double prev = exceedance({3.0, 58, 0.1, base});
    for (int n : {59, 60, 61, 62, 70}) {
        const double cur = exceedance({3.0, n, 0.1, base});
        CHECK(cur > prev);  // monotone through the branch switch at n = 60
        CHECK(cur < 1.0);
        prev = cur;
    }
}

TEST_CASE("invalid queries are rejected") {
    CHECK_THROWS_AS(exceedance({1.0, -1, 0.1, GaussianSpec(0.0, 1.0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(exceedance({1.0, 1, 1.0, GaussianSpec(0.0, 1.0)}),
                    std::invalid_argument);
}
