#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "epitail/compound.hpp"
#include "epitail/moments.hpp"
#include "epitail/sampler.hpp"
#include "epitail/tail_risk.hpp"

using namespace epitail;

namespace {

double zscore(double estimate, double truth, double se) {
    return (estimate - truth) / se;
}

// Exact moments of log(1+eps) for eps ~ Uniform(-a, a), from the closed
// antiderivatives of log^k(u) on [1-a, 1+a].
double log_uniform_mean(double a) {
    const double hi = 1.0 + a, lo = 1.0 - a;
    return (hi * std::log(hi) - hi - (lo * std::log(lo) - lo)) / (2.0 * a);
}

double log_uniform_second(double a) {
    const double hi = 1.0 + a, lo = 1.0 - a;
    const auto F = [](double u) {
        const double l = std::log(u);
        return u * (l * l - 2.0 * l + 2.0);
    };
    return (F(hi) - F(lo)) / (2.0 * a);
}

}  // namespace

TEST_CASE("identical configs reproduce bit-identical streams") {
    const GaussianSpec base(0.0, 1.0);
    const auto sched = ErrorSchedule::constant(0.1, 5);
    const SimConfig cfg{1234, 100000, 7};
    const auto a = sample_layered(base, sched, cfg);
    const auto b = sample_layered(base, sched, cfg);
    CHECK(a == b);

    const auto c = sample_layered(base, sched, SimConfig{1234, 100000, 8});
    CHECK(a != c);
    const auto d = sample_layered(base, sched, SimConfig{1235, 100000, 7});
    CHECK(a != d);
}

TEST_CASE("chunked seeding makes prefixes stable under resizing") {
    const GaussianSpec base(0.0, 1.0);
    const auto sched = ErrorSchedule::constant(0.1, 3);
    const auto big = sample_layered(base, sched, SimConfig{9, 200000, 0});
    const auto small = sample_layered(base, sched, SimConfig{9, 70000, 0});
    for (std::size_t i = 0; i < small.size(); ++i) {
        REQUIRE(small[i] == big[i]);
    }
}

TEST_CASE("plain normal sampling matches its first two moments") {
    const auto xs = sample_layered(GaussianSpec(0.0, 1.0), ErrorSchedule{},
                                   SimConfig{42, 1000000, 0});
    const auto s = summarize(xs);
    CHECK(std::fabs(zscore(s.mean, 0.0, s.se_mean)) < 4.0);
    CHECK(std::fabs(zscore(s.variance, 1.0, s.se_variance)) < 4.0);
    CHECK(std::fabs(zscore(s.skewness, 0.0, s.se_skewness)) < 4.0);
    CHECK(std::fabs(zscore(s.excess_kurtosis, 0.0, s.se_excess_kurtosis)) < 4.0);
    // the delta-method standard errors should sit near the Normal's
    // sqrt(6/N) and sqrt(24/N)
    CHECK(s.se_skewness == doctest::Approx(std::sqrt(6.0 / 1e6)).epsilon(0.15));
    CHECK(s.se_excess_kurtosis ==
          doctest::Approx(std::sqrt(24.0 / 1e6)).epsilon(0.15));
}

TEST_CASE("layered draws agree with the closed-form moments") {
    const GaussianSpec base(0.0, 1.0);
    const auto closed = constant_eps_moments(base, 0.1, 10);
    const auto xs = sample_layered(base, ErrorSchedule::constant(0.1, 10),
                                   SimConfig{2024, 1000000, 0});
    const auto s = summarize(xs);
    CHECK(std::fabs(zscore(s.variance, closed.variance, s.se_variance)) < 4.0);
    CHECK(std::fabs(zscore(s.excess_kurtosis, closed.excess_kurtosis,
                           s.se_excess_kurtosis)) < 4.0);
}

TEST_CASE("degenerate error chain returns lambda_hat exactly") {
    const std::vector<ErrorDist> none(3, ErrorDist{ErrorDist::Kind::uniform, 0.0, 1.0});
    const auto xs = sample_precision_chain(2.5, none, SimConfig{1, 1000, 0});
    for (double x : xs) CHECK(x == 2.5);
}

TEST_CASE("log lambda variance matches the per-layer log-moment oracle") {
    const double a = 0.05;
    const int n = 50;
    const std::vector<ErrorDist> errors(n, ErrorDist{ErrorDist::Kind::uniform, a, 1.0});
    const auto lambdas =
        sample_precision_chain(1.0, errors, SimConfig{77, 400000, 0});
    std::vector<double> logs(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) logs[i] = std::log(lambdas[i]);
    const auto s = summarize(logs);

    const double m1 = log_uniform_mean(a);
    const double var1 = log_uniform_second(a) - m1 * m1;
    CHECK(std::fabs(zscore(s.variance, n * var1, s.se_variance)) < 4.0);
    CHECK(std::fabs(zscore(s.mean, n * m1, s.se_mean)) < 4.0);
    // small errors: the log-variance is close to S^2 = sum of variances
    const double s2 = n * a * a / 3.0;
    CHECK(s.variance == doctest::Approx(s2).epsilon(0.02));
    // CLT symmetry: skewness within 4 SE of zero
    CHECK(std::fabs(zscore(s.skewness, 0.0, s.se_skewness)) < 4.0);
}

TEST_CASE("scaled-beta errors hit their stated variance") {
    const int n = 20;
    const std::vector<ErrorDist> errors(
        n, ErrorDist{ErrorDist::Kind::scaled_beta, 0.2, 3.0});
    CHECK(errors[0].variance() == doctest::Approx(0.04 / 7.0).epsilon(1e-15));
    const auto lambdas =
        sample_precision_chain(1.0, errors, SimConfig{5150, 300000, 0});
    std::vector<double> logs(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) logs[i] = std::log(lambdas[i]);
    const auto s = summarize(logs);
    // log(1+eps) variance ~ eps variance at this width, within a percent or so
    CHECK(s.variance == doctest::Approx(n * errors[0].variance()).epsilon(0.05));
}

TEST_CASE("compound sampler matches the CNL identities") {
    const auto xs = sample_cnl(0.5, SimConfig{31337, 1000000, 0});
    const auto s = summarize(xs);
    CHECK(std::fabs(zscore(s.variance, std::exp(0.25), s.se_variance)) < 4.0);
    CHECK(std::fabs(zscore(s.excess_kurtosis, 3.0 * std::expm1(0.5),
                           s.se_excess_kurtosis)) < 4.0);

    const auto tight = sample_cnl(1e-8, SimConfig{31337, 200000, 0});
    const auto st = summarize(tight);
    CHECK(std::fabs(zscore(st.variance, 1.0, st.se_variance)) < 4.0);
}

TEST_CASE("compound sampler histogram tracks the quadrature density") {
    const double s2 = 0.5;
    const auto xs = sample_cnl(s2, SimConfig{99, 1000000, 0});
    const int bins = 16;
    const double lo = -4.0, hi = 4.0;
    const double w = (hi - lo) / bins;
    std::vector<double> counts(bins, 0.0);
    for (double x : xs) {
        if (x >= lo && x < hi)
            counts[static_cast<int>((x - lo) / w)] += 1.0;
    }
    for (int b = 0; b < bins; ++b) {
        // three-point Simpson estimate of the bin mass
        const double a = lo + b * w;
        const double p = w / 6.0 *
                         (cnl_density(a, s2) + 4.0 * cnl_density(a + 0.5 * w, s2) +
                          cnl_density(a + w, s2));
        const double n = static_cast<double>(xs.size());
        const double se = std::sqrt(n * p * (1.0 - p));
        CAPTURE(b);
        CHECK(std::fabs(counts[b] - n * p) < 5.0 * se);
    }
}

TEST_CASE("tail estimator is unbiased on the plain Normal") {
    const GaussianSpec base(0.0, 1.0);
    for (double k : {3.0, 5.0}) {
        CAPTURE(k);
        const double truth = 0.5 * epitail::erfc(k / std::sqrt(2.0));
        const auto est =
            estimate_exceedance(base, ErrorSchedule{}, k, SimConfig{7, 200000, 0});
        CHECK(est.std_error > 0.0);
        CHECK(std::fabs(zscore(est.probability, truth, est.std_error)) < 4.0);
        CHECK(est.std_error / truth < 0.05);  // the tilt keeps relative noise small
    }
}

TEST_CASE("tail estimator reaches the layered far tail") {
    const GaussianSpec base(0.0, 1.0);
    const auto sched = ErrorSchedule::constant(0.1, 5);
    for (double k : {3.0, 10.0}) {
        CAPTURE(k);
        const double truth = exceedance({k, 5, 0.1, base});
        const auto est = estimate_exceedance(base, sched, k, SimConfig{11, 200000, 0});
        CHECK(std::fabs(zscore(est.probability, truth, est.std_error)) < 4.0);
    }
}

TEST_CASE("sampler input validation") {
    CHECK_THROWS_AS(sample_cnl(-0.5, SimConfig{1, 10, 0}), std::invalid_argument);
    CHECK_THROWS_AS(sample_precision_chain(
                        0.0, std::vector<ErrorDist>{{ErrorDist::Kind::uniform, 0.1, 1.0}},
                        SimConfig{1, 10, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        sample_precision_chain(
            1.0, std::vector<ErrorDist>{{ErrorDist::Kind::scaled_beta, 0.1, 0.5}},
            SimConfig{1, 10, 0}),
        std::invalid_argument);
    CHECK_THROWS_AS(summarize(std::vector<double>{1.0}), std::invalid_argument);
}
