#include "epitail/compound.hpp"

#include <cmath>
#include <stdexcept>

#include "epitail/errors.hpp"
#include "epitail/quadrature.hpp"
#include "epitail/special.hpp"

namespace epitail {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kSqrt2OverPi = 0.79788456080286535588;

void check_s2(double s2) {
    if (!(s2 > 0.0) || !std::isfinite(s2))
        throw std::invalid_argument("compound: S^2 must be positive and finite");
}

}  // namespace

PrecisionPrior match_gamma(double s2) {
    if (s2 == 0.0)
        throw std::invalid_argument("match_gamma: S^2 = 0 is a degenerate prior");
    check_s2(s2);
    const double em1 = std::expm1(s2);
    return PrecisionPrior{s2, 1.0 / em1, std::exp(-0.5 * s2) / em1};
}

StudentTSpec student_t_from(const PrecisionPrior& prior) {
    return StudentTSpec{2.0 * prior.alpha, 0.0, prior.beta};
}

double compose_s2(const ErrorChain& chain) {
    if (chain.variances.empty())
        throw std::invalid_argument("compose_s2: chain must be nonempty");
    if (!(chain.c > 0.0))
        throw std::invalid_argument("compose_s2: the floor c must be > 0");
    double total = 0.0;
    for (double v : chain.variances) {
        if (!(v >= chain.c))
            throw std::invalid_argument(
                "compose_s2: every variance must be >= the chain floor c");
        total += v;
    }
    return total;
}

double cnl_density(double x, double s2) {
    check_s2(s2);
    const double s = std::sqrt(s2);
    const double half_x2 = 0.5 * x * x;
    // E_u[f(u)] with u ~ N(0, S^2), f(u) = exp(u/2 - e^u x^2/2)/sqrt(2 pi);
    // Gauss-Hermite after u = sqrt(2) S t.
    const auto eval = [&](int nodes) {
        const QuadratureRule& rule = gauss_hermite(nodes);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double u = M_SQRT2 * s * rule.nodes[i];
            acc += rule.weights[i] * std::exp(0.5 * u - std::exp(u) * half_x2);
        }
        return acc / (std::sqrt(M_PI) * kSqrt2Pi);
    };
    double prev = eval(64);
    for (int nodes = 128; nodes <= 1024; nodes *= 2) {
        const double cur = eval(nodes);
        if (std::fabs(cur - prev) < 1e-9) return cur;
        prev = cur;
    }
    throw QuadratureError(
        "cnl_density: node doubling did not stabilize to 1e-9", 1024);
}

CnlMoments cnl_numeric_moments(double s2) {
    check_s2(s2);
    const double s = std::sqrt(s2);
    // Effective component scales run from about e^(-4S) to e^(4S); resolve
    // the peak at the small scale and chase the fourth-moment tail well past
    // the large one.
    const double cutoff = 16.0 * std::exp(4.0 * s);
    const double first = 0.25 * std::exp(-4.0 * s);
    const double m0 =
        2.0 * integrate_graded([&](double x) { return cnl_density(x, s2); },
                               0.0, cutoff, first, 1.35, 32);
    const double m2 = 2.0 * integrate_graded(
                                [&](double x) { return x * x * cnl_density(x, s2); },
                                0.0, cutoff, first, 1.35, 32);
    const double m4 =
        2.0 * integrate_graded(
                  [&](double x) { return x * x * x * x * cnl_density(x, s2); },
                  0.0, cutoff, first, 1.35, 32);
    return CnlMoments{m0, m2, m4 / (m2 * m2) - 3.0};
}

double student_t_density(double x, const PrecisionPrior& prior) {
    if (!(prior.alpha > 0.0) || !(prior.beta > 0.0))
        throw std::invalid_argument("student_t_density: prior must be positive");
    const double a = prior.alpha;
    const double b = prior.beta;
    const double log_num = std::lgamma(a + 0.5) - std::lgamma(a) -
                           (a + 0.5) * std::log1p(x * x / (2.0 * b));
    return std::exp(log_num) / std::sqrt(2.0 * b * M_PI);
}

FailureRate failure_rate_gamma(double x, double shape, double scale) {
    if (!(x > 0.0) || !(shape > 0.0) || !(scale > 0.0))
        throw std::invalid_argument("failure_rate_gamma: need x, shape, scale > 0");
    const double z = x / scale;
    double value;
    if (z >= shape + 1.0) {
        // Gamma(a,z) = e^-z z^a H, so the exponentials cancel exactly.
        value = 1.0 / (scale * z * upper_gamma_cf(shape, z));
    } else {
        const double log_r = -z + (shape - 1.0) * std::log(z) -
                             log_upper_gamma(shape, z);
        value = std::exp(log_r) / scale;
    }
    return FailureRate{value, z > 700.0};
}

double failure_rate_lognormal(double x, double mu, double sigma) {
    if (!(x > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("failure_rate_lognormal: need x, sigma > 0");
    const double w = (std::log(x) - mu) / (M_SQRT2 * sigma);
    if (w >= 0.0) {
        // e^(-w^2)/erfc(w) = 1/erfcx(w): the tail ratio without underflow.
        return kSqrt2OverPi / (sigma * x * erfcx(w));
    }
    return kSqrt2OverPi * std::exp(-w * w) / (sigma * x * epitail::erfc(w));
}

double gamma_survival(double x, double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::invalid_argument("gamma_survival: need shape, scale > 0");
    if (x <= 0.0) return 1.0;
    return regularized_gamma_q(shape, x / scale);
}

double lognormal_survival(double x, double mu, double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("lognormal_survival: need sigma > 0");
    if (x <= 0.0) return 1.0;
    return 0.5 * epitail::erfc((std::log(x) - mu) / (M_SQRT2 * sigma));
}

double gamma_quantile(double p, double shape, double scale) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::invalid_argument("gamma_quantile: p must lie in (0, 1)");
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::invalid_argument("gamma_quantile: need shape, scale > 0");
    double lo = 0.0;
    double hi = scale * (shape + 10.0);
    while (regularized_gamma_p(shape, hi / scale) < p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (regularized_gamma_p(shape, mid / scale) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

LomaxParams lomax_from(const PrecisionPrior& prior) {
    if (!(prior.alpha > 0.0) || !(prior.beta > 0.0))
        throw std::invalid_argument("lomax_from: prior must be positive");
    return LomaxParams{prior.alpha, prior.beta};
}

double lomax_pdf(double x, const LomaxParams& lp) {
    if (x < 0.0) return 0.0;
    return lp.shape / lp.scale *
           std::exp(-(lp.shape + 1.0) * std::log1p(x / lp.scale));
}

double lomax_survival(double x, const LomaxParams& lp) {
    if (x <= 0.0) return 1.0;
    return std::exp(-lp.shape * std::log1p(x / lp.scale));
}

NegBinParams negbin_from(const PrecisionPrior& prior) {
    if (!(prior.alpha > 0.0) || !(prior.beta > 0.0))
        throw std::invalid_argument("negbin_from: prior must be positive");
    return NegBinParams{prior.alpha, prior.beta / (1.0 + prior.beta)};
}

double negbin_pmf(long long k, const NegBinParams& nb) {
    if (k < 0) return 0.0;
    const double kk = static_cast<double>(k);
    const double log_p = std::lgamma(kk + nb.size) - std::lgamma(nb.size) -
                         std::lgamma(kk + 1.0) + nb.size * std::log(nb.prob) +
                         kk * std::log1p(-nb.prob);
    return std::exp(log_p);
}

}  // namespace epitail
