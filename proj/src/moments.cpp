#include "epitail/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "epitail/errors.hpp"

namespace epitail {

namespace {

constexpr double kFactorFloor = 1e-16;  // infinite-product truncation

void check_epsilon(double epsilon) {
    if (!(epsilon >= 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("moments: epsilon must lie in [0, 1)");
}

}  // namespace

MomentSet constant_eps_moments(const GaussianSpec& base, double epsilon,
                               long long n) {
    check_epsilon(epsilon);
    if (n < 0) throw std::invalid_argument("moments: n must be >= 0");

    const double mu = base.mu;
    const double s2 = base.sigma * base.sigma;
    const double e2 = epsilon * epsilon;

    // (1+e^2)^n and (1+6e^2+e^4)^n via logs; exact for n = 0.
    const double log_m2 = std::log1p(e2);
    const double log_m4 = std::log1p(e2 * (6.0 + e2));
    const double nn = static_cast<double>(n);
    const double var_factor = std::exp(nn * log_m2);
    const double fourth_factor = std::exp(nn * log_m4);

    MomentSet m;
    m.mean = mu;
    m.variance = s2 * var_factor;
    m.skewness = 0.0;
    // 3[(1+6e^2+e^4)^n/(1+e^2)^(2n) - 1], with the log difference taken
    // before scaling by n so the explosion regime (n ~ 1e12) stays accurate.
    m.excess_kurtosis = 3.0 * std::expm1(nn * (log_m4 - 2.0 * log_m2));
    m.raw[0] = mu;
    m.raw[1] = mu * mu + s2 * var_factor;
    m.raw[2] = mu * mu * mu + 3.0 * mu * s2 * var_factor;
    m.raw[3] = mu * mu * mu * mu + 6.0 * mu * mu * s2 * var_factor +
               3.0 * s2 * s2 * fourth_factor;
    return m;
}

MomentSet constant_eps_moments(const GaussianSpec& base,
                               const ErrorSchedule& schedule) {
    if (!schedule.is_constant())
        throw std::invalid_argument(
            "constant_eps_moments: schedule has varying rates; use "
            "mixture_moments_oracle or the sampler");
    const int n = schedule.size();
    const double eps = n > 0 ? schedule.layers().front().epsilon : 0.0;
    const double p = n > 0 ? schedule.layers().front().p : 0.5;
    if (n > 0 && p != 0.5)
        throw std::invalid_argument(
            "constant_eps_moments: closed forms assume p = 1/2; use "
            "mixture_moments_oracle or the sampler");
    return constant_eps_moments(base, eps, n);
}

namespace {

// log of prod (1 + a1*q^i + a2*q2^i), truncating the infinite case when the
// factor is within kFactorFloor of 1. Factors are monotone in i, so the
// truncation error is bounded by the first dropped term.
double log_decay_product(double a1, double q, double a2, double q2,
                         std::optional<long long> layers) {
    if (a1 == 0.0 && a2 == 0.0) return 0.0;
    if (!layers.has_value() && q >= 1.0)
        throw DivergenceError(
            "decaying product: kappa = 1 with infinite layers does not converge");
    double log_sum = 0.0;
    double t1 = a1, t2 = a2;
    long long i = 0;
    while (true) {
        if (layers.has_value() && i >= *layers) break;
        const double inc = t1 + t2;
        if (!layers.has_value() && inc < kFactorFloor) break;
        log_sum += std::log1p(inc);
        t1 *= q;
        t2 *= q2;
        ++i;
    }
    return log_sum;
}

}  // namespace

double decaying_eps_variance(const GaussianSpec& base, const DecaySchedule& d) {
    check_epsilon(d.epsilon1);
    if (!(d.kappa >= 0.0) || !(d.kappa <= 1.0))
        throw std::invalid_argument("decaying_eps_variance: kappa must lie in [0, 1]");
    if (d.layers.has_value() && *d.layers < 0)
        throw std::invalid_argument("decaying_eps_variance: layers must be >= 0");
    const double e2 = d.epsilon1 * d.epsilon1;
    const double q = d.kappa * d.kappa;
    return base.sigma * base.sigma * std::exp(log_decay_product(e2, q, 0.0, 0.0, d.layers));
}

double decaying_eps_fourth_central(const GaussianSpec& base, const DecaySchedule& d) {
    check_epsilon(d.epsilon1);
    if (!(d.kappa >= 0.0) || !(d.kappa <= 1.0))
        throw std::invalid_argument("decaying_eps_fourth_central: kappa must lie in [0, 1]");
    if (d.layers.has_value() && *d.layers < 0)
        throw std::invalid_argument("decaying_eps_fourth_central: layers must be >= 0");
    const double e2 = d.epsilon1 * d.epsilon1;
    const double q = d.kappa * d.kappa;
    const double s2 = base.sigma * base.sigma;
    return 3.0 * s2 * s2 *
           std::exp(log_decay_product(6.0 * e2, q, e2 * e2, q * q, d.layers));
}

double q_pochhammer(double a, double q, long long n) {
    if (n < 0) throw std::invalid_argument("q_pochhammer: n must be >= 0");
    double prod = 1.0;
    double term = a;
    for (long long i = 0; i < n; ++i) {
        prod *= 1.0 + term;
        term *= q;
    }
    return prod;
}

double q_pochhammer_limit(double a, double q) {
    if (a == 0.0) return 1.0;
    if (!(std::fabs(q) < 1.0))
        throw DivergenceError("q_pochhammer_limit: requires |q| < 1");
    // Sum logs in increasing i; all-positive factors go through log1p, any
    // nonpositive factor zeroes the product.
    double log_sum = 0.0;
    double term = a;
    while (std::fabs(term) >= kFactorFloor) {
        if (term <= -1.0) return 0.0;
        log_sum += std::log1p(term);
        term *= q;
    }
    return std::exp(log_sum);
}

MomentSet mixture_moments_oracle(const ScaleMixture& mix) {
    const double mu = mix.mu();
    double c2 = 0.0;  // weighted second central moment
    double c4 = 0.0;  // weighted fourth central moment
    for (const auto& comp : mix.components()) {
        const double v = comp.scale * comp.scale;
        c2 += comp.weight * v;
        c4 += comp.weight * 3.0 * v * v;
    }
    MomentSet m;
    m.mean = mu;
    m.variance = c2;
    m.skewness = 0.0;  // every component is symmetric about the shared mu
    m.excess_kurtosis = c4 / (c2 * c2) - 3.0;
    m.raw[0] = mu;
    m.raw[1] = mu * mu + c2;
    m.raw[2] = mu * mu * mu + 3.0 * mu * c2;
    m.raw[3] = mu * mu * mu * mu + 6.0 * mu * mu * c2 + c4;
    return m;
}

}  // namespace epitail
