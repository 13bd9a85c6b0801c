#pragma once

#include <limits>
#include <vector>

#include "epitail/gaussian.hpp"

namespace epitail {

/// CLT-limit description of the random precision lambda = 1/sigma^2:
/// log-variance S^2 of the limiting Lognormal prior, plus the Gamma(alpha,
/// beta) matched to the same coefficient of variation,
///   alpha = 1/(e^(S^2)-1),   beta = e^(-S^2/2)/(e^(S^2)-1)   (rate beta).
struct PrecisionPrior {
    double s2;
    double alpha;
    double beta;
};

/// CV-matched Gamma prior for a given S^2 > 0.
PrecisionPrior match_gamma(double s2);

/// The closed-form marginal when the precision is Gamma: a non-standardized
/// Student-t with 2*alpha degrees of freedom, zero location, scale beta.
struct StudentTSpec {
    double dof;
    double location;
    double scale_param;
};

StudentTSpec student_t_from(const PrecisionPrior& prior);

/// Multiplicative error chain on the precision: per-layer error variances,
/// each bounded below by c > 0.
struct ErrorChain {
    std::vector<double> variances;
    double c = std::numeric_limits<double>::min();
};

/// S^2 = sum of the per-layer error variances. Throws on an empty chain or
/// any variance below the chain's floor c.
double compose_s2(const ErrorChain& chain);

/// Compound Normal-Lognormal marginal density: the expectation of the
/// precision-parametrized Normal pdf over lambda ~ Lognormal(0, S^2),
/// evaluated by Gauss-Hermite quadrature after lambda = e^u. Nodes start at
/// 64 and double until successive values agree within 1e-9 (cap 1024);
/// failing that throws QuadratureError with the node count reached.
double cnl_density(double x, double s2);

/// Numerically integrated CNL moments (normalization, variance, excess
/// kurtosis), for checking the density against its closed-form identities
/// integral = 1, variance = e^(S^2/2), excess kurtosis = 3(e^(S^2)-1).
struct CnlMoments {
    double integral;
    double variance;
    double excess_kurtosis;
};

CnlMoments cnl_numeric_moments(double s2);

/// Student-t closed form
///   Gamma(alpha+1/2) / (Gamma(alpha) sqrt(2 beta pi)) (1+x^2/(2 beta))^-(alpha+1/2).
double student_t_density(double x, const PrecisionPrior& prior);

/// Failure (hazard) rate value; `at_asymptote` flags the far-tail regime
/// x/scale > 700 where the value is within O(shape/700) of 1/scale. The
/// value itself is always the honestly computed rate.
struct FailureRate {
    double value;
    bool at_asymptote;
};

/// Gamma(shape, scale) hazard r(x) = e^(-x/b) (x/b)^(a-1) / (b Gamma(a, x/b)),
/// evaluated through the continued fraction so no intermediate overflows;
/// r -> 1/scale as x -> infinity.
FailureRate failure_rate_gamma(double x, double shape, double scale);

/// Lognormal(mu, sigma^2) hazard
///   sqrt(2/pi) e^(-(mu-log x)^2/(2 sigma^2)) / (sigma x erfc((log x-mu)/(sqrt 2 sigma))),
/// with the far tail routed through the scaled complement so it decays to 0
/// instead of 0/0. r -> 0 as x -> infinity.
double failure_rate_lognormal(double x, double mu, double sigma);

/// Survival functions used by the tail-ordering checks.
double gamma_survival(double x, double shape, double scale);
double lognormal_survival(double x, double mu, double sigma);

/// Inverse CDF of Gamma(shape, scale) by bracketed bisection.
double gamma_quantile(double p, double shape, double scale);

/// Exponential intensity with a Gamma(alpha, beta) prior marginalizes to a
/// Lomax: survival (1 + x/scale)^(-shape) with shape = alpha, scale = beta.
struct LomaxParams {
    double shape;
    double scale;
};

LomaxParams lomax_from(const PrecisionPrior& prior);
double lomax_pdf(double x, const LomaxParams& lp);
double lomax_survival(double x, const LomaxParams& lp);

/// Poisson intensity with a Gamma(alpha, beta) prior marginalizes to a
/// Negative Binomial with size alpha and success probability beta/(1+beta).
struct NegBinParams {
    double size;
    double prob;
};

NegBinParams negbin_from(const PrecisionPrior& prior);
double negbin_pmf(long long k, const NegBinParams& nb);

}  // namespace epitail
