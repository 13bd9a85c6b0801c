#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "epitail/gaussian.hpp"
#include "epitail/mixture.hpp"

namespace epitail {

/// First four moments of the layered mixture: the named (central) set plus
/// the raw moments about zero.
struct MomentSet {
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    std::array<double, 4> raw{};  // raw[k-1] = E[X^k]
};

/// Geometrically decaying error rates: epsilon_i = kappa^(i-1) * epsilon1.
/// layers == nullopt means the infinite-recursion limit.
struct DecaySchedule {
    double epsilon1 = 0.0;
    double kappa = 1.0;
    std::optional<long long> layers;
};

/// Closed-form moments under a constant error rate with p = 1/2.
///   variance        = sigma^2 (1+eps^2)^n
///   excess kurtosis = 3[ (1+6eps^2+eps^4)^n / (1+eps^2)^(2n) - 1 ]
/// Powers go through logs so huge n (the moment-explosion regime) stays
/// finite-arithmetic.
MomentSet constant_eps_moments(const GaussianSpec& base, double epsilon,
                               long long n);

/// Contract-checking overload: rejects schedules that are not constant or
/// whose p differs from 1/2 (those need the oracle or the sampler).
MomentSet constant_eps_moments(const GaussianSpec& base,
                               const ErrorSchedule& schedule);

/// Variance under decaying rates: sigma^2 * prod_{i=0}^{n-1} (1 + eps1^2 kappa^(2i)).
/// For the infinite case factors are accumulated until 1 + a q^i - 1 < 1e-16.
/// Throws DivergenceError when kappa = 1 with infinite layers (and eps1 > 0).
double decaying_eps_variance(const GaussianSpec& base, const DecaySchedule& d);

/// Fourth central moment under decaying rates:
/// 3 sigma^4 * prod_{i=0}^{n-1} (1 + 6 eps^2 kappa^(2i) + eps^4 kappa^(4i)).
double decaying_eps_fourth_central(const GaussianSpec& base, const DecaySchedule& d);

/// q-Pochhammer product [a;q]_n = prod_{i=0}^{n-1} (1 + a q^i).
double q_pochhammer(double a, double q, long long n);

/// Limiting product [a;q]_inf, truncated once |a q^i| < 1e-16.
/// Requires |q| < 1 unless a = 0; throws DivergenceError otherwise.
double q_pochhammer_limit(double a, double q);

/// Exact weighted-component moments of an explicit mixture. No sampling,
/// no closed-form shortcuts: this is the oracle the formulas are tested
/// against.
MomentSet mixture_moments_oracle(const ScaleMixture& mix);

}  // namespace epitail
