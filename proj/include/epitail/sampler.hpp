#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "epitail/gaussian.hpp"
#include "epitail/mixture.hpp"

namespace epitail {

/// Reproducibility contract: identical (seed, samples, stream_id) produce a
/// bit-identical sample sequence. Draws are generated in fixed-size chunks,
/// each chunk seeded independently from (seed, stream_id, chunk index), so
/// the output cannot depend on thread count or scheduling.
struct SimConfig {
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::uint64_t stream_id = 0;
};

/// Counter-seeded xoshiro256++ stream with a Box-Muller normal transform.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk);

    std::uint64_t next_u64();

    /// Uniform on (0, 1].
    double next_unit();

    /// Standard normal draw.
    double next_normal();

    /// Gamma(shape >= 1, scale 1) via Marsaglia-Tsang squeeze.
    double next_gamma(double shape);

private:
    std::uint64_t state_[4];
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// One draw per sample of the layered dichotomic process: walk the schedule
/// choosing +eps_i with probability p_i, then draw Normal(mu, sigma * prod).
std::vector<double> sample_layered(const GaussianSpec& base,
                                   const ErrorSchedule& schedule,
                                   const SimConfig& cfg);

/// Zero-mean error distribution on (-1, 1) for the multiplicative precision
/// chain: uniform on (-half_width, half_width), or a symmetric Beta(shape,
/// shape) stretched to the same support.
struct ErrorDist {
    enum class Kind { uniform, scaled_beta };
    Kind kind = Kind::uniform;
    double half_width = 0.1;
    double beta_shape = 1.0;  // used by scaled_beta only; must be >= 1

    double variance() const;
};

/// lambda = lambda_hat * prod_i (1 + eps_i) with eps_i drawn from the given
/// per-layer distributions.
std::vector<double> sample_precision_chain(double lambda_hat,
                                           std::span<const ErrorDist> errors,
                                           const SimConfig& cfg);

/// Two-stage compound draw: lambda ~ Lognormal(0, S^2), then
/// x ~ Normal(0, 1/sqrt(lambda)).
std::vector<double> sample_cnl(double s2, const SimConfig& cfg);

/// Tail probability estimate with standard error.
struct TailEstimate {
    double probability;
    double std_error;
};

/// P(X >= k) for the layered mixture, by stratifying over the mixture
/// components and exponentially tilting the proposal inside each stratum
/// whose threshold sits above its mean. Unbiased; usable out to thresholds
/// where naive counting sees no hits.
TailEstimate estimate_exceedance(const GaussianSpec& base,
                                 const ErrorSchedule& schedule, double k,
                                 const SimConfig& cfg);

/// Sample moments with delta-method standard errors (plug-in central
/// moments up to order eight).
struct SampleSummary {
    std::size_t count;
    double mean;
    double variance;
    double skewness;
    double excess_kurtosis;
    double se_mean;
    double se_variance;
    double se_skewness;
    double se_excess_kurtosis;
};

SampleSummary summarize(std::span<const double> xs);

}  // namespace epitail
