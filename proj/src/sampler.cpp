#include "epitail/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace epitail {

namespace {

constexpr std::size_t kChunk = 1u << 16;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t chunk) {
    // Combine the key words, then expand into the state via a splitmix chain.
    std::uint64_t key = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t w : {seed, stream, chunk}) {
        key ^= w + 0x9e3779b97f4a7c15ULL + (key << 6) + (key >> 2);
        key = splitmix64(key);
    }
    bool nonzero = false;
    for (auto& word : state_) {
        word = splitmix64(key);
        nonzero |= word != 0;
    }
    if (!nonzero) state_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::next_unit() {
    return ((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::next_normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

double RngStream::next_gamma(double shape) {
    if (!(shape >= 1.0))
        throw std::invalid_argument("RngStream::next_gamma: shape must be >= 1");
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = next_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = next_unit();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

namespace {

// Runs `fill(rng, first, count)` over fixed-size chunks; chunk c of the
// logical stream always sees the same generator state regardless of how the
// chunks are scheduled.
template <typename Fill>
std::vector<double> chunked(const SimConfig& cfg, Fill&& fill) {
    std::vector<double> out(cfg.samples);
    const std::size_t chunks = (cfg.samples + kChunk - 1) / kChunk;
    for (std::size_t c = 0; c < chunks; ++c) {
        RngStream rng(cfg.seed, cfg.stream_id, c);
        const std::size_t first = c * kChunk;
        const std::size_t count = std::min(kChunk, cfg.samples - first);
        fill(rng, out.data() + first, count);
    }
    return out;
}

}  // namespace

std::vector<double> sample_layered(const GaussianSpec& base,
                                   const ErrorSchedule& schedule,
                                   const SimConfig& cfg) {
    const auto& layers = schedule.layers();
    return chunked(cfg, [&](RngStream& rng, double* dst, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            double scale = base.sigma;
            for (const ErrorLayer& layer : layers) {
                const bool up = rng.next_unit() <= layer.p;
                scale *= up ? 1.0 + layer.epsilon : 1.0 - layer.epsilon;
            }
            dst[i] = base.mu + scale * rng.next_normal();
        }
    });
}

double ErrorDist::variance() const {
    switch (kind) {
        case Kind::uniform:
            return half_width * half_width / 3.0;
        case Kind::scaled_beta:
            // eps = half_width * (2B - 1), B ~ Beta(a, a).
            return half_width * half_width / (2.0 * beta_shape + 1.0);
    }
    return 0.0;
}

std::vector<double> sample_precision_chain(double lambda_hat,
                                           std::span<const ErrorDist> errors,
                                           const SimConfig& cfg) {
    if (!(lambda_hat > 0.0))
        throw std::invalid_argument("sample_precision_chain: lambda_hat must be > 0");
    for (const ErrorDist& e : errors) {
        // half_width 0 is the degenerate error, allowed.
        if (!(e.half_width >= 0.0) || !(e.half_width < 1.0))
            throw std::invalid_argument(
                "sample_precision_chain: half_width must lie in [0, 1)");
        if (e.kind == ErrorDist::Kind::scaled_beta && !(e.beta_shape >= 1.0))
            throw std::invalid_argument(
                "sample_precision_chain: beta_shape must be >= 1");
    }
    return chunked(cfg, [&](RngStream& rng, double* dst, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            double lambda = lambda_hat;
            for (const ErrorDist& e : errors) {
                double eps;
                if (e.kind == ErrorDist::Kind::uniform) {
                    eps = e.half_width * (2.0 * rng.next_unit() - 1.0);
                } else {
                    const double g1 = rng.next_gamma(e.beta_shape);
                    const double g2 = rng.next_gamma(e.beta_shape);
                    eps = e.half_width * (2.0 * g1 / (g1 + g2) - 1.0);
                }
                lambda *= 1.0 + eps;
            }
            dst[i] = lambda;
        }
    });
}

std::vector<double> sample_cnl(double s2, const SimConfig& cfg) {
    if (!(s2 > 0.0))
        throw std::invalid_argument("sample_cnl: S^2 must be > 0");
    const double s = std::sqrt(s2);
    return chunked(cfg, [&](RngStream& rng, double* dst, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            const double u = s * rng.next_normal();  // log lambda
            dst[i] = rng.next_normal() * std::exp(-0.5 * u);
        }
    });
}

TailEstimate estimate_exceedance(const GaussianSpec& base,
                                 const ErrorSchedule& schedule, double k,
                                 const SimConfig& cfg) {
    if (cfg.samples == 0)
        throw std::invalid_argument("estimate_exceedance: needs samples > 0");
    const ScaleMixture mix = mixture_from(base, schedule);
    const auto& comps = mix.components();
    const std::size_t m = comps.size();

    // Largest-remainder allocation proportional to the component weights,
    // with at least one draw per component.
    std::vector<std::size_t> alloc(m, 1);
    std::size_t assigned = m;
    if (cfg.samples > m) {
        std::vector<std::pair<double, std::size_t>> rema(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double share = comps[j].weight * (cfg.samples - m);
            alloc[j] += static_cast<std::size_t>(share);
            assigned += static_cast<std::size_t>(share);
            rema[j] = {share - std::floor(share), j};
        }
        std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        for (std::size_t i = 0; assigned < cfg.samples; ++i, ++assigned)
            alloc[rema[i % m].second] += 1;
    }

    double estimate = 0.0;
    double variance = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double s = comps[j].scale;
        const double t = k - mix.mu();  // threshold for the centered component
        const std::size_t nj = alloc[j];
        double sum = 0.0, sumsq = 0.0;
        const bool tilt = t > 0.1 * s;
        const std::size_t chunks = (nj + kChunk - 1) / kChunk;
        for (std::size_t c = 0; c < chunks; ++c) {
            // Chunk space partitioned per component so streams never collide.
            RngStream rng(cfg.seed, cfg.stream_id,
                          (static_cast<std::uint64_t>(j) << 32) | c);
            const std::size_t count = std::min(kChunk, nj - c * kChunk);
            for (std::size_t i = 0; i < count; ++i) {
                double value;
                if (tilt) {
                    // Proposal N(t, s^2); importance weight
                    // phi_0(y)/phi_t(y) = exp((t^2 - 2ty)/(2s^2)).
                    const double y = t + s * rng.next_normal();
                    value = y >= t
                                ? std::exp((t * t - 2.0 * t * y) / (2.0 * s * s))
                                : 0.0;
                } else {
                    value = (s * rng.next_normal() >= t) ? 1.0 : 0.0;
                }
                sum += value;
                sumsq += value * value;
            }
        }
        const double mean_j = sum / nj;
        const double var_j =
            nj > 1 ? (sumsq - nj * mean_j * mean_j) / (nj - 1.0) : 0.0;
        estimate += comps[j].weight * mean_j;
        variance += comps[j].weight * comps[j].weight * var_j / nj;
    }
    return TailEstimate{estimate, std::sqrt(std::max(0.0, variance))};
}

SampleSummary summarize(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) throw std::invalid_argument("summarize: needs at least 2 samples");
    const double nn = static_cast<double>(n);

    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= nn;

    double m2 = 0, m3 = 0, m4 = 0, m5 = 0, m6 = 0, m8 = 0;
    for (double x : xs) {
        const double d = x - mean;
        const double d2 = d * d;
        const double d4 = d2 * d2;
        m2 += d2;
        m3 += d2 * d;
        m4 += d4;
        m5 += d4 * d;
        m6 += d4 * d2;
        m8 += d4 * d4;
    }
    m2 /= nn; m3 /= nn; m4 /= nn; m5 /= nn; m6 /= nn; m8 /= nn;

    SampleSummary s{};
    s.count = n;
    s.mean = mean;
    s.variance = m2;
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    s.se_mean = std::sqrt(m2 / nn);
    s.se_variance = std::sqrt(std::max(0.0, m4 - m2 * m2) / nn);

    // Delta method for b1 = c3/c2^(3/2) and b2 = c4/c2^2 with sample-centered
    // moments; the linearizations are
    //   b1: T = m3 - 3 mu2 m1 - (3/2)(mu3/mu2) m2
    //   b2: T = m4 - 4 mu3 m1 - 2 (mu4/mu2) m2
    // and Cov(m_j, m_k) = (mu_{j+k} - mu_j mu_k)/N. Both reduce to the
    // classical 6/N and 24/N at the Normal.
    {
        const double a = 3.0 * m2;
        const double b = 1.5 * m3 / m2;
        const double var_t = (m6 - m3 * m3) + a * a * m2 + b * b * (m4 - m2 * m2) -
                             2.0 * a * m4 - 2.0 * b * (m5 - m2 * m3) +
                             2.0 * a * b * m3;
        s.se_skewness =
            std::sqrt(std::max(0.0, var_t) / (nn * m2 * m2 * m2));
    }
    {
        const double a = 4.0 * m3;
        const double b = 2.0 * m4 / m2;
        const double var_t = (m8 - m4 * m4) + a * a * m2 + b * b * (m4 - m2 * m2) -
                             2.0 * a * m5 - 2.0 * b * (m6 - m2 * m4) +
                             2.0 * a * b * m3;
        s.se_excess_kurtosis =
            std::sqrt(std::max(0.0, var_t) / (nn * m2 * m2 * m2 * m2));
    }
    return s;
}

}  // namespace epitail
