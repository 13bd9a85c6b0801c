#pragma once

#include <cmath>
#include <stdexcept>

namespace epitail {

/// Baseline Normal law by location and scale. The uncertainty-free
/// starting point everything else perturbs.
struct GaussianSpec {
    double mu = 0.0;
    double sigma = 1.0;

    GaussianSpec() = default;

    GaussianSpec(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
        if (!std::isfinite(mu) || !std::isfinite(sigma))
            throw std::invalid_argument("GaussianSpec: parameters must be finite");
        if (sigma <= 0.0)
            throw std::invalid_argument("GaussianSpec: sigma must be > 0");
    }
};

/// Normal pdf evaluated directly as exp(-z^2/2) / (s * sqrt(2*pi)).
inline double normal_pdf(double x, double mu, double sigma) {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779;
    const double z = (x - mu) / sigma;
    return inv_sqrt_2pi / sigma * std::exp(-0.5 * z * z);
}

}  // namespace epitail
