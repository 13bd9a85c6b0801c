#include "epitail/tail_risk.hpp"

#include <cmath>
#include <stdexcept>

namespace epitail {

double exceedance(const TailQuery& query) {
    if (!(query.epsilon >= 0.0) || !(query.epsilon < 1.0))
        throw std::invalid_argument("exceedance: epsilon must lie in [0, 1)");
    if (query.n < 0) throw std::invalid_argument("exceedance: n must be >= 0");

    const double k = query.k - query.base.mu;
    const double sigma = query.base.sigma;
    const double eps = query.epsilon;
    const int n = query.n;
    const double sqrt2 = std::sqrt(2.0);

    // All multipliers collapse to 1, so the sum is exactly the baseline
    // half-erfc; taking this path keeps eps = 0 ratios identically 1.
    if (eps == 0.0 || n == 0)
        return 0.5 * epitail::erfc(k / (sqrt2 * sigma));

    double total = 0.0;
    if (n <= 60) {
        double weight = std::ldexp(1.0, -n - 1);  // 2^(-n-1) * C(n,0)
        for (int j = 0; j <= n; ++j) {
            const double mult = std::pow(1.0 + eps, j) * std::pow(1.0 - eps, n - j);
            total += weight * epitail::erfc(k / (sqrt2 * sigma * mult));
            weight = weight * (n - j) / (j + 1.0);  // advance the binomial factor
        }
    } else {
        // 2^(-n-1) underflows long before the weights stop mattering,
        // so large n goes through log space.
        const double log_half = -(n + 1.0) * std::log(2.0);
        for (int j = 0; j <= n; ++j) {
            const double lw = log_half + std::lgamma(n + 1.0) -
                              std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
            const double log_mult =
                j * std::log1p(eps) + (n - j) * std::log1p(-eps);
            total += std::exp(lw) *
                     epitail::erfc(k / (sqrt2 * sigma * std::exp(log_mult)));
        }
    }
    return total;
}

RatioTable ratio_table(std::span<const int> n_values,
                       std::span<const double> k_values, double epsilon,
                       const GaussianSpec& base) {
    RatioTable table;
    table.n_values.assign(n_values.begin(), n_values.end());
    table.k_values.assign(k_values.begin(), k_values.end());
    table.cells.resize(n_values.size());
    for (std::size_t r = 0; r < n_values.size(); ++r) {
        table.cells[r].resize(k_values.size());
        for (std::size_t c = 0; c < k_values.size(); ++c) {
            const double num =
                exceedance(TailQuery{k_values[c], n_values[r], epsilon, base});
            const double den = exceedance(TailQuery{k_values[c], 0, 0.0, base});
            table.cells[r][c] = num / den;
        }
    }
    return table;
}

}  // namespace epitail
