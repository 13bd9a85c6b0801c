#pragma once

#include <span>
#include <vector>

#include "epitail/gaussian.hpp"
#include "epitail/special.hpp"

namespace epitail {

/// Threshold query against the layered mixture with constant error rate.
struct TailQuery {
    double k = 0.0;       // threshold, same units as x
    int n = 0;            // uncertainty layers
    double epsilon = 0.0; // constant error rate
    GaussianSpec base{};
};

/// P(X >= K) for the n-layer constant-rate mixture:
///   sum_j 2^(-n-1) C(n,j) erfc( (K-mu) / (sqrt(2) sigma (1+eps)^j (1-eps)^(n-j)) ).
/// mu != 0 is handled by translating the threshold.
double exceedance(const TailQuery& query);

/// Ratios of mixture exceedance over the uncertainty-free Normal baseline,
/// cell(n, K) = P_n(X >= K) / P_0(X >= K).
struct RatioTable {
    std::vector<int> n_values;
    std::vector<double> k_values;
    std::vector<std::vector<double>> cells;  // cells[row][col], rows follow n_values
};

RatioTable ratio_table(std::span<const int> n_values,
                       std::span<const double> k_values, double epsilon,
                       const GaussianSpec& base);

}  // namespace epitail
