#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "epitail/gaussian.hpp"

namespace epitail {

/// One layer of dichotomic scale perturbation: the scale is multiplied by
/// (1 + epsilon) with probability p and by (1 - epsilon) with 1 - p.
struct ErrorLayer {
    double epsilon = 0.0;
    double p = 0.5;
};

/// Ordered per-layer error rates. n = 0 (no layers) means no uncertainty.
class ErrorSchedule {
public:
    ErrorSchedule() = default;
    explicit ErrorSchedule(std::vector<ErrorLayer> layers);

    /// n identical layers with rate epsilon and up-probability p.
    static ErrorSchedule constant(double epsilon, int n, double p = 0.5);

    /// Geometric decay: epsilon_i = kappa^(i-1) * epsilon1, i = 1..n.
    static ErrorSchedule geometric(double epsilon1, double kappa, int n,
                                   double p = 0.5);

    int size() const { return static_cast<int>(layers_.size()); }
    const std::vector<ErrorLayer>& layers() const { return layers_; }

    /// True when every layer shares one epsilon and one p, so the 2^n tree
    /// collapses to a binomial one. Vacuously true for n = 0.
    bool is_constant() const;

private:
    std::vector<ErrorLayer> layers_;
};

/// Weighted scale multiplier: one branch (or branch group) of the tree.
struct WeightedMultiplier {
    double weight = 0.0;
    double multiplier = 1.0;
};

/// All 2^n sign tuples over {-1,+1}, ordered from all -1 (index 0, full
/// underestimation) to all +1. Row i column j holds the sign applied to
/// layer j+1.
std::vector<std::vector<int>> sign_matrix(int n);

/// The full branch expansion: 2^n (weight, multiplier) pairs in sign_matrix
/// order, with multiplier_i = prod_j (1 + eps_j * T_ij) accumulated in layer
/// order and weight_i the matching product of p_j / (1-p_j).
/// Throws CapacityError for n > 30.
std::vector<WeightedMultiplier> enumerate_multipliers(const ErrorSchedule& schedule);

/// Binomial collapse for a constant schedule: n+1 pairs with
/// weight_j = C(n,j) p^j (1-p)^(n-j) and multiplier_j = (1+eps)^j (1-eps)^(n-j),
/// ordered by ascending j.
std::vector<WeightedMultiplier> binomial_multipliers(double epsilon, int n,
                                                     double p = 0.5);

/// Merge entries whose multipliers agree within `rel_tol` (after sorting).
/// Branches carrying the same factor multiset can differ in the last few
/// ulps, so grouping needs a tolerance; 1e-12 sits far above that spread
/// and far below the 2*eps gap between genuinely distinct multipliers.
std::vector<WeightedMultiplier> aggregate_multipliers(
    std::vector<WeightedMultiplier> pairs, double rel_tol = 1e-12);

/// Finite scale mixture of Normals sharing one location.
class ScaleMixture {
public:
    struct Component {
        double weight;
        double scale;
    };

    ScaleMixture(double mu, std::vector<Component> components);

    double mu() const { return mu_; }
    const std::vector<Component>& components() const { return components_; }
    std::size_t count() const { return components_.size(); }

private:
    double mu_;
    std::vector<Component> components_;
};

/// Materialize the mixture for a base law and a schedule. Constant schedules
/// take the binomial path (n+1 components); general schedules enumerate.
ScaleMixture mixture_from(const GaussianSpec& base, const ErrorSchedule& schedule);

/// Mixture pdf: sum_i w_i phi(x; mu, s_i).
double density(const ScaleMixture& mix, double x);

/// Pointwise log density over a grid. Where the density underflows to zero
/// the entry is -infinity.
std::vector<std::pair<double, double>> log_density_curve(
    const ScaleMixture& mix, std::span<const double> x_grid);

}  // namespace epitail
