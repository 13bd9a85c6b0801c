#include "epitail/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "epitail/errors.hpp"

namespace epitail {

namespace {

constexpr int kEnumerationCap = 30;

void check_layer(const ErrorLayer& layer) {
    if (!(layer.epsilon >= 0.0) || !(layer.epsilon < 1.0))
        throw std::invalid_argument("ErrorSchedule: epsilon must lie in [0, 1)");
    if (!(layer.p >= 0.0) || !(layer.p <= 1.0))
        throw std::invalid_argument("ErrorSchedule: p must lie in [0, 1]");
}

}  // namespace

ErrorSchedule::ErrorSchedule(std::vector<ErrorLayer> layers)
    : layers_(std::move(layers)) {
    for (const ErrorLayer& layer : layers_) check_layer(layer);
}

ErrorSchedule ErrorSchedule::constant(double epsilon, int n, double p) {
    if (n < 0) throw std::invalid_argument("ErrorSchedule: n must be >= 0");
    return ErrorSchedule(std::vector<ErrorLayer>(n, ErrorLayer{epsilon, p}));
}

ErrorSchedule ErrorSchedule::geometric(double epsilon1, double kappa, int n,
                                       double p) {
    if (n < 0) throw std::invalid_argument("ErrorSchedule: n must be >= 0");
    if (!(kappa >= 0.0) || !(kappa <= 1.0))
        throw std::invalid_argument("ErrorSchedule: kappa must lie in [0, 1]");
    std::vector<ErrorLayer> layers;
    layers.reserve(n);
    double eps = epsilon1;
    for (int i = 0; i < n; ++i) {
        layers.push_back(ErrorLayer{eps, p});
        eps *= kappa;
    }
    return ErrorSchedule(std::move(layers));
}

bool ErrorSchedule::is_constant() const {
    if (layers_.empty()) return true;
    const ErrorLayer& first = layers_.front();
    return std::all_of(layers_.begin(), layers_.end(), [&](const ErrorLayer& l) {
        return l.epsilon == first.epsilon && l.p == first.p;
    });
}

std::vector<std::vector<int>> sign_matrix(int n) {
    if (n < 0) throw std::invalid_argument("sign_matrix: n must be >= 0");
    if (n > kEnumerationCap)
        throw CapacityError("sign_matrix: 2^n rows exceed the enumeration cap (n <= 30)");
    const std::uint64_t rows = std::uint64_t{1} << n;
    std::vector<std::vector<int>> out(rows, std::vector<int>(n));
    for (std::uint64_t i = 0; i < rows; ++i)
        for (int j = 0; j < n; ++j)
            out[i][j] = ((i >> (n - 1 - j)) & 1u) ? +1 : -1;
    return out;
}

std::vector<WeightedMultiplier> enumerate_multipliers(const ErrorSchedule& schedule) {
    const int n = schedule.size();
    if (n > kEnumerationCap)
        throw CapacityError("enumerate_multipliers: 2^n branches exceed the cap (n <= 30); "
                            "use binomial_multipliers or the sampler");
    const std::uint64_t rows = std::uint64_t{1} << n;
    std::vector<WeightedMultiplier> out(rows);
    const auto& layers = schedule.layers();
    for (std::uint64_t i = 0; i < rows; ++i) {
        double mult = 1.0;
        double weight = 1.0;
        for (int j = 0; j < n; ++j) {
            const bool up = ((i >> (n - 1 - j)) & 1u) != 0;
            mult *= up ? (1.0 + layers[j].epsilon) : (1.0 - layers[j].epsilon);
            weight *= up ? layers[j].p : (1.0 - layers[j].p);
        }
        out[i] = WeightedMultiplier{weight, mult};
    }
    return out;
}

std::vector<WeightedMultiplier> binomial_multipliers(double epsilon, int n, double p) {
    if (!(epsilon >= 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("binomial_multipliers: epsilon must lie in [0, 1)");
    if (n < 0) throw std::invalid_argument("binomial_multipliers: n must be >= 0");
    if (!(p >= 0.0) || !(p <= 1.0))
        throw std::invalid_argument("binomial_multipliers: p must lie in [0, 1]");

    std::vector<WeightedMultiplier> out(n + 1);
    for (int j = 0; j <= n; ++j) {
        double w;
        if (n <= 60) {
            double binom = 1.0;  // C(n,j) by the multiplicative recurrence
            for (int i = 0; i < j; ++i) binom = binom * (n - i) / (i + 1);
            w = binom * std::pow(p, j) * std::pow(1.0 - p, n - j);
            if (p == 0.0) w = (j == 0) ? 1.0 : 0.0;
            if (p == 1.0) w = (j == n) ? 1.0 : 0.0;
        } else {
            if ((p == 0.0 && j > 0) || (p == 1.0 && j < n)) {
                w = 0.0;
            } else {
                double lw = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                            std::lgamma(n - j + 1.0);
                if (p > 0.0) lw += j * std::log(p);
                if (p < 1.0) lw += (n - j) * std::log1p(-p);
                w = std::exp(lw);
            }
        }
        const double mult = std::pow(1.0 + epsilon, j) * std::pow(1.0 - epsilon, n - j);
        out[j] = WeightedMultiplier{w, mult};
    }
    return out;
}

std::vector<WeightedMultiplier> aggregate_multipliers(
    std::vector<WeightedMultiplier> pairs, double rel_tol) {
    if (pairs.empty()) return pairs;
    std::sort(pairs.begin(), pairs.end(),
              [](const WeightedMultiplier& a, const WeightedMultiplier& b) {
                  return a.multiplier < b.multiplier;
              });
    std::vector<WeightedMultiplier> out;
    out.push_back(pairs.front());
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        WeightedMultiplier& last = out.back();
        const double scale = std::max(std::fabs(last.multiplier),
                                      std::fabs(pairs[i].multiplier));
        if (std::fabs(pairs[i].multiplier - last.multiplier) <= rel_tol * scale) {
            // Weighted mean keeps the representative inside the group.
            const double w = last.weight + pairs[i].weight;
            if (w > 0.0)
                last.multiplier = (last.weight * last.multiplier +
                                   pairs[i].weight * pairs[i].multiplier) / w;
            last.weight = w;
        } else {
            out.push_back(pairs[i]);
        }
    }
    return out;
}

ScaleMixture::ScaleMixture(double mu, std::vector<Component> components)
    : mu_(mu), components_(std::move(components)) {
    if (!std::isfinite(mu_))
        throw std::invalid_argument("ScaleMixture: mu must be finite");
    if (components_.empty())
        throw std::invalid_argument("ScaleMixture: needs at least one component");
    // Kahan summation: a million 2^-20-sized weights would otherwise pick up
    // more rounding than the 1e-12 invariant allows.
    double total = 0.0, comp = 0.0;
    for (const Component& c : components_) {
        if (!(c.scale > 0.0) || !std::isfinite(c.scale))
            throw std::invalid_argument("ScaleMixture: scales must be positive");
        if (!(c.weight > 0.0) || !(c.weight <= 1.0))
            throw std::invalid_argument("ScaleMixture: weights must lie in (0, 1]");
        const double y = c.weight - comp;
        const double t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw std::invalid_argument("ScaleMixture: weights must sum to 1 within 1e-12");
}

ScaleMixture mixture_from(const GaussianSpec& base, const ErrorSchedule& schedule) {
    std::vector<WeightedMultiplier> branches;
    if (schedule.is_constant()) {
        const int n = schedule.size();
        const double eps = n > 0 ? schedule.layers().front().epsilon : 0.0;
        const double p = n > 0 ? schedule.layers().front().p : 0.5;
        branches = binomial_multipliers(eps, n, p);
    } else {
        branches = enumerate_multipliers(schedule);
    }
    std::vector<ScaleMixture::Component> comps;
    comps.reserve(branches.size());
    for (const WeightedMultiplier& b : branches)
        if (b.weight > 0.0)
            comps.push_back({b.weight, base.sigma * b.multiplier});
    return ScaleMixture(base.mu, std::move(comps));
}

double density(const ScaleMixture& mix, double x) {
    double total = 0.0;
    for (const auto& c : mix.components())
        total += c.weight * normal_pdf(x, mix.mu(), c.scale);
    return total;
}

std::vector<std::pair<double, double>> log_density_curve(
    const ScaleMixture& mix, std::span<const double> x_grid) {
    if (x_grid.empty())
        throw std::invalid_argument("log_density_curve: grid must be nonempty");
    std::vector<std::pair<double, double>> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        const double g = density(mix, x);
        const double lg = g > 0.0 ? std::log(g)
                                  : -std::numeric_limits<double>::infinity();
        out.emplace_back(x, lg);
    }
    return out;
}

}  // namespace epitail
