#pragma once

#include <functional>
#include <vector>

namespace epitail {

/// Nodes and weights of an n-point rule.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Hermite rule for integrals of f(t) exp(-t^2) over the real line.
/// Computed once per n and cached; thread-safe.
const QuadratureRule& gauss_hermite(int n);

/// Gauss-Legendre rule on [-1, 1], cached.
const QuadratureRule& gauss_legendre(int n);

/// Composite Gauss-Legendre integral of f over [a, b] split into `panels`
/// equal panels of `points` nodes each.
double integrate_panels(const std::function<double(double)>& f, double a,
                        double b, int panels, int points = 24);

/// Composite Gauss-Legendre integral over [a, b] with geometrically growing
/// panel widths, starting at `first_width` from the left endpoint. Suited to
/// integrands with sharp structure near `a` and slow decay to the right.
double integrate_graded(const std::function<double(double)>& f, double a,
                        double b, double first_width, double growth = 1.4,
                        int points = 24);

}  // namespace epitail
