#include "epitail/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace epitail {

namespace {

// Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL
// (diagonal d, subdiagonal e), eigenvalues returned sorted ascending.
std::vector<double> tridiag_eigenvalues(std::vector<double> d,
                                        std::vector<double> e) {
    const int n = static_cast<int>(d.size());
    e.resize(n, 0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 2.3e-16 * dd + 1e-300) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw std::runtime_error("tridiag_eigenvalues: no convergence");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (i >= l) continue;  // underflow restart
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

// Orthonormal Hermite values (weight e^{-x^2}) with periodic rescaling so
// nothing overflows even at the extreme nodes of a 1024-point rule. Returns
// p_n, p_{n-1} scaled by 2^(-540*rescales).
struct ScaledHermite {
    double p_n;
    double p_nm1;
    int rescales;
};

ScaledHermite hermite_orthonormal(int n, double z) {
    constexpr double big = 0x1p540;
    constexpr double inv_big = 0x1p-540;
    double prev = 0.0;                  // p_{j-1}
    double cur = 0.7511255444649425;    // p_0 = pi^(-1/4)
    int rescales = 0;
    for (int j = 1; j <= n; ++j) {
        const double next =
            z * std::sqrt(2.0 / j) * cur - std::sqrt((j - 1.0) / j) * prev;
        prev = cur;
        cur = next;
        if (std::fabs(cur) > big) {
            cur *= inv_big;
            prev *= inv_big;
            ++rescales;
        }
    }
    return {cur, prev, rescales};
}

// Golub-Welsch nodes (Jacobi eigenvalues, subdiagonal sqrt(k/2)) with a
// Newton polish, weights from the scaled recurrence.
QuadratureRule compute_gauss_hermite(int n) {
    std::vector<double> diag(n, 0.0);
    std::vector<double> sub(n - 1);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
    const std::vector<double> eig = tridiag_eigenvalues(diag, sub);

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = (n + 1) / 2; i < n; ++i) {
        double z = eig[i];
        ScaledHermite h{};
        for (int it = 0; it < 8; ++it) {
            h = hermite_orthonormal(n, z);
            const double pp = std::sqrt(2.0 * n) * h.p_nm1;
            const double dz = h.p_n / pp;  // scale factors cancel
            z -= dz;
            if (std::fabs(dz) < 1e-15 * std::max(1.0, std::fabs(z))) {
                h = hermite_orthonormal(n, z);
                break;
            }
        }
        const double pp_scaled = std::sqrt(2.0 * n) * h.p_nm1;
        // w = 2/pp^2 with pp = pp_scaled * 2^(540*rescales); far-out nodes
        // legitimately underflow to zero weight.
        const double w =
            std::ldexp(2.0 / (pp_scaled * pp_scaled), -1080 * h.rescales);
        rule.nodes[i] = z;
        rule.nodes[n - 1 - i] = -z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
        const ScaledHermite h = hermite_orthonormal(n, 0.0);
        const double pp_scaled = std::sqrt(2.0 * n) * h.p_nm1;
        rule.weights[n / 2] =
            std::ldexp(2.0 / (pp_scaled * pp_scaled), -1080 * h.rescales);
    }
    return rule;
}

QuadratureRule compute_gauss_legendre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

template <typename F>
const QuadratureRule& cached_rule(int n, std::map<int, std::unique_ptr<QuadratureRule>>& cache,
                                  std::mutex& mu, F&& compute) {
    if (n < 1) throw std::invalid_argument("quadrature: rule size must be >= 1");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::make_unique<QuadratureRule>(compute(n))).first;
    return *it->second;
}

}  // namespace

const QuadratureRule& gauss_hermite(int n) {
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    static std::mutex mu;
    return cached_rule(n, cache, mu, compute_gauss_hermite);
}

const QuadratureRule& gauss_legendre(int n) {
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    static std::mutex mu;
    return cached_rule(n, cache, mu, compute_gauss_legendre);
}

double integrate_panels(const std::function<double(double)>& f, double a,
                        double b, int panels, int points) {
    const QuadratureRule& rule = gauss_legendre(points);
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        total += acc * 0.5 * h;
    }
    return total;
}

double integrate_graded(const std::function<double(double)>& f, double a,
                        double b, double first_width, double growth,
                        int points) {
    if (!(first_width > 0.0) || !(growth > 1.0))
        throw std::invalid_argument("integrate_graded: bad panel parameters");
    const QuadratureRule& rule = gauss_legendre(points);
    double total = 0.0;
    double lo = a;
    double w = first_width;
    while (lo < b) {
        const double hi = std::min(lo + w, b);
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
        total += acc * half;
        lo = hi;
        w *= growth;
    }
    return total;
}

}  // namespace epitail
