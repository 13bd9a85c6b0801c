#include "epitail/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace epitail {

namespace {

// Coefficients from W. J. Cody, "Rational Chebyshev approximation for the
// error function", Math. Comp. 23 (1969), as distributed in netlib/specfun.
constexpr double kA[5] = {3.1611237438705656, 113.864154151050156,
                          377.485237685302021, 3209.37758913846947,
                          0.185777706184603153};
constexpr double kB[4] = {23.6012909523441209, 244.024637934444173,
                          1282.61652607737228, 2844.23683343917062};
constexpr double kC[9] = {0.564188496988670089, 8.88314979438837594,
                          66.1191906371416295,  298.635138197400131,
                          881.95222124176909,   1712.04761263407058,
                          2051.07837782607147,  1230.33935479799725,
                          2.15311535474403846e-8};
constexpr double kD[8] = {15.7449261107098347, 117.693950891312499,
                          537.181101862009858, 1621.38957456669019,
                          3290.79923573345963, 4362.61909014324716,
                          3439.36767414372164, 1230.33935480374942};
constexpr double kP[6] = {0.305326634961232344, 0.360344899949804439,
                          0.125781726111229246, 0.0160837851487422766,
                          6.58749161529837803e-4, 0.0163153871373020978};
constexpr double kQ[5] = {2.56852019228982242, 1.87295284992346047,
                          0.527905102951428412, 0.0605183413124413191,
                          0.00233520497626869185};

constexpr double kSqrtPiInv = 0.56418958354775628695;  // 1/sqrt(pi)
constexpr double kThresh = 0.46875;
constexpr double kXSmall = 1.11e-16;
constexpr double kXBig = 26.543;    // erfc underflows past this
constexpr double kXHuge = 6.71e7;   // 1 - 1/(2x^2) == 1 beyond this
constexpr double kXMax = 2.53e307;  // erfcx overflows below -sqrt(log(XINF/2))

// erf(x) for |x| <= 0.46875.
double erf_small(double x) {
    const double y = std::fabs(x);
    double ysq = 0.0;
    if (y > kXSmall) ysq = y * y;
    double xnum = kA[4] * ysq;
    double xden = ysq;
    for (int i = 0; i < 3; ++i) {
        xnum = (xnum + kA[i]) * ysq;
        xden = (xden + kB[i]) * ysq;
    }
    return x * (xnum + kA[3]) / (xden + kB[3]);
}

// exp(x^2) * erfc(x) for 0.46875 < x <= 4.
double erfcx_mid(double x) {
    double xnum = kC[8] * x;
    double xden = x;
    for (int i = 0; i < 7; ++i) {
        xnum = (xnum + kC[i]) * x;
        xden = (xden + kD[i]) * x;
    }
    return (xnum + kC[7]) / (xden + kD[7]);
}

// exp(x^2) * erfc(x) for x > 4.
double erfcx_large(double x) {
    if (x >= kXHuge) return kSqrtPiInv / x;
    const double ysq = 1.0 / (x * x);
    double xnum = kP[5] * ysq;
    double xden = ysq;
    for (int i = 0; i < 4; ++i) {
        xnum = (xnum + kP[i]) * ysq;
        xden = (xden + kQ[i]) * ysq;
    }
    double r = ysq * (xnum + kP[4]) / (xden + kQ[4]);
    return (kSqrtPiInv - r) / x;
}

// exp(-x^2) computed as exp(-k^2)*exp(-d) with k = round(16x)/16 so the
// argument reduction keeps the tail relatively accurate (Cody's trick).
double exp_neg_xsq(double x) {
    const double k = std::trunc(x * 16.0) / 16.0;
    const double del = (x - k) * (x + k);
    return std::exp(-k * k) * std::exp(-del);
}

}  // namespace

double erf(double z) {
    const double y = std::fabs(z);
    if (y <= kThresh) return erf_small(z);
    double r;
    if (y <= 4.0)
        r = 1.0 - exp_neg_xsq(y) * erfcx_mid(y);
    else if (y < kXBig)
        r = 1.0 - exp_neg_xsq(y) * erfcx_large(y);
    else
        r = 1.0;
    return z < 0.0 ? -r : r;
}

double erfc(double z) {
    const double y = std::fabs(z);
    double r;
    if (y <= kThresh) {
        r = 1.0 - erf_small(y);
    } else if (y <= 4.0) {
        r = exp_neg_xsq(y) * erfcx_mid(y);
    } else if (y < kXBig + 2.0) {
        r = exp_neg_xsq(y) * erfcx_large(y);  // subnormal near the edge
    } else {
        r = 0.0;
    }
    return z < 0.0 ? 2.0 - r : r;
}

double erfcx(double z) {
    if (z >= 0.0) {
        if (z <= kThresh) return std::exp(z * z) * (1.0 - erf_small(z));
        if (z <= 4.0) return erfcx_mid(z);
        return erfcx_large(z);
    }
    if (z < -26.628) return kXMax;  // 2*exp(z^2) overflows; saturate like specfun
    return 2.0 * std::exp(z * z) - erfcx(-z);
}

namespace {

// Lower incomplete gamma by series: P(a,x) = x^a e^-x / Gamma(a) * sum.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_p_series: no convergence");
}

}  // namespace

double upper_gamma_cf(double a, double x) {
    // Modified Lentz on the standard continued fraction for Gamma(a,x).
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 10000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < eps) return h;
    }
    throw std::runtime_error("upper_gamma_cf: no convergence");
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0)
        throw std::invalid_argument("regularized_gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    const double lg = -x + a * std::log(x) - std::lgamma(a);
    return std::exp(lg) * upper_gamma_cf(a, x);
}

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0)
        throw std::invalid_argument("regularized_gamma_p: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - regularized_gamma_q(a, x);
}

double log_upper_gamma(double a, double x) {
    if (!(a > 0.0) || x < 0.0)
        throw std::invalid_argument("log_upper_gamma: need a > 0, x >= 0");
    if (x == 0.0) return std::lgamma(a);
    if (x < a + 1.0) {
        const double q = 1.0 - gamma_p_series(a, x);
        return std::lgamma(a) + std::log(q);
    }
    return -x + a * std::log(x) + std::log(upper_gamma_cf(a, x));
}

}  // namespace epitail
