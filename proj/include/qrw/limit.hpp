#pragma once

// Weak limit of X_n / n and the Jacobi-polynomial identities behind it.
//
// For abcd != 0 the rescaled walk converges to a law on (-|a|, |a|) with
//
//   f(x) = sqrt(1 - |a|^2) / (pi (1 - x^2) sqrt(|a|^2 - x^2)) * (1 - skew x),
//   skew = |alpha|^2 - |beta|^2 + Theta_j / |a|^2.
//
// Integrals substitute x = |a| sin t, which cancels the inverse square-root
// endpoint singularities and leaves a smooth integrand for Simpson's rule.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qrw/coin.hpp"
#include "qrw/error.hpp"
#include "qrw/pathsum.hpp"
#include "qrw/walk.hpp"

namespace qrw {

inline constexpr double kQuadTol = 1e-8;
inline constexpr int kSimpsonPanels = 4096;

struct LimitDensity {
    double mod_a;
    double skew;
    WalkType walk_type;
};

inline LimitDensity make_limit_density(const UnitaryCoin& coin, WalkType wt,
                                       const QubitState& state) {
    if (!coin.abcd_nonzero()) throw CoinHasZeroEntry("limit density needs abcd != 0");
    const double a2 = std::norm(coin.a());
    const double skew =
        std::norm(state.alpha()) - std::norm(state.beta()) + theta(coin, wt, state) / a2;
    return {std::sqrt(a2), skew, wt};
}

// Zero on and outside the endpoints.
inline double density(const LimitDensity& d, double x) {
    const double a = d.mod_a;
    if (!(std::abs(x) < a)) return 0.0;
    return std::sqrt(1.0 - a * a) /
           (std::numbers::pi * (1.0 - x * x) * std::sqrt(a * a - x * x)) * (1.0 - d.skew * x);
}

inline double limit_second_moment(const LimitDensity& d) {
    return 1.0 - std::sqrt(1.0 - d.mod_a * d.mod_a);
}

// + 0.0 turns the -0 of a zero skew into 0.
inline double limit_mean(const LimitDensity& d) { return -d.skew * limit_second_moment(d) + 0.0; }

inline double limit_sd(const LimitDensity& d) {
    const double mu = limit_mean(d);
    return std::sqrt(limit_second_moment(d) - mu * mu);
}

namespace detail {

// Composite Simpson of g(t) on [t0, t1].
template <typename F>
double simpson(F&& g, double t0, double t1, int panels) {
    if (panels % 2 != 0) ++panels;
    const double h = (t1 - t0) / panels;
    double acc = g(t0) + g(t1);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * g(t0 + i * h);
    return acc * h / 3.0;
}

// x^power * f(x) dx after x = |a| sin t.
inline double transformed_integrand(const LimitDensity& d, double t, int power) {
    const double a = d.mod_a;
    const double x = a * std::sin(t);
    const double base =
        std::sqrt(1.0 - a * a) / (std::numbers::pi * (1.0 - x * x)) * (1.0 - d.skew * x);
    return power == 0 ? base : std::pow(x, power) * base;
}

}  // namespace detail

// int_{lo}^{hi} x^power f(x) dx over the support.
inline double integrate_moment(const LimitDensity& d, double lo, double hi, int power,
                               int panels = kSimpsonPanels) {
    if (lo > hi) throw ParamOutOfRange("integration interval needs lo <= hi");
    const double a = d.mod_a;
    lo = std::max(lo, -a);
    hi = std::min(hi, a);
    if (lo >= hi) return 0.0;
    const double t0 = std::asin(std::clamp(lo / a, -1.0, 1.0));
    const double t1 = std::asin(std::clamp(hi / a, -1.0, 1.0));
    return detail::simpson([&](double t) { return detail::transformed_integrand(d, t, power); },
                           t0, t1, panels);
}

inline double cdf_interval(const LimitDensity& d, double lo, double hi) {
    return integrate_moment(d, lo, hi, 0);
}

// P(Z <= x)
inline double limit_cdf(const LimitDensity& d, double x) {
    if (x <= -d.mod_a) return 0.0;
    return cdf_interval(d, -d.mod_a, std::min(x, d.mod_a));
}

// sup_x |P(X_n / n <= x) - P(Z <= x)|. The empirical law is a step function,
// so the supremum is attained just before or at one of its atoms.
inline double kolmogorov_distance(const Distribution& dist, const LimitDensity& d) {
    if (dist.time < 1) throw ParamOutOfRange("kolmogorov distance needs time >= 1");
    const double n = dist.time;
    double cum = 0.0, worst = 0.0;
    double prev_x = -d.mod_a, prev_cdf = 0.0;
    for (int k = dist.min_site(); k <= dist.max_site(); ++k) {
        const double p = dist.at(k);
        if (p == 0.0) continue;
        const double x = k / n;
        // Integrate piecewise from the previous atom to keep this linear in n.
        double f = prev_cdf;
        if (x > prev_x) {
            f += cdf_interval(d, prev_x, x);
            prev_x = x;
            prev_cdf = f;
        }
        f = std::min(f, 1.0);
        worst = std::max({worst, std::abs(cum - f), std::abs(cum + p - f)});
        cum += p;
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Jacobi polynomials

struct JacobiParams {
    double nu;
    double mu;
    int degree;
    double x;
};

namespace detail {

template <typename Real>
Real jacobi_series(Real nu, Real mu, int n, Real x) {
    const Real y = (1 - x) / 2;
    // c_0 = (nu+1)_n / n!
    Real coeff = 1;
    for (int i = 1; i <= n; ++i) coeff *= (nu + i) / i;
    Real sum = coeff;
    for (int j = 0; j < n; ++j) {
        coeff *= (j - n) * (n + nu + mu + 1 + j) / ((nu + 1 + j) * (j + 1)) * y;
        sum += coeff;
    }
    return sum;
}

}  // namespace detail

// P_n^{nu,mu}(x) = (nu+1)_n / n! * 2F1(-n, n+nu+mu+1; nu+1; (1-x)/2).
// The gamma-function prefactor is folded into the term coefficients, which
// are updated incrementally, so no standalone gamma value is ever formed.
inline double jacobi(const JacobiParams& p) {
    if (!(p.nu > -1.0) || !(p.mu > -1.0) || p.degree < 0)
        throw ParamOutOfRange("jacobi needs nu, mu > -1 and degree >= 0");
    // For x < 0 the series in (1-x)/2 alternates with growing terms; the
    // reflection P_n^{nu,mu}(x) = (-1)^n P_n^{mu,nu}(-x) keeps (1-x)/2 <= 1/2.
    using LD = long double;
    if (p.x < 0.0) {
        const LD v = detail::jacobi_series<LD>(p.mu, p.nu, p.degree, -LD(p.x));
        return static_cast<double>(p.degree % 2 ? -v : v);
    }
    return static_cast<double>(detail::jacobi_series<LD>(p.nu, p.mu, p.degree, p.x));
}

// Max absolute difference across the two binomial-sum identities
//
//   sum_g x^{g-1} C(k-1,g-1) C(n-k-1,g-1) / g = |a|^{-2(k-1)} P_{k-1}^{1,n-2k}(2|a|^2-1) / k
//   sum_g x^{g-1} C(k-1,g-1) C(n-k-1,g-1)     = |a|^{-2(k-1)} P_{k-1}^{0,n-2k}(2|a|^2-1)
//
// with x = -|b|^2/|a|^2. Both sides are alternating sums with terms near 1e8
// at k = 8, n = 40, so they are evaluated in long double; in double the
// rounding alone is a few 1e-9.
inline double jacobi_identity_residual(int k, int n, const UnitaryCoin& coin) {
    if (k < 1 || n < 2 * k) throw ParamOutOfRange("jacobi identity needs k >= 1, n >= 2k");
    if (!coin.abcd_nonzero()) throw CoinHasZeroEntry("jacobi identity needs abcd != 0");
    using LD = long double;
    const LD a2 = std::norm(coin.a());
    // |b|^2 = 1 - |a|^2 exactly here; the stored |b|^2 is off by an ulp, enough
    // to move the large alternating sums by ~1e-9.
    const LD x = -(1 - a2) / a2;
    LD weighted = 0, plain = 0, xp = 1;
    for (int g = 1; g <= k; ++g) {
        const LD w = xp * binomial<LD>(k - 1, g - 1) * binomial<LD>(n - k - 1, g - 1);
        weighted += w / g;
        plain += w;
        xp *= x;
    }
    const LD scale = std::pow(a2, LD(-(k - 1)));
    const LD arg = 2 * a2 - 1;
    const LD rhs_weighted = scale * detail::jacobi_series<LD>(1, n - 2 * k, k - 1, arg) / k;
    const LD rhs_plain = scale * detail::jacobi_series<LD>(0, n - 2 * k, k - 1, arg);
    return static_cast<double>(
        std::max(std::abs(weighted - rhs_weighted), std::abs(plain - rhs_plain)));
}

}  // namespace qrw
