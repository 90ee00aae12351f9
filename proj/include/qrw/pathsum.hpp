#pragma once

// Path sums Xi(l, m): the sum of all ordered products of l P-factors and
// m Q-factors. The walker's amplitude at site k = m - l after n = l + m
// steps is Xi(l, m) applied to the initial qubit, and the PQRS coefficients
// of Xi do not depend on the walk type.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "qrw/coin.hpp"
#include "qrw/error.hpp"

namespace qrw {

inline constexpr int kBruteForceCap = 14;

struct PathSplit {
    int l = 0;  // P-factors (left moves)
    int m = 0;  // Q-factors (right moves)

    PathSplit(int l_, int m_) : l(l_), m(m_) {
        if (l < 0 || m < 0) throw ParamOutOfRange("path split needs l, m >= 0");
    }
    // The split that lands on site k after n steps; requires n + k even and |k| <= n.
    static PathSplit at_site(int n, int k) {
        if (n < 0 || std::abs(k) > n || ((n + k) & 1) != 0)
            throw ParamOutOfRange("site unreachable at this time");
        return {(n - k) / 2, (n + k) / 2};
    }

    int n() const { return l + m; }
    int k() const { return m - l; }
};

// C(n, k) via the multiplicative recurrence; exact for the sizes used here.
template <typename Real = double>
Real binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return Real(0);
    k = std::min(k, n - k);
    Real result = 1;
    for (int i = 1; i <= k; ++i) result = result * Real(n - k + i) / Real(i);
    return result;
}

// Enumerates all C(l+m, l) words. The factor of the first step sits
// rightmost in each product (the convention of the absorbing-walk words).
inline BasisCombo xi_bruteforce(const PathSplit& split, const PQRSBasis& basis) {
    const int n = split.n();
    if (n > kBruteForceCap)
        throw TooLarge("brute-force path sum limited to l + m <= " +
                       std::to_string(kBruteForceCap));
    Matrix2 total{};
    if (n == 0) return expand(Matrix2::identity(), basis);
    // Bit i set means step i+1 is a Q-step.
    for (std::uint32_t word = 0; word < (1u << n); ++word) {
        if (std::popcount(word) != split.m) continue;
        Matrix2 product = Matrix2::identity();
        for (int i = 0; i < n; ++i) product = ((word >> i) & 1u ? basis.Q : basis.P) * product;
        total += product;
    }
    return expand(total, basis);
}

// Closed form for Xi(l, m). Xi(l,0) = a^{l-1} P and Xi(0,m) = d^{m-1} Q hold for
// every coin; the mixed case needs abcd != 0. Xi(0,0) is the identity.
inline BasisCombo xi_closed_form(const PathSplit& split, const PQRSBasis& basis) {
    const UnitaryCoin& coin = basis.coin;
    const Complex a = coin.a(), b = coin.b(), c = coin.c(), d = coin.d();
    const int l = split.l, m = split.m;
    BasisCombo out;
    out.basis_type = basis.walk_type;
    if (l == 0 && m == 0) return expand(Matrix2::identity(), basis);
    if (m == 0) {
        out.p = ipow(a, l - 1);
        return out;
    }
    if (l == 0) {
        out.q = ipow(d, m - 1);
        return out;
    }
    if (!coin.abcd_nonzero())
        throw CoinHasZeroEntry("mixed path-sum closed form needs abcd != 0");

    const double ratio = -std::norm(b) / std::norm(a);
    Complex sum_p{}, sum_q{}, sum_rs{};
    double weight_pow = 1.0;
    for (int g = 1; g <= std::min(l, m); ++g) {
        weight_pow *= ratio;
        const double w = weight_pow * binomial(l - 1, g - 1) * binomial(m - 1, g - 1);
        sum_p += w * double(l - g) / double(g);
        sum_q += w * double(m - g) / double(g);
        sum_rs += w;
    }
    const Complex lead = ipow(a, l) * ipow(d, m);
    out.p = lead * sum_p / a;
    out.q = lead * sum_q / d;
    out.r = lead * sum_rs / c;
    out.s = lead * sum_rs / b;
    return out;
}

// P(X_n = m - l) = |Xi(l, m) phi|^2, using the closed form where it applies
// and brute force for abcd = 0 coins.
inline double prob_at(const PathSplit& split, const QubitState& state, const PQRSBasis& basis) {
    const bool mixed = split.l > 0 && split.m > 0;
    const BasisCombo xi = (mixed && !basis.coin.abcd_nonzero()) ? xi_bruteforce(split, basis)
                                                                 : xi_closed_form(split, basis);
    return (recombine(xi, basis) * state.spinor()).norm2();
}

// ---------------------------------------------------------------------------
// Moments

struct MomentContext {
    double gamma_j;
    double theta_j;
    WalkType walk_type;
    UnitaryCoin coin;
    QubitState state;
};

// Theta_A = 2 Re(a alpha conj(b beta)), Theta_G = 2 Re(a beta conj(c alpha)).
inline double theta(const UnitaryCoin& coin, WalkType wt, const QubitState& state) {
    const Complex al = state.alpha(), be = state.beta();
    if (wt == WalkType::A) return 2.0 * (coin.a() * al * std::conj(coin.b() * be)).real();
    return 2.0 * (coin.a() * be * std::conj(coin.c() * al)).real();
}

inline MomentContext make_moment_context(const UnitaryCoin& coin, WalkType wt,
                                         const QubitState& state) {
    const double th = theta(coin, wt, state);
    const double chir = std::norm(state.alpha()) - std::norm(state.beta());
    const double gamma =
        wt == WalkType::A
            ? (std::norm(coin.a()) - std::norm(coin.b())) * chir + 2.0 * th
            : chir;
    return {gamma, th, wt, coin, state};
}

namespace detail {

// P_d^{al,be}(x) by the three-term recurrence in the degree.
template <typename Real>
Real jacobi_by_recurrence(Real al, Real be, int d, Real x) {
    if (d == 0) return 1;
    Real p0 = 1, p1 = (al - be + (al + be + 2) * x) / 2;
    for (int j = 2; j <= d; ++j) {
        const Real s = 2 * j + al + be;
        const Real c1 = 2 * j * (j + al + be) * (s - 2);
        const Real c2 = (s - 1) * (al * al - be * be);
        const Real c3 = (s - 2) * (s - 1) * s;
        const Real c4 = 2 * (j + al - 1) * (j + be - 1) * s;
        const Real p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

}  // namespace detail

// E((X_n)^m) in closed form (abcd != 0).
//
// The inner gamma/delta double sum factorizes: with
//   u_g = (-|b|^2)^g |a|^{2(k-g)} C(k-1, g-1) C(n-k-1, g-1),
//   S0 = sum u_g / g,  S1 = sum u_g,
// the weights 1/(g d), (g+d)/(g d) and 1 become S0^2, 2 S0 S1 and S1^2.
// Summed term by term, S0 and S1 cancel from ~1e148 down to O(1) near
// k = n/2 at n = 1000, so they are taken from the Jacobi forms
//   S1 = -|b|^2 P_{k-1}^{0,n-2k}(2|a|^2 - 1),  S0 = -|b|^2 P_{k-1}^{1,n-2k}(2|a|^2 - 1) / k
// which the recurrence evaluates without cancellation.
inline double moment_closed_form(const MomentContext& ctx, int n, int m) {
    if (n < 1 || m < 1) throw ParamOutOfRange("moment needs n >= 1 and m >= 1");
    if (!ctx.coin.abcd_nonzero()) throw CoinHasZeroEntry("moment closed form needs abcd != 0");
    using LD = long double;
    const LD a2 = std::norm(ctx.coin.a());
    const LD b2 = 1 - a2;
    const LD chir = LD(std::norm(ctx.state.alpha())) - LD(std::norm(ctx.state.beta()));
    const LD th = ctx.theta_j;
    const LD nn = n;
    const LD arg = 2 * a2 - 1;
    const bool odd = (m & 1) != 0;

    LD total = 0;
    for (int k = 1; k <= (n - 1) / 2; ++k) {
        const LD be = n - 2 * k;
        const LD s1 = -b2 * detail::jacobi_by_recurrence<LD>(0, be, k - 1, arg);
        const LD s0 = -b2 * detail::jacobi_by_recurrence<LD>(1, be, k - 1, arg) / LD(k);
        const LD scale = std::pow(a2, LD(n - 1 - 2 * k));
        const LD span = n - 2 * k;
        LD bracket;
        if (odd) {
            if (ctx.walk_type == WalkType::A) {
                bracket = (-nn * (a2 - b2) * chir - 2 * nn * th) * s0 * s0 +
                          (-chir + th / b2) * 2 * s0 * s1;
            } else {
                bracket = (-nn * chir) * s0 * s0 + (chir - th / b2) * 2 * s0 * s1;
            }
            total += scale * std::pow(span, LD(m + 1)) * bracket;
        } else {
            const LD kk = k;
            bracket = ((nn - kk) * (nn - kk) + kk * kk) * s0 * s0 - 2 * nn * s0 * s1 +
                      (2 / b2) * s1 * s1;
            total += scale * std::pow(span, LD(m)) * bracket;
        }
    }
    const LD lead = std::pow(a2, LD(n - 1)) * std::pow(nn, LD(m));
    const LD head = odd ? -lead * LD(ctx.gamma_j) : lead;
    return static_cast<double>(head + total);
}

// Membership in the set of states with |alpha| = |beta| and Theta_j = 0,
// which is exactly the set giving mirror-symmetric distributions.
inline bool classify_symmetry(const UnitaryCoin& coin, WalkType wt, const QubitState& state) {
    if (!coin.abcd_nonzero()) throw CoinHasZeroEntry("symmetry classification needs abcd != 0");
    return std::abs(std::abs(state.alpha()) - std::abs(state.beta())) <= kUnitTol &&
           std::abs(theta(coin, wt, state)) <= kUnitTol;
}

}  // namespace qrw
