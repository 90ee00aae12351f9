#pragma once

// First hits at site 0 under the step-and-measure protocol on {0, ..., N}
// (absorbing at 0 and N) or on {0, 1, ...}.
//
// The path sum of walks first hitting 0 at time n from k has only P and R
// components, v_k(n) = (p_k(n), r_k(n)), and
//
//   v_k(n) = [[a, c], [0, 0]] v_{k-1}(n-1) + [[0, 0], [b, d]] v_{k+1}(n-1)
//
// with v_0(0) = (conj a, conj c), v_k(0) = 0 (k >= 1) and v_0(n) = v_N(n) = 0
// (n >= 1). The coefficients are the same for both walk types; only the map
// from (p, r) to probabilities differs.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#if defined(__SSE__) || defined(_M_X64)
#include <xmmintrin.h>
#define QRW_HAVE_MXCSR 1
#endif

#include "qrw/coin.hpp"
#include "qrw/error.hpp"

namespace qrw {

inline constexpr int kSemiInfiniteCap = 100000;
inline constexpr int kFiniteCap = 200000;

class AbsorptionSpec {
public:
    static AbsorptionSpec semi_infinite(const UnitaryCoin& coin, WalkType wt, int start) {
        if (start < 1) throw ParamOutOfRange("start site must be >= 1");
        return AbsorptionSpec(coin, wt, std::nullopt, start);
    }
    static AbsorptionSpec finite(const UnitaryCoin& coin, WalkType wt, int n_sites, int start) {
        if (n_sites < 2) throw ParamOutOfRange("finite boundary needs N >= 2");
        if (start < 1 || start > n_sites - 1)
            throw ParamOutOfRange("start site must satisfy 1 <= k <= N-1");
        return AbsorptionSpec(coin, wt, n_sites, start);
    }

    const UnitaryCoin& coin() const { return coin_; }
    WalkType walk_type() const { return walk_type_; }
    bool is_finite() const { return boundary_.has_value(); }
    // Right boundary N; only meaningful when is_finite().
    int boundary() const { return boundary_.value_or(0); }
    int start() const { return start_; }

private:
    AbsorptionSpec(const UnitaryCoin& coin, WalkType wt, std::optional<int> n, int start)
        : coin_(coin), walk_type_(wt), boundary_(n), start_(start) {}

    UnitaryCoin coin_;
    WalkType walk_type_;
    std::optional<int> boundary_;
    int start_;
};

// Marches the (p, r) recurrence forward in time for every start site at once
// and reports the start site of interest. Only sites inside the backward
// light cone of (start, horizon) are updated, and sites of the wrong parity
// (v_j(n) = 0 unless j + n is even) are not stored. On the half line the
// lattice is cut at start + horizon, which is exact: n steps move at most n sites.
namespace detail {

// Far inside the light cone the amplitudes underflow; subnormal arithmetic
// there made the half-line runs about five times slower. Values below
// DBL_MIN cannot move any probability, so flushing them is harmless.
class FlushSubnormals {
public:
#ifdef QRW_HAVE_MXCSR
    FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }  // FTZ | DAZ
    ~FlushSubnormals() { _mm_setcsr(saved_); }

private:
    unsigned saved_;
#endif
public:
    FlushSubnormals(const FlushSubnormals&) = delete;
    FlushSubnormals& operator=(const FlushSubnormals&) = delete;
};

// One time step over a contiguous run of same-parity sites. `olo` points at
// the left neighbour of the first site and olo + 1 at its right neighbour.
inline void hit_kernel(int count, const std::array<double, 8>& k, double* __restrict npr,
                       double* __restrict npi, double* __restrict nrr, double* __restrict nri,
                       const double* __restrict opr, const double* __restrict opi,
                       const double* __restrict orr, const double* __restrict ori) {
    const double ar = k[0], ai = k[1], br = k[2], bi = k[3];
    const double cr = k[4], ci = k[5], dr = k[6], di = k[7];
    for (int i = 0; i < count; ++i) {
        npr[i] = ar * opr[i] - ai * opi[i] + cr * orr[i] - ci * ori[i];
        npi[i] = ar * opi[i] + ai * opr[i] + cr * ori[i] + ci * orr[i];
        nrr[i] = br * opr[i + 1] - bi * opi[i + 1] + dr * orr[i + 1] - di * ori[i + 1];
        nri[i] = br * opi[i + 1] + bi * opr[i + 1] + dr * ori[i + 1] + di * orr[i + 1];
    }
}

inline void hit_kernel_real(int count, double a, double b, double c, double d,
                            double* __restrict np, double* __restrict nr,
                            const double* __restrict op, const double* __restrict orr) {
    for (int i = 0; i < count; ++i) {
        np[i] = a * op[i] + c * orr[i];
        nr[i] = b * op[i + 1] + d * orr[i + 1];
    }
}

}  // namespace detail

class HittingRecurrence {
public:
    HittingRecurrence(const UnitaryCoin& coin, std::optional<int> boundary, int start, int horizon)
        : boundary_(boundary), start_(start), horizon_(horizon) {
        const Complex a = coin.a(), b = coin.b(), c = coin.c(), d = coin.d();
        ar_ = a.real(); ai_ = a.imag();
        br_ = b.real(); bi_ = b.imag();
        cr_ = c.real(); ci_ = c.imag();
        dr_ = d.real(); di_ = d.imag();
        coef_ = {ar_, ai_, br_, bi_, cr_, ci_, dr_, di_};
        // Real entries keep every p, r real, so the imaginary halves stay zero.
        real_coin_ = ai_ == 0.0 && bi_ == 0.0 && ci_ == 0.0 && di_ == 0.0;
        const int max_site = boundary ? *boundary : start + horizon;
        const std::size_t len = static_cast<std::size_t>(max_site / 2 + 2);
        for (auto& buf : buffers_) buf.resize(len);
        // v_0(0) lives in the even buffer at index 0.
        buffers_[0].pr[0] = a.real();
        buffers_[0].pi[0] = -a.imag();
        buffers_[0].rr[0] = c.real();
        buffers_[0].ri[0] = -c.imag();
    }

    int time() const { return time_; }

    // Advances one step and returns (p, r) at the start site.
    std::pair<Complex, Complex> advance() {
        if (time_ >= horizon_) throw OutOfRange("recurrence advanced past its horizon");
        const int m = ++time_;
        const int parity = m & 1;
        Buffer& nxt = buffers_[parity];
        const Buffer& old = buffers_[parity ^ 1];

        int upper = std::min(m, start_ + horizon_ - m);
        if (boundary_) upper = std::min(upper, *boundary_ - 1);
        const int first = parity ? 1 : 2;
        if (!parity) nxt.zero(0);  // v_0(n) = 0 for n >= 1
        if (upper >= first) {
            const int i_begin = first >> 1;
            const int i_end = (upper - parity) / 2;
            // Site j = 2i + parity reads j-1 at index i-1+parity and j+1 at i+parity.
            const int lo = i_begin + (parity ? 0 : -1);
            const int count = i_end - i_begin + 1;
            if (real_coin_)
                detail::hit_kernel_real(count, ar_, br_, cr_, dr_, nxt.pr.data() + i_begin,
                                        nxt.rr.data() + i_begin, old.pr.data() + lo,
                                        old.rr.data() + lo);
            else
                detail::hit_kernel(count, coef_, nxt.pr.data() + i_begin, nxt.pi.data() + i_begin,
                                   nxt.rr.data() + i_begin, nxt.ri.data() + i_begin,
                                   old.pr.data() + lo, old.pi.data() + lo, old.rr.data() + lo,
                                   old.ri.data() + lo);
        }
        if (((start_ + m) & 1) != 0) return {};
        const std::size_t idx = static_cast<std::size_t>((start_ - parity) / 2);
        return {{nxt.pr[idx], nxt.pi[idx]}, {nxt.rr[idx], nxt.ri[idx]}};
    }

private:
    struct Buffer {
        std::vector<double> pr, pi, rr, ri;
        void resize(std::size_t n) {
            pr.assign(n, 0.0);
            pi.assign(n, 0.0);
            rr.assign(n, 0.0);
            ri.assign(n, 0.0);
        }
        void zero(std::size_t i) { pr[i] = pi[i] = rr[i] = ri[i] = 0.0; }
    };

    std::optional<int> boundary_;
    int start_;
    int horizon_;
    int time_ = 0;
    double ar_, ai_, br_, bi_, cr_, ci_, dr_, di_;
    std::array<double, 8> coef_{};
    bool real_coin_ = false;
    Buffer buffers_[2];  // indexed by time parity
};

struct HittingSeries {
    std::vector<Complex> p;  // p[n], n = 0..n_max
    std::vector<Complex> r;
    int n_max;
    AbsorptionSpec spec;
};

inline HittingSeries hitting_series(const AbsorptionSpec& spec, int n_max) {
    if (n_max < 1) throw ParamOutOfRange("hitting series needs n_max >= 1");
    detail::FlushSubnormals ftz;
    HittingRecurrence rec(spec.coin(),
                          spec.is_finite() ? std::optional<int>(spec.boundary()) : std::nullopt,
                          spec.start(), n_max);
    HittingSeries out{std::vector<Complex>(n_max + 1), std::vector<Complex>(n_max + 1), n_max,
                      spec};
    for (int n = 1; n <= n_max; ++n) std::tie(out.p[n], out.r[n]) = rec.advance();
    return out;
}

// First-hit probability at one time from the (p, r) coefficients.
inline double hit_probability(const UnitaryCoin& coin, WalkType wt, Complex p, Complex r,
                              const QubitState& state) {
    Complex left = p, right = r;  // G-type: C1 = |p|^2, C2 = |r|^2, C3 = conj(p) r
    if (wt == WalkType::A) {
        left = coin.a() * p + coin.c() * r;
        right = coin.b() * p + coin.d() * r;
    }
    const Complex al = state.alpha(), be = state.beta();
    return std::norm(left) * std::norm(al) + std::norm(right) * std::norm(be) +
           2.0 * (std::conj(left) * right * std::conj(al) * be).real();
}

inline double first_hit_prob(const HittingSeries& series, const QubitState& state, int n) {
    if (n < 0 || n > series.n_max) throw OutOfRange("time outside the computed series");
    return hit_probability(series.spec.coin(), series.spec.walk_type(), series.p[n], series.r[n],
                           state);
}

struct AbsorptionOptions {
    int window = 500;           // consecutive steps inspected by the stop rule
    double window_tol = 1e-14;  // stop once a full window adds less mass than this
    int cap = 0;                // 0 picks the boundary default
    double tail_tol = 1e-8;     // tail_bound above this marks the result unconverged
    double tail_factor = 10.0;  // tail_bound = factor * last window mass when capped
};

struct AbsorptionResult {
    double prob = 0.0;
    int n_used = 0;
    double tail_bound = 0.0;
    double cond_mean_T0 = 0.0;  // sum n P(n) / sum P(n), from the series
    bool converged = true;
    double max_partial = 0.0;   // largest running partial sum seen
};

namespace detail {

// Running sums plus the sliding-window stop rule shared by the streaming and
// the precomputed-series paths.
class TruncatedSum {
public:
    TruncatedSum(const AbsorptionSpec& spec, const AbsorptionOptions& opt)
        : opt_(opt), window_(static_cast<std::size_t>(std::max(opt.window, 1)), 0.0) {
        cap_ = opt.cap > 0 ? opt.cap : (spec.is_finite() ? kFiniteCap : kSemiInfiniteCap);
        // Amplitude spreads at speed |a| at most; do not judge the tail before
        // the front has had time to reach 0.
        const double speed = std::max(std::abs(spec.coin().a()), 1e-3);
        const double arrival = std::ceil(1.5 * spec.start() / speed);
        earliest_stop_ = static_cast<int>(
            std::min<double>(cap_, arrival + static_cast<double>(window_.size())));
    }

    int cap() const { return cap_; }

    // Adds P(n); returns true once the stop rule fires.
    bool add(int n, double pn) {
        mass_ += pn;
        weighted_ += n * pn;
        max_partial_ = std::max(max_partial_, mass_);
        double& slot = window_[static_cast<std::size_t>(n) % window_.size()];
        window_sum_ += pn - slot;
        slot = pn;
        n_used_ = n;
        return n >= earliest_stop_ && window_sum_ < opt_.window_tol;
    }

    AbsorptionResult result() const {
        AbsorptionResult res;
        res.prob = mass_;
        res.n_used = n_used_;
        res.cond_mean_T0 = mass_ > 0.0 ? weighted_ / mass_ : 0.0;
        res.max_partial = max_partial_;
        if (n_used_ == cap_ && !(window_sum_ < opt_.window_tol)) {
            res.tail_bound = opt_.tail_factor * std::max(window_sum_, 0.0);
            res.converged = res.tail_bound <= opt_.tail_tol;
        }
        return res;
    }

private:
    AbsorptionOptions opt_;
    std::vector<double> window_;
    int cap_ = 0;
    int earliest_stop_ = 0;
    int n_used_ = 0;
    double window_sum_ = 0.0, mass_ = 0.0, weighted_ = 0.0, max_partial_ = 0.0;
};

}  // namespace detail

// Sum of first-hit probabilities with adaptive truncation: stop once a whole
// window adds less than window_tol, or at the cap. A capped run reports
// tail_factor times the last window's mass as its tail bound.
inline AbsorptionResult absorption_prob(const AbsorptionSpec& spec, const QubitState& state,
                                        const AbsorptionOptions& opt = {}) {
    detail::TruncatedSum acc(spec, opt);
    detail::FlushSubnormals ftz;
    HittingRecurrence rec(spec.coin(),
                          spec.is_finite() ? std::optional<int>(spec.boundary()) : std::nullopt,
                          spec.start(), acc.cap());
    for (int n = 1; n <= acc.cap(); ++n) {
        const auto [p, r] = rec.advance();
        if (acc.add(n, hit_probability(spec.coin(), spec.walk_type(), p, r, state))) break;
    }
    return acc.result();
}

// Same rule over a series that is already computed (the coefficients do not
// depend on the state, so one series serves many states). The cap is clipped
// to the series length.
inline AbsorptionResult absorption_prob(const HittingSeries& series, const QubitState& state,
                                        AbsorptionOptions opt = {}) {
    const int def = series.spec.is_finite() ? kFiniteCap : kSemiInfiniteCap;
    opt.cap = std::min(opt.cap > 0 ? opt.cap : def, series.n_max);
    detail::TruncatedSum acc(series.spec, opt);
    for (int n = 1; n <= acc.cap(); ++n)
        if (acc.add(n, first_hit_prob(series, state, n))) break;
    return acc.result();
}

// Hadamard, start 1, half line:
//   A-type: 2/pi + 2(1 - 2/pi) Re(conj(alpha) beta)
//   G-type: |alpha|^2 + (4/pi - 1)|beta|^2
inline double semi_infinite_closed(const UnitaryCoin& coin, const QubitState& state,
                                   WalkType wt) {
    if (!is_hadamard(coin)) throw UnsupportedCoin("closed form is for the Hadamard coin only");
    constexpr double two_over_pi = 2.0 / std::numbers::pi;
    if (wt == WalkType::A)
        return two_over_pi +
               2.0 * (1.0 - two_over_pi) * (std::conj(state.alpha()) * state.beta()).real();
    return std::norm(state.alpha()) + (2.0 * two_over_pi - 1.0) * std::norm(state.beta());
}

struct HittingMoment {
    int order = 1;
    bool divergent = false;
    // Closed form 1/P for order 1; the series value for a finite higher moment;
    // +inf when divergent.
    double value = 0.0;
    double series_estimate = 0.0;  // conditional partial sum up to 2 n_max
    double partial_at_n = 0.0;     // conditional partial sum up to n_max
    double partial_at_2n = 0.0;
    int n_max = 0;
};

inline constexpr double kDivergenceMargin = 0.05;

// E((T_0)^m | T_0 < inf) for the Hadamard walk from site 1 on the half line.
// The first moment is 1/P. Higher moments are infinite whenever the hitting
// distribution has its n^{-3} tail; that is detected by comparing partial
// sums at n_max and 2 n_max, so states without the tail (all mass at n = 1)
// get their finite value back.
inline HittingMoment conditional_hitting_moment(const AbsorptionSpec& spec,
                                                const QubitState& state, int m,
                                                int n_max = 10000) {
    if (!is_hadamard(spec.coin()))
        throw UnsupportedCoin("conditional hitting moments are for the Hadamard coin only");
    if (spec.is_finite() || spec.start() != 1)
        throw ParamOutOfRange("conditional hitting moments need the half line and start 1");
    if (m < 1) throw ParamOutOfRange("moment order must be >= 1");

    const HittingSeries series = hitting_series(spec, 2 * n_max);
    double mass = 0.0, weighted = 0.0;
    HittingMoment out;
    out.order = m;
    out.n_max = n_max;
    for (int n = 1; n <= 2 * n_max; ++n) {
        const double pn = first_hit_prob(series, state, n);
        mass += pn;
        weighted += std::pow(double(n), m) * pn;
        if (n == n_max) out.partial_at_n = mass > 0.0 ? weighted / mass : 0.0;
    }
    out.partial_at_2n = mass > 0.0 ? weighted / mass : 0.0;
    out.series_estimate = out.partial_at_2n;
    if (m == 1) {
        out.value = 1.0 / semi_infinite_closed(spec.coin(), state, spec.walk_type());
        return out;
    }
    out.divergent = std::abs(out.partial_at_2n - out.partial_at_n) > kDivergenceMargin;
    out.value = out.divergent ? std::numeric_limits<double>::infinity() : out.partial_at_2n;
    return out;
}

// ---------------------------------------------------------------------------
// Generating functions p~_k(z) = sum_n p_k(n) z^n, r~_k(z) likewise.

// Roots of d L^2 - (det z + 1/z) L + a = 0:
//   L_pm = (det z^2 + 1 -/+ sqrt(det^2 z^4 + 2 det (1 - 2|a|^2) z^2 + 1)) / (2 det conj(a) z)
// using the principal square root.
inline std::pair<Complex, Complex> lambda_roots(const UnitaryCoin& coin, Complex z) {
    const Complex det = coin.det();
    const Complex denom = 2.0 * det * std::conj(coin.a()) * z;
    if (std::abs(denom) < 1e-300) throw ZeroDenominator("lambda roots need a != 0 and z != 0");
    const Complex z2 = z * z;
    const Complex root =
        std::sqrt(det * det * z2 * z2 + 2.0 * det * (1.0 - 2.0 * std::norm(coin.a())) * z2 + 1.0);
    const Complex head = det * z2 + 1.0;
    return {(head - root) / denom, (head + root) / denom};
}

struct GenFunEval {
    Complex z;
    Complex lambda_plus, lambda_minus;
    Complex p_tilde, r_tilde;
    Complex C_z, E_z;
    std::vector<Complex> J;  // J_0 .. J_{N-3}, J_n = sum_k L+^k L-^{n-k}
};

inline constexpr double kSingularTol = 1e-12;

namespace detail {

inline void require_nonsingular(Complex v, const char* what) {
    if (!(std::abs(v) >= kSingularTol) || !is_finite(v))
        throw SingularPoint(std::string("generating function singular: ") + what);
}

}  // namespace detail

// Hadamard walk on {0..N}, closed forms
//   p~_k = (z/2 + E_z) L+^{k-1} + (z/2 - E_z) L-^{k-1}
//   r~_k = C_z (L+^{k-N+1} - L-^{k-N+1})
// with, writing D_n = L+^n - L-^n and
//   B = D_{N-2}^2 - (z/sqrt2) D_{N-2} D_{N-3} - (-1)^{N-3} D_1^2,
//   C_z = (z^2/sqrt2) (-1)^{N-2} D_{N-3} / B,
//   E_z = -z/(2 D_{N-2}) [2 (-1)^{N-3} D_1 D_{N-3} / B + (L+^{N-2} + L-^{N-2})].
// At N = 3 these degenerate to 0/0, so the solved system is used instead:
//   p~_1 = z, r~_1 = z^3/(2-z^2), p~_2 = sqrt2 z^2/(2-z^2), r~_2 = 0.
inline GenFunEval genfun_finite_hadamard(int N, int k, Complex z) {
    if (N < 3) throw ParamOutOfRange("finite generating function needs N >= 3");
    if (k < 1 || k > N - 1) throw ParamOutOfRange("start site must satisfy 1 <= k <= N-1");
    detail::require_nonsingular(z, "z = 0");
    const Complex z2 = z * z;
    detail::require_nonsingular(z2 * z2 + 1.0, "coincident roots (z^4 = -1)");

    GenFunEval out;
    out.z = z;
    std::tie(out.lambda_plus, out.lambda_minus) = lambda_roots(hadamard_coin(), z);
    const Complex lp = out.lambda_plus, lm = out.lambda_minus;
    const Complex d1 = lp - lm;
    auto D = [&](int n) { return ipow(lp, n) - ipow(lm, n); };

    out.J.reserve(static_cast<std::size_t>(N - 2));
    for (int n = 0; n <= N - 3; ++n) out.J.push_back(D(n + 1) / d1);

    if (N == 3) {
        const Complex denom = 2.0 - z2;
        detail::require_nonsingular(denom, "pole of the N = 3 solution");
        const Complex r1 = z2 * z / denom;
        const Complex p2 = std::numbers::sqrt2 * z2 / denom;
        out.p_tilde = k == 1 ? z : p2;
        out.r_tilde = k == 1 ? r1 : Complex{};
        // Coefficients that reproduce the same values through the general shape.
        out.C_z = r1 / (1.0 / lp - 1.0 / lm);
        out.E_z = (p2 - 0.5 * z * (lp + lm)) / d1;
        return out;
    }

    const double sign_n2 = (N % 2 == 0) ? 1.0 : -1.0;  // (-1)^{N-2}
    const double sign_n3 = -sign_n2;                   // (-1)^{N-3}
    const Complex dn2 = D(N - 2), dn3 = D(N - 3);
    detail::require_nonsingular(dn2, "L+^{N-2} = L-^{N-2}");
    const Complex brace = dn2 * dn2 - z / std::numbers::sqrt2 * dn2 * dn3 - sign_n3 * d1 * d1;
    detail::require_nonsingular(brace, "pole of C_z / E_z");

    out.C_z = z2 / std::numbers::sqrt2 * sign_n2 * dn3 / brace;
    out.E_z = -z / (2.0 * dn2) *
              (2.0 * sign_n3 * d1 * dn3 / brace + (ipow(lp, N - 2) + ipow(lm, N - 2)));
    out.p_tilde = (0.5 * z + out.E_z) * ipow(lp, k - 1) + (0.5 * z - out.E_z) * ipow(lm, k - 1);
    out.r_tilde = out.C_z * (ipow(lp, k - N + 1) - ipow(lm, k - N + 1));
    if (!is_finite(out.p_tilde) || !is_finite(out.r_tilde))
        throw SingularPoint("generating function evaluation overflowed");
    return out;
}

// r~_1 for the Hadamard walk on {0..N}: 0 for N = 2, z^3/(2 - z^2) for N = 3, and
//   -z^2 J_{N-3} J_{N-4} / (sqrt2 J_{N-3}^2 - z J_{N-3} J_{N-4} - sqrt2 (-1)^{N-3})
// for N >= 4, where J_n = (L+ + L-) J_{n-1} - L+ L- J_{n-2}, L+ + L- = sqrt2 (z - 1/z),
// L+ L- = -1.
inline Complex genfun_r1_corollary(int N, Complex z) {
    if (N < 2) throw ParamOutOfRange("corollary needs N >= 2");
    if (N == 2) return {};
    const Complex z2 = z * z;
    if (N == 3) {
        detail::require_nonsingular(2.0 - z2, "pole of z^3/(2-z^2)");
        return z2 * z / (2.0 - z2);
    }
    detail::require_nonsingular(z, "z = 0");
    const Complex sum = std::numbers::sqrt2 * (z - 1.0 / z);
    Complex j_prev{1.0}, j_cur = sum;  // J_0, J_1
    for (int n = 2; n <= N - 3; ++n) {
        const Complex j_next = sum * j_cur + j_prev;
        j_prev = j_cur;
        j_cur = j_next;
    }
    // j_cur = J_{N-3}, j_prev = J_{N-4}
    const double sign_n3 = (N % 2 == 1) ? 1.0 : -1.0;
    const Complex denom = std::numbers::sqrt2 * j_cur * j_cur - z * j_cur * j_prev -
                          std::numbers::sqrt2 * sign_n3;
    detail::require_nonsingular(denom, "pole of the corollary form");
    return -z2 * j_cur * j_prev / denom;
}

namespace detail {

struct CircleMeans {
    Complex c1, c2, c3;
};

inline CircleMeans unit_circle_means(int N, int k, WalkType wt, int panels, double shift) {
    const UnitaryCoin h = hadamard_coin();
    CircleMeans acc;
    for (int j = 0; j < panels; ++j) {
        const double th = 2.0 * std::numbers::pi * (j + shift) / panels;
        const Complex z = std::polar(1.0, th);
        Complex pt = z, rt{};
        if (N > 2) {
            const GenFunEval g = genfun_finite_hadamard(N, k, z);
            pt = g.p_tilde;
            rt = g.r_tilde;
        }
        Complex left = pt, right = rt;
        if (wt == WalkType::A) {
            left = h.a() * pt + h.c() * rt;
            right = h.b() * pt + h.d() * rt;
        }
        acc.c1 += std::norm(left);
        acc.c2 += std::norm(right);
        acc.c3 += std::conj(left) * right;
    }
    const double inv = 1.0 / panels;
    return {acc.c1 * inv, acc.c2 * inv, acc.c3 * inv};
}

}  // namespace detail

// Absorption probability of the Hadamard walk on {0..N} through Parseval:
// the C_{j,i} are unit-circle means of |.|^2 of the generating functions,
// evaluated with the periodic trapezoid rule. A node landing on a removable
// singularity of the closed form shifts the whole node set by half a step once.
inline double theorem8_prob(int N, int k, const QubitState& state, WalkType wt,
                            int panels = 8192) {
    if (N < 2) throw ParamOutOfRange("finite boundary needs N >= 2");
    if (k < 1 || k > N - 1) throw ParamOutOfRange("start site must satisfy 1 <= k <= N-1");
    if (panels < 8) throw ParamOutOfRange("quadrature needs at least 8 panels");
    detail::CircleMeans c;
    try {
        c = detail::unit_circle_means(N, k, wt, panels, 0.0);
    } catch (const SingularPoint&) {
        c = detail::unit_circle_means(N, k, wt, panels, 0.5);
    }
    const Complex al = state.alpha(), be = state.beta();
    return c.c1.real() * std::norm(al) + c.c2.real() * std::norm(be) +
           2.0 * (c.c3 * std::conj(al) * be).real();
}

// (1/sqrt2) ((3+2sqrt2)^{N-1} - 1) / ((3+2sqrt2)^{N-1} + 1), written as a tanh
// so large N does not overflow.
inline double conjecture_rhs(int N) {
    if (N < 1) throw ParamOutOfRange("conjecture needs N >= 1");
    const double half_log = 0.5 * std::log(3.0 + 2.0 * std::numbers::sqrt2);
    return std::tanh((N - 1) * half_log) / std::numbers::sqrt2;
}

}  // namespace qrw
