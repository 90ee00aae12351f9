// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <string>

#include "oracles.hpp"
#include "qrw/qrw.hpp"
#include "qrw/verify.hpp"

using namespace qrw;
using qrw::verify::sci;
namespace k = qrw::verify::constants;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return seconds_since(t0);
}

AbsorptionSpec half_line(WalkType wt) { return AbsorptionSpec::semi_infinite(hadamard_coin(), wt, 1); }

void criterion1() {
    bool ok = true;
    std::string detail;
    for (const QubitState& s : {QubitState::right(), QubitState::left()}) {
        AbsorptionResult r;
        const double t = timed([&] { r = absorption_prob(half_line(WalkType::A), s); });
        const double closed = semi_infinite_closed(hadamard_coin(), s, WalkType::A);
        const double es = std::abs(r.prob - k::two_over_pi), ec = std::abs(closed - k::two_over_pi);
        ok = ok && es < 1e-4 && r.n_used <= kSemiInfiniteCap && t < 5.0 && ec < 1e-12;
        detail += std::string(detail.empty() ? "" : "; ") + (s.alpha() == Complex(1.0) ? "L" : "R") +
                  " series err " + sci(es) + " (n_used " + std::to_string(r.n_used) + ", " + sci(t) +
                  " s), closed err " + sci(ec);
    }
    report(1, "half-line Hadamard absorption = 2/pi", ok, detail);
}

void criterion2() {
    std::mt19937_64 rng(101);
    double worst = 0.0, lo = 1.0, hi = 0.0;
    for (WalkType wt : {WalkType::A, WalkType::G}) {
        const HittingSeries series = hitting_series(half_line(wt), kSemiInfiniteCap);
        for (int i = 0; i < 20; ++i) {
            const QubitState s = random_state(rng);
            const double closed = semi_infinite_closed(hadamard_coin(), s, wt);
            worst = std::max(worst, std::abs(absorption_prob(series, s).prob - closed));
            lo = std::min(lo, closed);
            hi = std::max(hi, closed);
        }
    }
    const bool range = lo >= k::min_absorb - 1e-12 && hi <= 1.0 + 1e-12;
    report(2, "half-line closed form vs series, 20 states x 2 types", worst < 1e-4 && range,
           "max diff " + sci(worst) + "; closed form range [" + verify::fixed(lo) + ", " + verify::fixed(hi) +
               "] within [(4-pi)/pi, 1]");
}

void criterion3() {
    double worst = 0.0, tail = 0.0;
    const double t = timed([&] {
        for (int N = 2; N <= 6; ++N)
            worst = std::max(worst, std::abs(theorem8_prob(N, 1, QubitState::right(), WalkType::A) - conjecture_rhs(N)));
        tail = std::abs(conjecture_rhs(30) - k::inv_sqrt2);
    });
    report(3, "Parseval absorption vs conjectured closed form, N = 2..6", worst < 1e-4 && tail < 1e-9 && t < 30.0,
           "max diff " + sci(worst) + ", |rhs(30) - 1/sqrt2| " + sci(tail) + ", " + sci(t) + " s");
}

void criterion4() {
    const HittingMoment m1 = conditional_hitting_moment(half_line(WalkType::A), QubitState::right(), 1);
    const HittingMoment m2 = conditional_hitting_moment(half_line(WalkType::A), QubitState::right(), 2);
    const double es = std::abs(m1.series_estimate - k::half_pi), ec = std::abs(m1.value - k::half_pi);
    report(4, "conditional hitting time mean = pi/2, second moment infinite",
           es < 1e-2 && ec < 1e-12 && m2.divergent,
           "series " + verify::fixed(m1.series_estimate) + " (err " + sci(es) + "), closed err " + sci(ec) +
               "; m=2 partial sums " + verify::fixed(m2.partial_at_n, 3) + " -> " + verify::fixed(m2.partial_at_2n, 3));
}

void criterion5() {
    std::mt19937_64 rng(105);
    double worst = 0.0;
    const double t = timed([&] {
        for (int i = 0; i < 10; ++i) {
            const UnitaryCoin c = random_coin(rng);
            for (WalkType wt : {WalkType::A, WalkType::G}) {
                const PQRSBasis b = pqrs(c, wt);
                for (int l = 0; l <= 12; ++l)
                    for (int m = 0; l + m <= 12; ++m)
                        worst = std::max(worst, max_abs_diff(xi_closed_form({l, m}, b), xi_bruteforce({l, m}, b)));
            }
        }
    });
    report(5, "path-sum closed form vs brute force, l+m <= 12", worst < 1e-10 && t < 60.0,
           "max residual " + sci(worst) + ", " + sci(t) + " s");
}

void criterion6() {
    std::mt19937_64 rng(106);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const UnitaryCoin c = random_coin(rng);
        const QubitState s = random_state(rng);
        const WalkType wt = i % 2 ? WalkType::G : WalkType::A;
        const MomentContext ctx = make_moment_context(c, wt, s);
        const PQRSBasis b = pqrs(c, wt);
        AmplitudeField f = initial_field(s, wt);
        for (int n = 1; n <= 25; ++n) {
            f = step(f, b);
            const Distribution d = distribution(f);
            for (int m = 1; m <= 4; ++m)
                worst = std::max(worst, std::abs(moment_closed_form(ctx, n, m) - empirical_moment(d, m)));
        }
    }
    report(6, "closed-form moments vs evolution, m = 1..4, n <= 25", worst < 1e-8, "max residual " + sci(worst));
}

void criterion7() {
    std::mt19937_64 rng(107);
    double mirror = 0.0, member_mean = 0.0;
    bool classified = true;
    for (int i = 0; i < 20; ++i) {
        const UnitaryCoin c = random_coin(rng);
        const WalkType wt = i % 2 ? WalkType::G : WalkType::A;
        const QubitState s = balanced_state(c, wt, i % 3 == 0, 0.37 * i);
        classified = classified && classify_symmetry(c, wt, s);
        AmplitudeField f = initial_field(s, wt);
        const PQRSBasis b = pqrs(c, wt);
        for (int n = 1; n <= 15; ++n) {
            f = step(f, b);
            const Distribution d = distribution(f);
            mirror = std::max(mirror, verify::detail::mirror_residual(d));
            member_mean = std::max(member_mean, std::abs(mean(d)));
        }
    }
    int witnessed = 0, non_members = 0;
    while (non_members < 20) {
        const UnitaryCoin c = random_coin(rng);
        const QubitState s = random_state(rng);
        const WalkType wt = non_members % 2 ? WalkType::G : WalkType::A;
        if (classify_symmetry(c, wt, s)) continue;
        ++non_members;
        AmplitudeField f = initial_field(s, wt);
        const PQRSBasis b = pqrs(c, wt);
        double worst = 0.0;
        for (int n = 1; n <= 15; ++n) {
            f = step(f, b);
            worst = std::max(worst, std::abs(mean(distribution(f))));
        }
        if (worst > 1e-6) ++witnessed;
    }
    report(7, "symmetric states <=> mirror distributions <=> zero mean",
           classified && mirror < 1e-12 && member_mean < 1e-12 && witnessed == 20,
           "members: mirror residual " + sci(mirror) + ", max |mean| " + sci(member_mean) + "; non-members with |mean| > 1e-6: " +
               std::to_string(witnessed) + "/20");
}

void criterion8() {
    const UnitaryCoin h = hadamard_coin();
    const int n = 1000;
    const Distribution sym = distribution(evolve(QubitState::symmetric(), h, WalkType::A, n));
    const Distribution r = distribution(evolve(QubitState::right(), h, WalkType::A, n));
    const double sd_sym = standard_deviation(sym) / n;
    const double mean_r = mean(r) / n, sd_r = standard_deviation(r) / n;
    const double ks_sym = kolmogorov_distance(sym, make_limit_density(h, WalkType::A, QubitState::symmetric()));
    const double ks_r = kolmogorov_distance(r, make_limit_density(h, WalkType::A, QubitState::right()));
    const bool ok = std::abs(sd_sym - k::sd_sym) < 1e-2 && std::abs(mean_r - k::mean_r) < 1e-2 &&
                    std::abs(sd_r - k::sd_r) < 1e-2 && ks_sym <= 0.05 && ks_r <= 0.05 &&
                    std::abs(sd_sym - k::sd_sym) < std::abs(0.6 - k::sd_sym) &&
                    std::abs(sd_r - k::sd_r) < std::abs(0.4544 - k::sd_r);
    report(8, "limit constants at n = 1000", ok,
           "sym sd/n " + verify::fixed(sd_sym) + ", R mean/n " + verify::fixed(mean_r) + ", R sd/n " +
               verify::fixed(sd_r) + "; Kolmogorov " + sci(ks_sym) + " (sym), " + sci(ks_r) + " (R)");
}

void criterion9() {
    std::mt19937_64 rng(109);
    double norm = 0.0, moments = 0.0;
    for (int i = 0; i < 20; ++i) {
        const LimitDensity d = make_limit_density(random_coin(rng), i % 2 ? WalkType::G : WalkType::A, random_state(rng));
        norm = std::max(norm, std::abs(cdf_interval(d, -1.0, 1.0) - 1.0));
        moments = std::max({moments, std::abs(integrate_moment(d, -1.0, 1.0, 1) - limit_mean(d)),
                            std::abs(integrate_moment(d, -1.0, 1.0, 2) - limit_second_moment(d))});
    }
    double jac = 0.0;
    for (const UnitaryCoin& c : {hadamard_coin(), h_rho_coin(0.3), gudder_coin(0.8)})
        for (int kk = 1; kk <= 8; ++kk)
            for (int n = 2 * kk; n <= 40; ++n) jac = std::max(jac, jacobi_identity_residual(kk, n, c));
    report(9, "limit density normalization, moments, Jacobi identities",
           norm < 1e-8 && moments < 1e-8 && jac < 1e-9,
           "normalization " + sci(norm) + ", moments " + sci(moments) + ", Jacobi " + sci(jac));
}

void criterion10() {
    std::mt19937_64 rng(110);
    double ortho = 0.0, table = 0.0, ident = 0.0;
    for (int i = 0; i < 50; ++i) {
        const UnitaryCoin c = random_coin(rng);
        for (WalkType wt : {WalkType::A, WalkType::G}) {
            const PQRSBasis b = pqrs(c, wt);
            ortho = std::max(ortho, orthonormality_residual(b));
            for (Label l : {Label::P, Label::Q, Label::R, Label::S})
                for (Label r : {Label::P, Label::Q, Label::R, Label::S}) {
                    const BasisProduct bp = basis_product(l, r, c);
                    const BasisCombo got = expand(b[l] * b[r], b);
                    for (Label e : {Label::P, Label::Q, Label::R, Label::S})
                        table = std::max(table, std::abs(got[e] - (e == bp.label ? bp.scalar : Complex{})));
                }
            const BasisCombo id = expand(Matrix2::identity(), b);
            ident = std::max(ident, max_abs_diff(id, BasisCombo{std::conj(c.a()), std::conj(c.d()), std::conj(c.c()),
                                                                std::conj(c.b()), wt}));
        }
    }
    const UnitaryCoin h = hadamard_coin();
    const HittingSeries s = hitting_series(AbsorptionSpec::finite(h, WalkType::A, 3, 1), 5);
    const double path = std::abs(s.r[5] - h.a() * h.b() * h.b() * h.c());
    report(10, "basis orthonormality, product table, identity expansion, path value",
           ortho < kUnitTol && table < kExpandTol && ident < kExpandTol && path < kExpandTol,
           "orthonormality " + sci(ortho) + ", table " + sci(table) + ", identity " + sci(ident) + ", path " + sci(path));
}

void criterion11() {
    double dual = 0.0;
    for (int N = 3; N <= 6; ++N)
        for (int kk = 1; kk < N; ++kk) {
            const HittingSeries s = hitting_series(AbsorptionSpec::finite(hadamard_coin(), WalkType::A, N, kk), 60);
            const auto pt = oracle::taylor([&](Complex z) { return genfun_finite_hadamard(N, kk, z).p_tilde; }, 0.9, 256, 60);
            const auto rt = oracle::taylor([&](Complex z) { return genfun_finite_hadamard(N, kk, z).r_tilde; }, 0.9, 256, 60);
            for (int n = 0; n <= 60; ++n)
                dual = std::max({dual, std::abs(pt[n] - s.p[n]), std::abs(rt[n] - s.r[n])});
        }
    std::mt19937_64 rng(111);
    std::uniform_real_distribution<double> rad(0.05, 0.95), ang(0.0, 2.0 * std::numbers::pi);
    double cor = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Complex z = std::polar(rad(rng), ang(rng));
        for (int N = 3; N <= 8; ++N)
            cor = std::max(cor, std::abs(genfun_r1_corollary(N, z) - genfun_finite_hadamard(N, 1, z).r_tilde));
    }
    report(11, "generating functions vs recurrence, two closed forms agree", dual < 1e-9 && cor < 1e-10,
           "Taylor vs recurrence " + sci(dual) + " (n <= 60, N <= 6), closed forms " + sci(cor) + " at 50 points");
}

}  // namespace

int main() {
    const std::function<void()> criteria[] = {criterion1, criterion2, criterion3, criterion4,  criterion5, criterion6,
                                              criterion7, criterion8, criterion9, criterion10, criterion11};
    int id = 1;
    for (const auto& c : criteria) {
        try {
            c();
        } catch (const std::exception& e) {
            report(id, "threw", false, e.what());
        }
        ++id;
    }
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
