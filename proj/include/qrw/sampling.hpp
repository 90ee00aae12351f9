#pragma once

// Seeded generators for coins and qubit states, shared by the verification
// batteries and the tests.

#include <cmath>
#include <numbers>
#include <random>

#include "qrw/coin.hpp"

namespace qrw {

// U = [[a, b], [-det conj(b), det conj(a)]] with |a| = cos t, t drawn so that
// every entry stays well away from zero.
template <typename Rng>
UnitaryCoin random_coin(Rng& rng, double t_lo = 0.2, double t_hi = 1.37) {
    std::uniform_real_distribution<double> angle(t_lo, t_hi);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double t = angle(rng);
    const Complex a = std::polar(std::cos(t), phase(rng));
    const Complex b = std::polar(std::sin(t), phase(rng));
    const Complex det = std::polar(1.0, phase(rng));
    return make_coin(a, b, -det * std::conj(b), det * std::conj(a));
}

// Uniform on the Bloch sphere.
template <typename Rng>
QubitState random_state(Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double cos_theta = 2.0 * unit(rng) - 1.0;
    const double half = 0.5 * std::acos(cos_theta);
    return {std::polar(std::cos(half), phase(rng)), std::polar(std::sin(half), phase(rng))};
}

// A state with |alpha| = |beta| and Theta_j = 0. `branch` (0 or 1) picks one
// of the two relative phases that zero Theta_j; `global` rotates both entries.
inline QubitState balanced_state(const UnitaryCoin& coin, WalkType wt, int branch,
                                 double global = 0.0) {
    // Theta_A = Re(a conj(b) e^{-i phi}), Theta_G = Re(a conj(c) e^{i phi}) up to a factor,
    // for alpha = 1/sqrt2, beta = e^{i phi}/sqrt2.
    const double base = wt == WalkType::A ? std::arg(coin.a() * std::conj(coin.b()))
                                          : -std::arg(coin.a() * std::conj(coin.c()));
    const double phi = base + (branch ? -0.5 : 0.5) * std::numbers::pi;
    const double s = 1.0 / std::numbers::sqrt2;
    return {std::polar(s, global), std::polar(s, global + phi)};
}

}  // namespace qrw
