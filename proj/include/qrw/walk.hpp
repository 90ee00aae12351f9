#pragma once

// Exact amplitude evolution of the unrestricted walk on Z:
//
//   psi_k(n+1) = P psi_{k+1}(n) + Q psi_{k-1}(n)
//
// so P-steps move left and Q-steps move right. Fields are dense arrays over
// [-n, n]; sites with n + k odd are always zero. No renormalization happens
// between steps, drift is measured by distribution().

#include <cmath>
#include <vector>

#include "qrw/coin.hpp"
#include "qrw/error.hpp"

namespace qrw {

inline constexpr double kNormTol = 1e-9;

class AmplitudeField {
public:
    AmplitudeField(int time, WalkType wt) : time_(time), walk_type_(wt), values_(2 * time + 1) {}

    int time() const { return time_; }
    WalkType walk_type() const { return walk_type_; }
    int min_site() const { return -time_; }
    int max_site() const { return time_; }

    // Zero outside [-n, n].
    Spinor at(int k) const {
        if (k < -time_ || k > time_) return {};
        return values_[static_cast<std::size_t>(k + time_)];
    }
    Spinor& operator[](int k) { return values_[static_cast<std::size_t>(k + time_)]; }

    const std::vector<Spinor>& values() const { return values_; }

    double norm2() const {
        double total = 0.0;
        for (const auto& v : values_) total += v.norm2();
        return total;
    }

    bool empty() const {
        for (const auto& v : values_)
            if (!v.is_zero()) return false;
        return true;
    }

private:
    int time_;
    WalkType walk_type_;
    std::vector<Spinor> values_;
};

struct Distribution {
    int time = 0;
    std::vector<double> probs;  // probs[i] is P(X_n = i - time)

    int min_site() const { return -time; }
    int max_site() const { return time; }
    double at(int k) const {
        if (k < -time || k > time) return 0.0;
        return probs[static_cast<std::size_t>(k + time)];
    }
    double total() const {
        double t = 0.0;
        for (double p : probs) t += p;
        return t;
    }
};

inline AmplitudeField initial_field(const QubitState& state, WalkType wt) {
    AmplitudeField field(0, wt);
    field[0] = state.spinor();
    return field;
}

inline AmplitudeField step(const AmplitudeField& field, const PQRSBasis& basis) {
    if (field.walk_type() != basis.walk_type)
        throw TypeMismatch("field and basis have different walk types");
    const int n = field.time();
    AmplitudeField next(n + 1, field.walk_type());
    for (int k = -(n + 1); k <= n + 1; ++k) {
        if (((n + 1 + k) & 1) != 0) continue;
        next[k] = basis.P * field.at(k + 1) + basis.Q * field.at(k - 1);
    }
    return next;
}

inline AmplitudeField evolve(const QubitState& state, const UnitaryCoin& coin, WalkType wt,
                             int n) {
    if (n < 0) throw ParamOutOfRange("evolve needs n >= 0");
    const PQRSBasis basis = pqrs(coin, wt);
    AmplitudeField field = initial_field(state, wt);
    for (int t = 0; t < n; ++t) field = step(field, basis);
    return field;
}

inline Distribution distribution(const AmplitudeField& field) {
    Distribution dist;
    dist.time = field.time();
    dist.probs.reserve(field.values().size());
    for (const auto& v : field.values()) dist.probs.push_back(v.norm2());
    const double total = dist.total();
    if (std::abs(total - 1.0) > kNormTol)
        throw NormDrift("total probability " + std::to_string(total) + " drifted from 1");
    return dist;
}

// sum_k k^m P(X_n = k)
inline double empirical_moment(const Distribution& dist, int m) {
    double acc = 0.0;
    for (int k = dist.min_site(); k <= dist.max_site(); ++k) {
        const double p = dist.at(k);
        if (p != 0.0) acc += std::pow(static_cast<double>(k), m) * p;
    }
    return acc;
}

inline double mean(const Distribution& dist) { return empirical_moment(dist, 1); }

inline double standard_deviation(const Distribution& dist) {
    const double mu = empirical_moment(dist, 1);
    return std::sqrt(std::max(0.0, empirical_moment(dist, 2) - mu * mu));
}

}  // namespace qrw
