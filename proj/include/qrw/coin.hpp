#pragma once

// Coin matrices, walk types, qubit states and the PQRS basis.
//
// A coin is a 2x2 unitary U = [[a, b], [c, d]]. The walk splits U = P + Q
// into a left mover P and a right mover Q; the A-type walk splits by rows,
// the G-type walk by columns. Together with R and S the four matrices form
// an orthonormal basis of M_2(C) under <X|Y> = tr(X* Y), and products of
// basis elements close on the basis (see basis_product).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qrw/error.hpp"

namespace qrw {

using Complex = std::complex<double>;

inline constexpr double kUnitTol = 1e-10;    // unitarity / orthonormality
inline constexpr double kExpandTol = 1e-12;  // basis expansion round trips

inline constexpr Complex kI{0.0, 1.0};

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Integer power by repeated squaring; z^0 == 1 for every z.
inline Complex ipow(Complex z, int e) {
    if (e < 0) return 1.0 / ipow(z, -e);
    Complex result{1.0, 0.0};
    while (e > 0) {
        if (e & 1) result *= z;
        z *= z;
        e >>= 1;
    }
    return result;
}

// Two-component amplitude: upper = left chirality, lower = right chirality.
struct Spinor {
    Complex left{};
    Complex right{};

    double norm2() const { return std::norm(left) + std::norm(right); }
    bool is_zero() const { return left == Complex{} && right == Complex{}; }

    Spinor& operator+=(const Spinor& o) {
        left += o.left;
        right += o.right;
        return *this;
    }
    friend Spinor operator+(Spinor x, const Spinor& y) { return x += y; }
};

// Row-major 2x2 complex matrix.
struct Matrix2 {
    std::array<Complex, 4> e{};

    static Matrix2 identity() { return {{Complex{1}, Complex{}, Complex{}, Complex{1}}}; }
    static Matrix2 zero() { return {}; }

    Complex operator()(int row, int col) const { return e[2 * row + col]; }
    Complex& operator()(int row, int col) { return e[2 * row + col]; }

    Matrix2& operator+=(const Matrix2& o) {
        for (int i = 0; i < 4; ++i) e[i] += o.e[i];
        return *this;
    }
    friend Matrix2 operator+(Matrix2 x, const Matrix2& y) { return x += y; }
    friend Matrix2 operator-(Matrix2 x, const Matrix2& y) {
        for (int i = 0; i < 4; ++i) x.e[i] -= y.e[i];
        return x;
    }
    friend Matrix2 operator*(Complex s, Matrix2 x) {
        for (auto& v : x.e) v *= s;
        return x;
    }
    friend Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
        return {{x.e[0] * y.e[0] + x.e[1] * y.e[2], x.e[0] * y.e[1] + x.e[1] * y.e[3],
                 x.e[2] * y.e[0] + x.e[3] * y.e[2], x.e[2] * y.e[1] + x.e[3] * y.e[3]}};
    }
    friend Spinor operator*(const Matrix2& x, const Spinor& v) {
        return {x.e[0] * v.left + x.e[1] * v.right, x.e[2] * v.left + x.e[3] * v.right};
    }

    // Largest entrywise modulus of the difference.
    friend double max_abs_diff(const Matrix2& x, const Matrix2& y) {
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(x.e[i] - y.e[i]));
        return worst;
    }
};

// tr(X* Y)
inline Complex trace_inner(const Matrix2& x, const Matrix2& y) {
    Complex acc{};
    for (int i = 0; i < 4; ++i) acc += std::conj(x.e[i]) * y.e[i];
    return acc;
}

enum class WalkType { A, G };

inline const char* to_string(WalkType wt) { return wt == WalkType::A ? "A" : "G"; }

inline WalkType parse_walk_type(std::string_view s) {
    if (s == "a" || s == "A") return WalkType::A;
    if (s == "g" || s == "G") return WalkType::G;
    throw ParseError("walk type must be 'a' or 'g', got '" + std::string(s) + "'");
}

class UnitaryCoin {
public:
    Complex a() const { return a_; }
    Complex b() const { return b_; }
    Complex c() const { return c_; }
    Complex d() const { return d_; }
    Complex det() const { return det_; }
    bool abcd_nonzero() const { return abcd_nonzero_; }

    Matrix2 matrix() const { return {{a_, b_, c_, d_}}; }

    friend UnitaryCoin make_coin(Complex a, Complex b, Complex c, Complex d);

private:
    UnitaryCoin() = default;

    Complex a_, b_, c_, d_, det_;
    bool abcd_nonzero_ = false;
};

// Worst violation over all unitarity relations of [[a,b],[c,d]].
inline double unitarity_residual(Complex a, Complex b, Complex c, Complex d) {
    const Complex det = a * d - b * c;
    const double residuals[] = {
        std::abs(std::norm(a) + std::norm(b) - 1.0),
        std::abs(std::norm(c) + std::norm(d) - 1.0),
        std::abs(a * std::conj(c) + b * std::conj(d)),
        std::abs(std::abs(det) - 1.0),
        std::abs(c + det * std::conj(b)),
        std::abs(d - det * std::conj(a)),
    };
    return *std::max_element(std::begin(residuals), std::end(residuals));
}

// Validates without re-normalizing.
inline UnitaryCoin make_coin(Complex a, Complex b, Complex c, Complex d) {
    if (!is_finite(a) || !is_finite(b) || !is_finite(c) || !is_finite(d))
        throw NonFinite("coin entries must be finite");
    const double residual = unitarity_residual(a, b, c, d);
    if (residual > kUnitTol) {
        std::ostringstream msg;
        msg.precision(3);
        msg << "coin is not unitary (worst residual " << residual << ")";
        throw NotUnitary(msg.str(), residual);
    }
    UnitaryCoin coin;
    coin.a_ = a;
    coin.b_ = b;
    coin.c_ = c;
    coin.d_ = d;
    coin.det_ = a * d - b * c;
    coin.abcd_nonzero_ =
        std::min({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}) > kUnitTol;
    return coin;
}

inline UnitaryCoin hadamard_coin() {
    const double s = 1.0 / std::numbers::sqrt2;
    return make_coin(s, s, s, -s);
}

// H(rho) = [[sqrt(rho), sqrt(1-rho)], [sqrt(1-rho), -sqrt(rho)]], rho in [0,1].
inline UnitaryCoin h_rho_coin(double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw ParamOutOfRange("h_rho needs rho in [0,1]");
    const double x = std::sqrt(rho), y = std::sqrt(1.0 - rho);
    return make_coin(x, y, y, -x);
}

// [[a, ib], [ib, a]] with b = sqrt(1 - a^2), a in (0,1).
inline UnitaryCoin gudder_coin(double a) {
    if (!(a > 0.0 && a < 1.0)) throw ParamOutOfRange("gudder needs a in (0,1)");
    const Complex ib = kI * std::sqrt(1.0 - a * a);
    return make_coin(a, ib, ib, a);
}

// e^{i eta}/sqrt2 [[e^{i(phi+psi)}, e^{-i(phi-psi)}], [e^{i(phi-psi)}, -e^{-i(phi+psi)}]]
inline UnitaryCoin u_eta_phi_psi_coin(double eta, double phi, double psi) {
    if (!std::isfinite(eta) || !std::isfinite(phi) || !std::isfinite(psi))
        throw ParamOutOfRange("u_eta_phi_psi needs three finite reals");
    const Complex g = std::polar(1.0 / std::numbers::sqrt2, eta);
    return make_coin(g * std::polar(1.0, phi + psi), g * std::polar(1.0, -(phi - psi)),
                     g * std::polar(1.0, phi - psi), -g * std::polar(1.0, -(phi + psi)));
}

inline UnitaryCoin named_coin(std::string_view name, const std::vector<double>& params) {
    auto need = [&](std::size_t count) {
        if (params.size() != count)
            throw ParamOutOfRange(std::string(name) + " takes " + std::to_string(count) +
                                  " parameter(s)");
    };
    if (name == "hadamard") {
        need(0);
        return hadamard_coin();
    }
    if (name == "h_rho") {
        need(1);
        return h_rho_coin(params[0]);
    }
    if (name == "gudder") {
        need(1);
        return gudder_coin(params[0]);
    }
    if (name == "u_eta_phi_psi") {
        need(3);
        return u_eta_phi_psi_coin(params[0], params[1], params[2]);
    }
    throw ParamOutOfRange("unknown coin '" + std::string(name) + "'");
}

inline bool is_hadamard(const UnitaryCoin& coin) {
    return max_abs_diff(coin.matrix(), hadamard_coin().matrix()) <= kUnitTol;
}

class QubitState {
public:
    QubitState(Complex alpha, Complex beta) : alpha_(alpha), beta_(beta) {
        if (!is_finite(alpha) || !is_finite(beta))
            throw NonFinite("qubit state entries must be finite");
        if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kUnitTol)
            throw ParamOutOfRange("qubit state must satisfy |alpha|^2 + |beta|^2 = 1");
    }

    Complex alpha() const { return alpha_; }
    Complex beta() const { return beta_; }
    Spinor spinor() const { return {alpha_, beta_}; }

    static QubitState left() { return {1.0, 0.0}; }
    static QubitState right() { return {0.0, 1.0}; }
    // (1/sqrt2, i/sqrt2)
    static QubitState symmetric() {
        const double s = 1.0 / std::numbers::sqrt2;
        return {s, Complex{0.0, s}};
    }

private:
    Complex alpha_, beta_;
};

// ---------------------------------------------------------------------------
// PQRS basis

enum class Label { P = 0, Q = 1, R = 2, S = 3 };

inline char to_char(Label l) { return "PQRS"[static_cast<int>(l)]; }

struct PQRSBasis {
    Matrix2 P, Q, R, S;
    WalkType walk_type;
    UnitaryCoin coin;

    const Matrix2& operator[](Label l) const {
        switch (l) {
            case Label::P: return P;
            case Label::Q: return Q;
            case Label::R: return R;
            case Label::S: return S;
        }
        return P;
    }
};

inline PQRSBasis pqrs(const UnitaryCoin& coin, WalkType wt) {
    const Complex a = coin.a(), b = coin.b(), c = coin.c(), d = coin.d();
    const Complex o{};
    if (wt == WalkType::A) {
        return {{{a, b, o, o}}, {{o, o, c, d}}, {{c, d, o, o}}, {{o, o, a, b}}, wt, coin};
    }
    return {{{a, o, c, o}}, {{o, b, o, d}}, {{o, a, o, c}}, {{b, o, d, o}}, wt, coin};
}

// max |tr(E_i* E_j) - delta_ij| over the 16 pairs.
inline double orthonormality_residual(const PQRSBasis& basis) {
    const std::array<const Matrix2*, 4> e{&basis.P, &basis.Q, &basis.R, &basis.S};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            worst = std::max(worst, std::abs(trace_inner(*e[i], *e[j]) - (i == j ? 1.0 : 0.0)));
    return worst;
}

// Coefficients of a matrix in the PQRS basis of one walk type.
struct BasisCombo {
    Complex p{}, q{}, r{}, s{};
    WalkType basis_type = WalkType::A;

    Complex operator[](Label l) const {
        switch (l) {
            case Label::P: return p;
            case Label::Q: return q;
            case Label::R: return r;
            case Label::S: return s;
        }
        return p;
    }

    friend double max_abs_diff(const BasisCombo& x, const BasisCombo& y) {
        return std::max({std::abs(x.p - y.p), std::abs(x.q - y.q), std::abs(x.r - y.r),
                         std::abs(x.s - y.s)});
    }
};

inline BasisCombo expand(const Matrix2& x, const PQRSBasis& basis) {
    return {trace_inner(basis.P, x), trace_inner(basis.Q, x), trace_inner(basis.R, x),
            trace_inner(basis.S, x), basis.walk_type};
}

inline Matrix2 recombine(const BasisCombo& combo, const PQRSBasis& basis) {
    return combo.p * basis.P + combo.q * basis.Q + combo.r * basis.R + combo.s * basis.S;
}

struct BasisProduct {
    Complex scalar;
    Label label;
};

// lhs * rhs = scalar * label, identical for both walk types:
//
//        P    Q    R    S
//   P   aP   bR   aR   bP
//   Q   cS   dQ   cQ   dS
//   R   cP   dR   cR   dP
//   S   aS   bQ   aQ   bS
inline BasisProduct basis_product(Label lhs, Label rhs, const UnitaryCoin& coin) {
    // Row picks the scalar pair; column picks which of the pair and the label.
    const bool lhs_top = lhs == Label::P || lhs == Label::S;  // scalars a,b vs c,d
    const bool rhs_odd = rhs == Label::Q || rhs == Label::S;  // second scalar of the pair
    const Complex scalar = lhs_top ? (rhs_odd ? coin.b() : coin.a())
                                   : (rhs_odd ? coin.d() : coin.c());
    static constexpr Label table[4][4] = {
        {Label::P, Label::R, Label::R, Label::P},
        {Label::S, Label::Q, Label::Q, Label::S},
        {Label::P, Label::R, Label::R, Label::P},
        {Label::S, Label::Q, Label::Q, Label::S},
    };
    return {scalar, table[static_cast<int>(lhs)][static_cast<int>(rhs)]};
}

// ---------------------------------------------------------------------------
// Text grammars shared with the CLI.
//
//   coin:  hadamard | h_rho:<rho> | gudder:<a> | u:<eta>,<phi>,<psi>
//          | raw:<a_re>,<a_im>,<b_re>,<b_im>,<c_re>,<c_im>,<d_re>,<d_im>
//   state: L | R | sym | raw:<alpha_re>,<alpha_im>,<beta_re>,<beta_im>

namespace detail {

inline std::vector<double> parse_numbers(std::string_view text, std::string_view what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        std::string token(text.substr(pos, comma == std::string_view::npos ? text.size() - pos
                                                                           : comma - pos));
        try {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("bad number '" + token + "' in " + std::string(what));
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace detail

inline UnitaryCoin parse_coin(std::string_view spec) {
    const std::size_t colon = spec.find(':');
    const std::string_view head = spec.substr(0, colon);
    const std::string_view tail =
        colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    auto args = [&](std::size_t count) {
        if (colon == std::string_view::npos)
            throw ParseError("coin '" + std::string(head) + "' needs parameters");
        auto v = detail::parse_numbers(tail, "coin spec");
        if (v.size() != count)
            throw ParseError("coin '" + std::string(head) + "' takes " + std::to_string(count) +
                             " number(s)");
        return v;
    };
    if (head == "hadamard" && colon == std::string_view::npos) return hadamard_coin();
    if (head == "h_rho") return named_coin("h_rho", args(1));
    if (head == "gudder") return named_coin("gudder", args(1));
    if (head == "u") return named_coin("u_eta_phi_psi", args(3));
    if (head == "raw") {
        const auto v = args(8);
        return make_coin({v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]});
    }
    throw ParseError("unrecognised coin spec '" + std::string(spec) + "'");
}

inline QubitState parse_state(std::string_view spec) {
    if (spec == "L") return QubitState::left();
    if (spec == "R") return QubitState::right();
    if (spec == "sym") return QubitState::symmetric();
    if (spec.starts_with("raw:")) {
        const auto v = detail::parse_numbers(spec.substr(4), "state spec");
        if (v.size() != 4) throw ParseError("raw state takes 4 numbers");
        return QubitState({v[0], v[1]}, {v[2], v[3]});
    }
    throw ParseError("unrecognised state spec '" + std::string(spec) + "'");
}

}  // namespace qrw
