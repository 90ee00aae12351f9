#pragma once

#include <stdexcept>
#include <string>

namespace qrw {

// Base for every error raised by the library. Each subclass maps to one
// failure kind so callers (and the CLI) can branch on type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotUnitary : public Error {
public:
    NotUnitary(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class NonFinite : public Error { public: using Error::Error; };
class ParamOutOfRange : public Error { public: using Error::Error; };
class ParseError : public Error { public: using Error::Error; };
class TypeMismatch : public Error { public: using Error::Error; };
class NormDrift : public Error { public: using Error::Error; };
class TooLarge : public Error { public: using Error::Error; };
class CoinHasZeroEntry : public Error { public: using Error::Error; };
class OutOfRange : public Error { public: using Error::Error; };
class UnsupportedCoin : public Error { public: using Error::Error; };
class ZeroDenominator : public Error { public: using Error::Error; };
class SingularPoint : public Error { public: using Error::Error; };
class NoConvergence : public Error { public: using Error::Error; };

// Numerical failures (as opposed to bad input). The CLI exits 3 on these.
inline bool is_numerical_failure(const Error& e) {
    return dynamic_cast<const SingularPoint*>(&e) != nullptr ||
           dynamic_cast<const ZeroDenominator*>(&e) != nullptr ||
           dynamic_cast<const NormDrift*>(&e) != nullptr ||
           dynamic_cast<const NoConvergence*>(&e) != nullptr;
}

}  // namespace qrw
