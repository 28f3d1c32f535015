#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqed {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Thrown when a spec/type invariant is violated (bad user input).
struct InvalidSpec : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when an operation's stated precondition does not hold.
struct PreconditionError : std::domain_error {
    using std::domain_error::domain_error;
};

// Exactly (or numerically) singular steady-state system.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Effective rate diverges (the single-mode description failure mode).
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature or refinement failed to converge to the requested accuracy.
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Optional sink for non-fatal diagnostics; pass nullptr to discard.
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string msg) {
    if (sink) sink->push_back(std::move(msg));
}

}  // namespace cqed
