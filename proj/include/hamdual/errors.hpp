#pragma once

#include <stdexcept>
#include <string>

namespace hamdual {

/// Base class for failures of a numerical procedure (as opposed to invalid
/// arguments, which raise std::invalid_argument / std::domain_error).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The hypergeometric series did not meet its tail criterion within the
/// configured number of terms.
class TruncationError : public NumericalError {
public:
    TruncationError(const std::string& what, double partial_sum, int terms)
        : NumericalError(what), partial_sum_(partial_sum), terms_(terms) {}

    double partial_sum() const noexcept { return partial_sum_; }
    int terms() const noexcept { return terms_; }

private:
    double partial_sum_;
    int terms_;
};

/// No sign change of N_alpha was found before the scan limit.
class ZeroNotFoundError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Bracket expansion exceeded its cap, or the objective became non-finite.
class CoercivityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A bracket showed an interior dip where a unimodal function was expected.
class ConvexityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The minimax/maximin certificate did not close to the requested tolerance.
class SaddleConvergenceError : public NumericalError {
public:
    SaddleConvergenceError(const std::string& what, double gap)
        : NumericalError(what), gap_(gap) {}
    double gap() const noexcept { return gap_; }

private:
    double gap_;
};

/// A residual was requested too close to the curve where U is only C^1.
class SeamProximityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace hamdual
