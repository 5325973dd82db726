#pragma once

#include "hamdual/errors.hpp"

namespace hamdual::specfun {

/// Controls the truncation of the series for N_alpha.
struct SeriesConfig {
    double rel_tol = 1e-14;
    int max_terms = 500;

    /// Throws std::invalid_argument unless rel_tol > 0 and max_terms >= 10.
    void validate() const;
};

/// Value and first two derivatives of N_alpha at a point.
struct NValue {
    double value;
    double d1;
    double d2;
};

/// Sign-changing bracket around a zero of N_alpha.
struct ZeroBracket {
    double lo;
    double hi;
};

/// N_alpha(x) = 1F1(-alpha/2, 1/2, x^2/2), the even solution of
/// N'' - x N' + alpha N = 0 with N(0) = 1, N'(0) = 0.
///
/// Summed as sum_m (-2x^2)^m / (2m)! * (alpha/2)(alpha/2 - 1)...(alpha/2 - m + 1).
/// The sum stops once |term| / |partial sum| < rel_tol for three consecutive
/// terms and m > x^2 (the terms grow before they decay). Any real alpha is
/// accepted here; the public entry points below require alpha > 0.
double n_series(double alpha, double x, const SeriesConfig& cfg = {});

/// N_alpha and its derivatives. N' is the term-wise derivative of the series,
/// N'' = -alpha * N_{alpha-2}.
NValue eval_n(double alpha, double x, const SeriesConfig& cfg = {});

/// Term-wise second derivative of the series. Kept as an independent route
/// for checking eval_n().d2.
double n_second_derivative_termwise(double alpha, double x, const SeriesConfig& cfg = {});

/// Default bisection tolerance for smallest_zero.
inline constexpr double kZeroTol = 1e-14;

/// Upper end of the expanding scan used for 0 < alpha < 2.
inline constexpr double kZeroScanLimit = 64.0;

/// First sign change of N_alpha on (0, inf), located by a forward scan from 0
/// with step min(0.01, sqrt(2/alpha)/10).
ZeroBracket first_sign_change(double alpha, const SeriesConfig& cfg = {});

/// Smallest positive zero s_alpha of N_alpha, bisected to `tol`.
double smallest_zero(double alpha, const SeriesConfig& cfg = {}, double tol = kZeroTol);

/// Probabilists' Hermite polynomial He_m(x) by the three-term recurrence.
double hermite_poly(int m, double x);

/// Gamma function for x > 0 (Lanczos approximation, g = 7, 9 coefficients,
/// with the shift Gamma(x) = Gamma(x + 1) / x below 0.5). Relative error is
/// about 1e-15 on [0.5, 3].
double gamma_fn(double x);

/// The root p0 in (1, 2) of Gamma((p + 1) / 2) = sqrt(pi) / 2, about 1.8474.
/// (p = 2 is the other solution and is excluded by the bracket [1, 1.9].)
double solve_p0(double tol = 1e-13);

}  // namespace hamdual::specfun
