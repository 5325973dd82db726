#pragma once

// One-dimensional search on half-lines and the real line: bracket by doubling,
// then refine with Brent's method (golden section + parabolic steps).

#include <cmath>
#include <limits>
#include <sstream>

#include "hamdual/errors.hpp"

namespace hamdual::optimize {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval with possibly infinite ends.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

/// Bracket half-width cap (2^40).
inline constexpr double kBracketCap = 1099511627776.0;

struct Extremum {
    double arg = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

namespace detail {

template <class F>
double checked(F& f, double x, int& evals) {
    ++evals;
    const double v = f(x);
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "objective is not finite at " << x << " (value " << v << ")";
        throw CoercivityError(os.str());
    }
    return v;
}

}  // namespace detail

/// Maximizes a concave f over `dom`, starting the bracket at `start` with
/// half-width 1. The bracket doubles toward increasing values until both ends
/// fall below the interior point (or hit the domain boundary). Throws
/// CoercivityError past kBracketCap or on non-finite values, ConvexityError
/// when both ends rise above the interior point.
///
/// `xtol` is the relative argument tolerance handed to Brent's method.
template <class F>
Extremum maximize_concave(F&& f, Interval dom, double start, double xtol) {
    int evals = 0;
    double b = dom.clamp(start);
    double fb = detail::checked(f, b, evals);
    double h = 1.0;
    double a = dom.clamp(b - h);
    double c = dom.clamp(b + h);
    double fa = a == b ? fb : detail::checked(f, a, evals);
    double fc = c == b ? fb : detail::checked(f, c, evals);

    while (true) {
        const bool right_up = c > b && fc > fb;
        const bool left_up = a < b && fa > fb;
        if (right_up && left_up) {
            std::ostringstream os;
            os << "interior dip in bracket [" << a << ", " << b << ", " << c << "]";
            throw ConvexityError(os.str());
        }
        if (!right_up && !left_up) break;
        h *= 2.0;
        if (h > kBracketCap) throw CoercivityError("bracket expansion exceeded 2^40");
        if (right_up) {
            a = b;
            fa = fb;
            b = c;
            fb = fc;
            c = dom.clamp(b + h);
            fc = c == b ? fb : detail::checked(f, c, evals);
        } else {
            c = b;
            fc = fb;
            b = a;
            fb = fa;
            a = dom.clamp(b - h);
            fa = a == b ? fb : detail::checked(f, a, evals);
        }
    }

    Extremum best{b, fb, 0};
    if (fa > best.value) best = {a, fa, 0};
    if (fc > best.value) best = {c, fc, 0};
    if (c - a <= 0.0) {
        best.evaluations = evals;
        return best;
    }

    // Brent's method on g = -f over [a, c] with b as the first interior point.
    constexpr double kGolden = 0.3819660112501051;
    constexpr double kTiny = 1e-300;
    double lo = a, hi = c;
    double x = b, w = b, v = b;
    double gx = -fb, gw = -fb, gv = -fb;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double tol1 = xtol * std::abs(x) + xtol * 1e-3 + kTiny;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - mid) <= tol2 - 0.5 * (hi - lo)) break;
        bool golden = true;
        if (std::abs(e) > tol1) {
            double r = (x - w) * (gx - gv);
            double q = (x - v) * (gx - gw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double etemp = e;
            e = d;
            if (!(std::abs(p) >= std::abs(0.5 * q * etemp) || p <= q * (lo - x) || p >= q * (hi - x))) {
                d = p / q;
                const double u = x + d;
                if (u - lo < tol2 || hi - u < tol2) d = mid - x >= 0.0 ? tol1 : -tol1;
                golden = false;
            }
        }
        if (golden) {
            e = (x >= mid ? lo : hi) - x;
            d = kGolden * e;
        }
        const double u = std::abs(d) >= tol1 ? x + d : x + (d >= 0.0 ? tol1 : -tol1);
        const double gu = -detail::checked(f, u, evals);
        if (gu <= gx) {
            (u >= x ? lo : hi) = x;
            v = w;
            gv = gw;
            w = x;
            gw = gx;
            x = u;
            gx = gu;
        } else {
            (u < x ? lo : hi) = u;
            if (gu <= gw || w == x) {
                v = w;
                gv = gw;
                w = u;
                gw = gu;
            } else if (gu <= gv || v == x || v == w) {
                v = u;
                gv = gu;
            }
        }
    }
    if (-gx > best.value) best = {x, -gx, 0};
    best.evaluations = evals;
    return best;
}

/// Minimizes a convex f over `dom`; same contract as maximize_concave.
template <class F>
Extremum minimize_convex(F&& f, Interval dom, double start, double xtol) {
    auto neg = [&f](double x) { return -f(x); };
    Extremum r = maximize_concave(neg, dom, start, xtol);
    r.value = -r.value;
    return r;
}

}  // namespace hamdual::optimize
