#include "hamdual/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hamdual::specfun {

void SeriesConfig::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("SeriesConfig: rel_tol must be > 0");
    if (max_terms < 10) throw std::invalid_argument("SeriesConfig: max_terms must be >= 10");
}

namespace {

// Tracks the "three consecutive small terms" stopping rule for one series.
class TailTracker {
public:
    explicit TailTracker(double rel_tol) : rel_tol_(rel_tol) {}

    void observe(double term, double sum) {
        const bool small = term == 0.0 || std::abs(term) < rel_tol_ * std::abs(sum);
        run_ = small ? run_ + 1 : 0;
    }
    bool done() const { return run_ >= 3; }

private:
    double rel_tol_;
    int run_ = 0;
};

[[noreturn]] void throw_truncation(double alpha, double x, double partial, int terms) {
    std::ostringstream os;
    os << "N_alpha series did not converge (alpha=" << alpha << ", x=" << x << ", terms=" << terms
       << ")";
    throw TruncationError(os.str(), partial, terms);
}

// Series for N and, optionally, its term-wise derivatives of order 1 and 2.
struct SeriesSums {
    double value = 1.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

SeriesSums sum_series(double alpha, double x, const SeriesConfig& cfg, bool want_d1, bool want_d2) {
    cfg.validate();
    SeriesSums s;
    if (x == 0.0) {
        s.d2 = -alpha;
        return s;
    }
    const double half = 0.5 * alpha;
    const double x2 = x * x;
    TailTracker tv(cfg.rel_tol), t1(cfg.rel_tol), t2(cfg.rel_tol);
    double term = 1.0;
    for (int m = 1; m <= cfg.max_terms; ++m) {
        const double md = static_cast<double>(m);
        term *= (-2.0 * x2) * (half - md + 1.0) / ((2.0 * md - 1.0) * (2.0 * md));
        s.value += term;
        tv.observe(term, s.value);
        bool done = tv.done();
        if (want_d1) {
            const double dt = term * (2.0 * md) / x;
            s.d1 += dt;
            t1.observe(dt, s.d1);
            done = done && t1.done();
        }
        if (want_d2) {
            const double dt = term * (2.0 * md) * (2.0 * md - 1.0) / x2;
            s.d2 += dt;
            t2.observe(dt, s.d2);
            done = done && t2.done();
        }
        if (done && md > x2) return s;
    }
    throw_truncation(alpha, x, s.value, cfg.max_terms);
}

}  // namespace

double n_series(double alpha, double x, const SeriesConfig& cfg) {
    return sum_series(alpha, std::abs(x), cfg, false, false).value;
}

NValue eval_n(double alpha, double x, const SeriesConfig& cfg) {
    if (!(alpha > 0.0)) throw std::domain_error("eval_n: alpha must be > 0");
    const double ax = std::abs(x);
    const SeriesSums s = sum_series(alpha, ax, cfg, true, false);
    // N is even, N' is odd.
    const double d1 = x < 0.0 ? -s.d1 : s.d1;
    return {s.value, d1, -alpha * n_series(alpha - 2.0, ax, cfg)};
}

double n_second_derivative_termwise(double alpha, double x, const SeriesConfig& cfg) {
    return sum_series(alpha, std::abs(x), cfg, false, true).d2;
}

ZeroBracket first_sign_change(double alpha, const SeriesConfig& cfg) {
    if (!(alpha > 0.0)) throw std::domain_error("smallest_zero: alpha must be > 0");
    const double h = std::min(0.01, std::sqrt(2.0 / alpha) / 10.0);
    // alpha >= 2 has its zero in [sqrt(2/alpha), 1]; below 2 the zero moves
    // right of 1 and the scan range doubles until kZeroScanLimit.
    double limit = 1.0;
    double prev_x = 0.0;
    double prev_n = 1.0;
    long k = 0;
    while (true) {
        ++k;
        double xk = static_cast<double>(k) * h;
        if (xk >= limit) xk = limit;
        const double nk = n_series(alpha, xk, cfg);
        if (nk == 0.0) return {xk, xk};
        if (prev_n * nk < 0.0) return {prev_x, xk};
        prev_x = xk;
        prev_n = nk;
        if (xk == limit) {
            if (alpha >= 2.0 || limit >= kZeroScanLimit) {
                std::ostringstream os;
                os << "no sign change of N_alpha on (0, " << limit << "] for alpha=" << alpha;
                throw ZeroNotFoundError(os.str());
            }
            limit *= 2.0;
        }
    }
}

double smallest_zero(double alpha, const SeriesConfig& cfg, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("smallest_zero: tol must be > 0");
    ZeroBracket b = first_sign_change(alpha, cfg);
    if (b.lo == b.hi) return b.lo;
    double n_lo = n_series(alpha, b.lo, cfg);
    for (int it = 0; it < 200 && b.hi - b.lo > tol; ++it) {
        const double mid = 0.5 * (b.lo + b.hi);
        if (mid <= b.lo || mid >= b.hi) break;
        const double nm = n_series(alpha, mid, cfg);
        if (nm == 0.0) return mid;
        if ((nm < 0.0) == (n_lo < 0.0)) {
            b.lo = mid;
            n_lo = nm;
        } else {
            b.hi = mid;
        }
    }
    return 0.5 * (b.lo + b.hi);
}

double hermite_poly(int m, double x) {
    if (m < 0) throw std::invalid_argument("hermite_poly: degree must be >= 0");
    if (m == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int k = 1; k < m; ++k) {
        const double next = x * cur - static_cast<double>(k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: x must be > 0");
    if (x < 0.5) return gamma_fn(x + 1.0) / x;
    static constexpr std::array<double, 9> kLanczos = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double g = 7.0;
    const double z = x - 1.0;
    double acc = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (z + static_cast<double>(i));
    const double t = z + g + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

double solve_p0(double tol) {
    const double target = std::sqrt(std::numbers::pi) / 2.0;
    auto f = [&](double p) { return gamma_fn(0.5 * (p + 1.0)) - target; };
    double lo = 1.0;
    double hi = 1.9;
    // f(1) > 0 > f(1.9)
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace hamdual::specfun
