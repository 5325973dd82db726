#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hamdual/specfun.hpp"

namespace sf = hamdual::specfun;

namespace {

// Reference values below were produced with mpmath (hyp1f1 at 40 digits,
// findroot for the zeros); they do not depend on this library.
struct NRef {
    double alpha, x, value, d1;
};

const NRef kNRefs[] = {
    {3.0, 0.7, 0.29551593164566028, -1.9241460240163913},
    {4.0, 1.2, -1.1888, -2.496},
    {2.5, 2.0, -2.9452379009675998, -2.5975485390853418},
    {10.0, 0.3, 0.57651711803714289, -2.6496368939999999},
    {6.5, 3.0, 3.5650967206874829, -15.864913622634318},
    {1.0, 1.0, 0.45376360878990052, -1.1949576619102276},
    {1.5, 0.8, 0.50648053253258722, -1.2694924187680073},
    {20.0, 0.2, 0.62349309277593542, -3.5351565603786577},
    {3.0, 4.0, 90.334030165828868, 250.15202535745161},
};

struct ZeroRef {
    double alpha, s;
};

const ZeroRef kZeroRefs[] = {
    {1.0, 1.306929727719281},   {1.5, 1.1222850770638107},  {2.5, 0.91101993619732845},
    {3.0, 0.84241782416478077}, {4.0, 0.74196378430272586}, {5.0, 0.67068608072658638},
    {6.0, 0.61670659019259415}, {10.0, 0.48493570751549765}, {20.0, 0.34696415708135593},
    {50.0, 0.22104518164454322}, {101.0, 0.15591523553994778},
};

double smallest_hermite_root(int m) {
    // First sign change from 0, then bisection.
    const double step = 1e-3;
    double lo = 0.0;
    double flo = sf::hermite_poly(m, lo);
    double hi = step;
    while (sf::hermite_poly(m, hi) * flo > 0.0) {
        lo = hi;
        hi += step;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (sf::hermite_poly(m, mid) * flo > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(SeriesConfig, Validation) {
    EXPECT_NO_THROW(sf::SeriesConfig{}.validate());
    EXPECT_THROW((sf::SeriesConfig{0.0, 500}.validate()), std::invalid_argument);
    EXPECT_THROW((sf::SeriesConfig{1e-14, 9}.validate()), std::invalid_argument);
}

TEST(EvalN, QuadraticCaseAlpha2) {
    const sf::NValue v = sf::eval_n(2.0, 0.5);
    EXPECT_NEAR(v.value, 0.75, 1e-15);
    EXPECT_NEAR(v.d1, -1.0, 1e-15);
    EXPECT_NEAR(v.d2, -2.0, 1e-15);
}

TEST(EvalN, QuarticCaseAlpha4) {
    EXPECT_NEAR(sf::eval_n(4.0, 1.0).value, -2.0 / 3.0, 1e-15);
    for (double x : {0.1, 0.6, 1.3, 2.0}) {
        const double x2 = x * x;
        EXPECT_NEAR(sf::eval_n(4.0, x).value, 1.0 - 2.0 * x2 + x2 * x2 / 3.0, 1e-13) << x;
    }
}

TEST(EvalN, InitialConditions) {
    const sf::NValue v = sf::eval_n(10.0, 0.0);
    EXPECT_EQ(v.value, 1.0);
    EXPECT_EQ(v.d1, 0.0);
    EXPECT_EQ(v.d2, -10.0);
}

TEST(EvalN, MatchesReferenceValues) {
    for (const auto& r : kNRefs) {
        const sf::NValue v = sf::eval_n(r.alpha, r.x);
        const double scale = std::max(1.0, std::abs(r.value));
        EXPECT_NEAR(v.value, r.value, 1e-12 * scale) << r.alpha << " " << r.x;
        EXPECT_NEAR(v.d1, r.d1, 1e-12 * std::max(1.0, std::abs(r.d1))) << r.alpha << " " << r.x;
    }
}

TEST(EvalN, EvenInX) {
    for (double a : {1.0, 2.5, 3.0, 7.0})
        for (double x : {0.2, 0.9, 1.7, 3.1}) {
            EXPECT_EQ(sf::eval_n(a, x).value, sf::eval_n(a, -x).value);
            EXPECT_EQ(sf::eval_n(a, x).d1, -sf::eval_n(a, -x).d1);
        }
}

TEST(EvalN, RejectsNonPositiveAlpha) {
    EXPECT_THROW(sf::eval_n(0.0, 1.0), std::domain_error);
    EXPECT_THROW(sf::eval_n(-1.0, 1.0), std::domain_error);
}

TEST(EvalN, TruncationFailureCarriesPartialSum) {
    const sf::SeriesConfig tight{1e-14, 10};
    try {
        sf::eval_n(3.0, 5.0, tight);
        FAIL() << "expected TruncationError";
    } catch (const hamdual::TruncationError& e) {
        EXPECT_TRUE(std::isfinite(e.partial_sum()));
        EXPECT_EQ(e.terms(), 10);
    }
}

TEST(EvalN, HermiteOdeResidual) {
    for (double a : {2.0, 3.0, 4.0, 6.0, 10.0})
        for (int i = 0; i <= 40; ++i) {
            const double x = 0.05 * i;
            const sf::NValue v = sf::eval_n(a, x);
            EXPECT_LE(std::abs(v.d2 - x * v.d1 + a * v.value), 1e-8) << a << " " << x;
        }
}

TEST(EvalN, SecondDerivativeRoutesAgree) {
    for (double a : {2.0, 3.5, 6.0, 11.0})
        for (double x : {0.0, 0.4, 1.1, 2.2}) {
            const double rec = sf::eval_n(a, x).d2;
            EXPECT_NEAR(sf::n_second_derivative_termwise(a, x), rec, 1e-10 * std::max(1.0, std::abs(rec)))
                << a << " " << x;
        }
}

TEST(SmallestZero, AlphaTwoIsOne) {
    EXPECT_NEAR(sf::smallest_zero(2.0), 1.0, 1e-10);
}

TEST(SmallestZero, AlphaFourClosedForm) {
    EXPECT_NEAR(sf::smallest_zero(4.0), std::sqrt(3.0 - std::sqrt(6.0)), 1e-8);
}

TEST(SmallestZero, AlphaTenInBracket) {
    const double s = sf::smallest_zero(10.0);
    EXPECT_GE(s, std::sqrt(0.2));
    EXPECT_LT(s, 1.0);
}

TEST(SmallestZero, MatchesReferenceZeros) {
    for (const auto& r : kZeroRefs) EXPECT_NEAR(sf::smallest_zero(r.alpha), r.s, 1e-12) << r.alpha;
}

TEST(SmallestZero, IsARootAndTheFirstOne) {
    for (double a : {1.0, 1.5, 2.5, 4.0, 9.0, 30.0}) {
        const double s = sf::smallest_zero(a);
        EXPECT_LE(std::abs(sf::eval_n(a, s).value), 1e-12) << a;
        for (int i = 0; i < 200; ++i) EXPECT_GT(sf::eval_n(a, s * i / 200.0).value, 0.0) << a;
    }
}

TEST(SmallestZero, MonotoneAndBoundedOnGrid) {
    double prev = 2.0;
    for (double a = 2.0; a <= 20.0 + 1e-12; a += 0.5) {
        const double s = sf::smallest_zero(a);
        EXPECT_LE(std::sqrt(2.0 / a), s) << a;
        EXPECT_LE(s, 1.0 + 1e-14) << a;
        EXPECT_LT(s, prev) << a;
        prev = s;
    }
}

TEST(SmallestZero, SignStructureOnFirstArc) {
    for (double a : {2.0, 3.0, 4.0, 6.0, 10.0}) {
        const double s = sf::smallest_zero(a);
        EXPECT_LT(sf::eval_n(a, s).d1, 0.0);
        for (int i = 0; i <= 100; ++i) {
            const sf::NValue v = sf::eval_n(a, s * i / 100.0);
            EXPECT_LE(v.d1, 1e-15);
            EXPECT_LE(v.d2, 1e-12);
        }
    }
}

TEST(SmallestZero, BracketHasSignChange) {
    for (double a : {0.5, 1.0, 2.0, 8.0}) {
        const sf::ZeroBracket b = sf::first_sign_change(a);
        EXPECT_GT(b.lo, 0.0);
        EXPECT_GE(b.hi, b.lo);
        EXPECT_LE(sf::eval_n(a, b.lo).value * sf::eval_n(a, b.hi).value, 0.0);
    }
}

TEST(SmallestZero, HermiteConsistency) {
    for (int k = 1; k <= 4; ++k)
        EXPECT_NEAR(sf::smallest_zero(2.0 * k), smallest_hermite_root(2 * k), 1e-8) << k;
}

TEST(Hermite, SmallCases) {
    EXPECT_EQ(sf::hermite_poly(2, 0.0), -1.0);
    EXPECT_EQ(sf::hermite_poly(4, 1.0), -2.0);
    EXPECT_EQ(sf::hermite_poly(0, 3.7), 1.0);
    EXPECT_EQ(sf::hermite_poly(1, 3.7), 3.7);
    EXPECT_THROW(sf::hermite_poly(-1, 0.0), std::invalid_argument);
}

TEST(Hermite, ProportionalToEvenN) {
    // N_{2k} = He_{2k} / He_{2k}(0).
    for (int k = 1; k <= 4; ++k)
        for (double x : {0.3, 0.8, 1.5}) {
            const double ratio = sf::hermite_poly(2 * k, x) / sf::hermite_poly(2 * k, 0.0);
            EXPECT_NEAR(sf::eval_n(2.0 * k, x).value, ratio, 1e-12) << k << " " << x;
        }
}

TEST(Gamma, HalfIntegerAndTrivialValues) {
    EXPECT_NEAR(sf::gamma_fn(1.5), std::sqrt(std::numbers::pi) / 2.0, 1e-14);
    EXPECT_NEAR(sf::gamma_fn(1.0), 1.0, 1e-14);
    EXPECT_NEAR(sf::gamma_fn(2.0), 1.0, 1e-14);
}

TEST(Gamma, MatchesReferenceValues) {
    const std::pair<double, double> refs[] = {{0.5, 1.772453850905516},   {1.25, 0.90640247705547708},
                                              {1.45, 0.88566138027107208}, {2.3, 1.1667119051981602},
                                              {2.9, 1.827355080624036}};
    for (const auto& [x, g] : refs) EXPECT_NEAR(sf::gamma_fn(x), g, 1e-13 * g) << x;
}

TEST(Gamma, AgreesWithStdTgamma) {
    for (int i = 1; i <= 300; ++i) {
        const double x = 0.01 * i;
        EXPECT_NEAR(sf::gamma_fn(x), std::tgamma(x), 1e-12 * std::tgamma(x)) << x;
    }
}

TEST(Gamma, DomainError) {
    EXPECT_THROW(sf::gamma_fn(0.0), std::domain_error);
    EXPECT_THROW(sf::gamma_fn(-0.5), std::domain_error);
}

TEST(P0, RootOfDefiningEquation) {
    EXPECT_NEAR(sf::solve_p0(1e-3), 1.847, 1e-3);
    const double p0 = sf::solve_p0();
    EXPECT_NEAR(p0, 1.8474163360763421, 1e-11);
    EXPECT_NEAR(sf::gamma_fn(0.5 * (p0 + 1.0)), std::sqrt(std::numbers::pi) / 2.0, 1e-10);
}

TEST(P0, GammaSideOfTheRoot) {
    // Gamma((p+1)/2) decreases through sqrt(pi)/2 on (1, 2): above it at
    // p = 1.5 and below it at p = 1.9.
    const double half_sqrt_pi = std::sqrt(std::numbers::pi) / 2.0;
    EXPECT_GT(sf::gamma_fn(1.25), half_sqrt_pi);
    EXPECT_LT(sf::gamma_fn(1.45), half_sqrt_pi);
}
