#pragma once

#include <cstddef>
#include <vector>

#include "hamdual/report.hpp"
#include "hamdual/specfun.hpp"

namespace hamdual::bellman {

/// Everything the Davis Bellman function needs for one exponent alpha.
///
/// For alpha >= 2: beta = alpha / (alpha - 1) lies in (1, 2], s = s_alpha lies
/// in (0, 1] and c_norm = -alpha s^(alpha-1) / N'_alpha(s) > 0.
struct AlphaContext {
    double alpha = 2.0;
    double beta = 2.0;
    double s = 1.0;
    double c_norm = 1.0;
    double s_pow_alpha = 1.0;  ///< s^alpha, cached
    specfun::SeriesConfig series{};
};

/// Builds the context for alpha >= 2 and checks its invariants.
AlphaContext make_context(double alpha, const specfun::SeriesConfig& cfg = {});

/// Relaxed constructor for 0 < alpha: only s and c_norm are meaningful for
/// alpha < 2 (used by the Davis ratio checks). beta is +inf at alpha <= 1.
AlphaContext make_relaxed_context(double alpha, const specfun::SeriesConfig& cfg = {});

/// u_alpha(x): c_norm N_alpha(x) for |x| < s, s^alpha - |x|^alpha otherwise.
double u_alpha(const AlphaContext& ctx, double x);

/// First and second derivative of u_alpha away from |x| = s (outer branch at
/// the seam itself).
double u_alpha_d1(const AlphaContext& ctx, double x);
double u_alpha_d2(const AlphaContext& ctx, double x);

/// U(p, q) = |q|^alpha u_alpha(p / |q|), U(p, 0) = -|p|^alpha.
/// The outer branch is evaluated as s^alpha |q|^alpha - |p|^alpha.
double U(const AlphaContext& ctx, double p, double q);

/// 2U(p,q) - U(p+a, r) - U(p-a, r), r = sqrt(a^2 + q^2). Should be >= 0.
double main_inequality_gap(const AlphaContext& ctx, double p, double q, double a);

/// Relative distance to |p|/sqrt(t) = s excluded by heat_residual.
inline constexpr double kSeamMargin = 1e-3;

/// u_t + u_pp / 2 for u(p, t) = U(p, sqrt(t)), from the branch formulas.
/// Zero where |p| < s sqrt(t), nonpositive beyond. Throws SeamProximityError
/// within a relative `margin` of the seam.
double heat_residual(const AlphaContext& ctx, double p, double t, double margin = kSeamMargin);

/// U(p,q) - (|q|^alpha s^alpha - |p|^alpha). Should be >= 0.
double obstacle_gap(const AlphaContext& ctx, double p, double q);

/// Midpoint convexity gap of t -> U(p, sqrt(t)). Should be >= 0.
double convexity_in_t_gap(const AlphaContext& ctx, double p, double t1, double t2);

struct Axis {
    double min;
    double max;
    std::size_t count;

    double at(std::size_t i) const;
};

/// Per-axis sampling of a sweep; the cell order is lexicographic with the
/// last axis fastest.
struct GridSpec {
    std::vector<Axis> axes;

    void validate() const;
    std::size_t cells() const;
    std::vector<double> cell(std::size_t index) const;
};

/// Sweeps (p, q, a) over a three-axis grid and records, per cell, the
/// obstacle gap at (p, q), the main-inequality gap at (p, q, a), and the
/// t-convexity gap at (p; q^2, q^2 + a^2).
ViolationReport verify_bellman_grid(const AlphaContext& ctx, const GridSpec& grid, double tol,
                                    unsigned workers = 1);

}  // namespace hamdual::bellman
