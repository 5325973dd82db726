#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>

#include "hamdual/bellman.hpp"
#include "hamdual/optimize.hpp"

namespace hamdual::duality {

/// A map (p, q) -> U(p, q) on I x R_-, concave in p and convex in q.
/// (p0, q0) is a coercivity witness: Psi(., q0) -> -inf and Psi(p0, .) -> +inf.
struct Potential {
    std::function<double(double, double)> value;
    optimize::Interval p_domain{};
    double p0 = 0.0;
    double q0 = 0.0;
    std::string name;
};

/// Davis Bellman function U of the given context, on R x R_-.
Potential davis_potential(const bellman::AlphaContext& ctx);

/// U(p,q) = -(4/27)(p^3 - 3 p q^2) on [0, inf) x R_-.
Potential poincare32_potential();

/// Cubic potential value.
double poincare32_U(double p, double q);

/// Spot-checks concavity in p and convexity in q with random midpoint tests
/// over p in [-p_range, p_range] intersected with the domain and
/// q in [-q_range, 0]. Returns the number of failed probes.
int spot_check_potential(const Potential& pot, std::uint64_t seed, int probes, double p_range,
                         double q_range, double tol);

struct SaddleResult {
    double p_star = 0.0;
    double q_star = 0.0;
    double value = 0.0;  ///< min over q of sup over p
    double gap = 0.0;    ///< (sup_p Psi(p, q*)) - (inf_q Psi(p*, q)) >= 0
    int iterations = 0;  ///< objective evaluations
};

/// Argument tolerances used for the outer (q) and inner (p) searches at a
/// requested value tolerance.
struct SearchTolerances {
    double outer;
    double inner;
};
SearchTolerances search_tolerances(double tol);

/// Saddle point of Psi(p,q) = p x + q y + U(p,q), q <= 0, p in I. The outer
/// convex minimization over q runs on phi(q) = sup_p Psi(p,q), each inner
/// concave maximization to a tenth of the outer tolerance. The returned
/// value carries the certificate `gap`; SaddleConvergenceError if gap > tol.
SaddleResult saddle_solve(const Potential& pot, double x, double y, double tol);

/// inf_{q<=0} sup_{p in I} (p x + q y + O(p, |q|)) with the same search, no
/// saddle certificate.
double inf_sup(const std::function<double(double, double)>& objective, optimize::Interval p_domain,
               double p0, double q0, double x, double y, double tol);

/// Default value tolerance for dual evaluations.
inline constexpr double kDualTol = 1e-10;

/// M(x,y) = min_{q<=0} sup_p (p x + q y + U(p,q)) for the Davis U.
double dual_M(const bellman::AlphaContext& ctx, double x, double y, double tol = kDualTol);

/// ((alpha-1)/alpha^beta)(|x|^beta - y^beta / s^beta)
double dual_obstacle(const bellman::AlphaContext& ctx, double x, double y);

/// M(x,y) - dual_obstacle(x,y); >= 0, and 0 at y = 0.
double dual_obstacle_gap(const bellman::AlphaContext& ctx, double x, double y, double tol = kDualTol);

/// 2M(x,y) - M(x+a, sqrt(a^2+(y+b)^2)) - M(x-a, sqrt(a^2+(y-b)^2)); >= 0.
double dual_inequality_gap(const bellman::AlphaContext& ctx, double x, double y, double a, double b,
                           double tol = kDualTol);

/// M(x,|y|) - (M(x+a, sqrt(a^2+|y+b|^2)) + M(x-a, sqrt(a^2+|y-b|^2)))/2; >= 0.
double vector_main_gap(const bellman::AlphaContext& ctx, double x, double a, std::span<const double> y,
                       std::span<const double> b, double tol = kDualTol);

/// M(x, y1) - M(x, y2) for 0 <= y1 <= y2; >= 0 since M decreases in y.
double monotone_in_y_gap(const bellman::AlphaContext& ctx, double x, double y1, double y2,
                         double tol = kDualTol);

/// Re (x+iy)^{3/2}, principal branch.
double poincare32_closed_form(double x, double y);

struct P32Check {
    double closed_form;
    double minimax;
    double diff;
};

/// Compares the closed form with min_{q<=0} sup_{p>=0} of the cubic potential.
P32Check poincare32_check(double x, double y, double tol = kDualTol);

/// 2U(p,q) - U(p+a, r) - U(p-a, r) for the cubic U; identically 0.
double poincare32_U_identity_gap(double p, double q, double a);

/// 2 e^{a^2/2} - e^a - e^{-a}
double logsob_exp_gap(double a);

/// e^{p - q^2/2}
double exp_U(double p, double q);

/// x ln x - y^2 / (2x)
double logsob_M(double x, double y);

struct MongeAmpere {
    double lambda_max;
    double lambda_min;
    double det;
    double a11;  ///< M_xx + M_y / y
    double a12;  ///< M_xy
    double a22;  ///< M_yy
    double scale() const;  ///< max(1, squared Frobenius norm)
};

enum class FdScheme { Central, Richardson };

/// Default step 1e-3 (1 + |x| + |y|) for the Richardson scheme.
double default_ma_step(double x, double y);

/// Eigenvalues of [[M_xx + M_y/y, M_xy], [M_xy, M_yy]] from finite
/// differences with step h. Richardson combines steps h and h/2.
MongeAmpere monge_ampere_eigs(const std::function<double(double, double)>& m, double x, double y,
                              double h, FdScheme scheme = FdScheme::Richardson);

struct AbstractDual {
    double m_value;
    double o_tilde_value;
};

/// M per min-sup of U and O~ per inf-sup of O at (x, y).
AbstractDual abstract_dualize(const Potential& u_pot, const std::function<double(double, double)>& o_fn,
                              double x, double y, double tol = kDualTol);

}  // namespace hamdual::duality
