#include "hamdual/duality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hamdual/random.hpp"

namespace hamdual::duality {

using optimize::Interval;
using optimize::kInf;

Potential davis_potential(const bellman::AlphaContext& ctx) {
    Potential pot;
    pot.value = [ctx](double p, double q) { return bellman::U(ctx, p, q); };
    pot.p_domain = Interval{};
    pot.name = "davis";
    return pot;
}

double poincare32_U(double p, double q) {
    return -(4.0 / 27.0) * (p * p * p - 3.0 * p * q * q);
}

Potential poincare32_potential() {
    Potential pot;
    pot.value = poincare32_U;
    pot.p_domain = Interval{0.0, kInf};
    pot.name = "poincare32";
    return pot;
}

int spot_check_potential(const Potential& pot, std::uint64_t seed, int probes, double p_range,
                         double q_range, double tol) {
    Rng rng(seed);
    const double plo = std::max(pot.p_domain.lo, -p_range);
    const double phi = std::min(pot.p_domain.hi, p_range);
    int failures = 0;
    for (int i = 0; i < probes; ++i) {
        const double p1 = rng.uniform(plo, phi);
        const double p2 = rng.uniform(plo, phi);
        const double q1 = rng.uniform(-q_range, 0.0);
        const double q2 = rng.uniform(-q_range, 0.0);
        const double concave = pot.value(0.5 * (p1 + p2), q1) - 0.5 * (pot.value(p1, q1) + pot.value(p2, q1));
        const double convex = 0.5 * (pot.value(p1, q1) + pot.value(p1, q2)) - pot.value(p1, 0.5 * (q1 + q2));
        if (concave < -tol) ++failures;
        if (convex < -tol) ++failures;
    }
    return failures;
}

SearchTolerances search_tolerances(double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    const double outer = std::clamp(0.1 * std::sqrt(tol), 1e-9, 1e-4);
    return {outer, outer / 10.0};
}

namespace {

struct InfSup {
    double q_star;
    double p_star;
    double value;
    int evaluations;
};

template <class Obj>
InfSup run_inf_sup(const Obj& obj, Interval p_dom, double p0, double q0, double x, double y, double tol,
                   double outer_scale = 1.0) {
    SearchTolerances st = search_tolerances(tol);
    st.outer *= outer_scale;
    double p_warm = p0;
    int evals = 0;
    auto phi = [&](double q) {
        auto inner = [&](double p) { return p * x + q * y + obj(p, q); };
        const optimize::Extremum r = optimize::maximize_concave(inner, p_dom, p_warm, st.inner);
        p_warm = r.arg;
        evals += r.evaluations;
        return r.value;
    };
    const optimize::Extremum outer = optimize::minimize_convex(phi, Interval{-kInf, 0.0}, std::min(q0, 0.0), st.outer);
    // Re-solve the inner problem at q* for its maximizer.
    auto inner_at = [&](double p) { return p * x + outer.arg * y + obj(p, outer.arg); };
    const optimize::Extremum at_star = optimize::maximize_concave(inner_at, p_dom, p_warm, st.inner);
    evals += at_star.evaluations;
    return {outer.arg, at_star.arg, std::min(outer.value, at_star.value), evals};
}

}  // namespace

SaddleResult saddle_solve(const Potential& pot, double x, double y, double tol) {
    if (!(y >= 0.0)) throw std::domain_error("saddle_solve: y must be >= 0");
    const auto& u = pot.value;
    const InfSup is = run_inf_sup(u, pot.p_domain, pot.p0, pot.q0, x, y, tol);

    // Certificate: inf_q Psi(p*, q) <= saddle value <= sup_p Psi(p, q*).
    const SearchTolerances st = search_tolerances(tol);
    auto along_q = [&](double q) { return is.p_star * x + q * y + u(is.p_star, q); };
    const optimize::Extremum lower = optimize::minimize_convex(along_q, Interval{-kInf, 0.0}, is.q_star, st.inner);

    SaddleResult res;
    res.p_star = is.p_star;
    res.q_star = is.q_star;
    res.value = is.value;
    res.gap = std::abs(is.value - lower.value);
    res.iterations = is.evaluations + lower.evaluations;

    if (!(res.gap <= tol)) {
        // p* came from q* and inherits its error, badly so where dp*/dq* is
        // large (near p = 0 for a half-line domain). Redo the minimax side with
        // a finer outer tolerance, then solve the maximin side on its own.
        const InfSup fine = run_inf_sup(u, pot.p_domain, is.p_star, is.q_star, x, y, tol, 1e-2);
        res.iterations += fine.evaluations;
        if (fine.value < res.value) {
            res.value = fine.value;
            res.q_star = fine.q_star;
            res.p_star = fine.p_star;
        }
        double q_warm = res.q_star;
        int evals = 0;
        auto maximin = [&](double p) {
            auto along = [&](double q) { return p * x + q * y + u(p, q); };
            const optimize::Extremum r = optimize::minimize_convex(along, Interval{-kInf, 0.0}, q_warm, st.inner);
            q_warm = r.arg;
            evals += r.evaluations;
            return r.value;
        };
        // Any p gives a lower bound, so a window around p* is enough; it also
        // keeps away from p where inf_q is -inf.
        const double p_mid = res.p_star;
        const double w = 0.5 * std::max(std::abs(p_mid), 1e-3);
        const Interval window{std::max(pot.p_domain.lo, p_mid - w), std::min(pot.p_domain.hi, p_mid + w)};
        double best_lower = lower.value;
        try {
            const optimize::Extremum best = optimize::maximize_concave(maximin, window, p_mid, st.inner);
            if (best.value > best_lower) {
                res.p_star = best.arg;
                best_lower = best.value;
            }
        } catch (const NumericalError&) {
            // keep the first certificate
        }
        res.gap = std::abs(res.value - best_lower);
        res.iterations += evals;
    }
    if (!(res.gap <= tol)) {
        std::ostringstream os;
        os << "saddle_solve(" << pot.name << "): minimax/maximin gap " << res.gap << " exceeds " << tol
           << " at (x, y) = (" << x << ", " << y << ")";
        throw SaddleConvergenceError(os.str(), res.gap);
    }
    return res;
}

double inf_sup(const std::function<double(double, double)>& objective, Interval p_domain, double p0,
               double q0, double x, double y, double tol) {
    if (!(y >= 0.0)) throw std::domain_error("inf_sup: y must be >= 0");
    return run_inf_sup(objective, p_domain, p0, q0, x, y, tol).value;
}

double dual_M(const bellman::AlphaContext& ctx, double x, double y, double tol) {
    if (!(ctx.alpha >= 2.0)) throw std::domain_error("dual_M: alpha must be >= 2");
    // The Davis U is even in p, so M is even in x; solving at |x| keeps
    // M(x, y) == M(-x, y) bit for bit.
    Potential pot;
    pot.value = [&ctx](double p, double q) { return bellman::U(ctx, p, q); };
    pot.name = "davis";
    return saddle_solve(pot, std::abs(x), y, tol).value;
}

double dual_obstacle(const bellman::AlphaContext& ctx, double x, double y) {
    const double b = ctx.beta;
    return (ctx.alpha - 1.0) / std::pow(ctx.alpha, b) *
           (std::pow(std::abs(x), b) - std::pow(y, b) / std::pow(ctx.s, b));
}

double dual_obstacle_gap(const bellman::AlphaContext& ctx, double x, double y, double tol) {
    return dual_M(ctx, x, y, tol) - dual_obstacle(ctx, x, y);
}

double dual_inequality_gap(const bellman::AlphaContext& ctx, double x, double y, double a, double b,
                           double tol) {
    if (!(y >= 0.0)) throw std::domain_error("dual_inequality_gap: y must be >= 0");
    return 2.0 * dual_M(ctx, x, y, tol) - dual_M(ctx, x + a, std::hypot(a, y + b), tol) -
           dual_M(ctx, x - a, std::hypot(a, y - b), tol);
}

double vector_main_gap(const bellman::AlphaContext& ctx, double x, double a, std::span<const double> y,
                       std::span<const double> b, double tol) {
    if (y.empty() || y.size() != b.size())
        throw std::invalid_argument("vector_main_gap: y and b must have equal dimension >= 1");
    double ny = 0.0, nplus = 0.0, nminus = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ny += y[i] * y[i];
        nplus += (y[i] + b[i]) * (y[i] + b[i]);
        nminus += (y[i] - b[i]) * (y[i] - b[i]);
    }
    return dual_M(ctx, x, std::sqrt(ny), tol) -
           0.5 * (dual_M(ctx, x + a, std::sqrt(a * a + nplus), tol) +
                  dual_M(ctx, x - a, std::sqrt(a * a + nminus), tol));
}

double monotone_in_y_gap(const bellman::AlphaContext& ctx, double x, double y1, double y2, double tol) {
    if (!(0.0 <= y1 && y1 <= y2)) throw std::invalid_argument("monotone_in_y_gap: need 0 <= y1 <= y2");
    return dual_M(ctx, x, y1, tol) - dual_M(ctx, x, y2, tol);
}

double poincare32_closed_form(double x, double y) {
    const double r = std::hypot(x, y);
    return (2.0 * x - r) * std::sqrt(std::max(0.0, r + x)) / std::sqrt(2.0);
}

P32Check poincare32_check(double x, double y, double tol) {
    const double closed = poincare32_closed_form(x, y);
    const double minimax = saddle_solve(poincare32_potential(), x, y, tol).value;
    return {closed, minimax, minimax - closed};
}

double poincare32_U_identity_gap(double p, double q, double a) {
    const double r = std::hypot(a, q);
    return 2.0 * poincare32_U(p, q) - poincare32_U(p + a, r) - poincare32_U(p - a, r);
}

double logsob_exp_gap(double a) {
    return 2.0 * std::exp(0.5 * a * a) - std::exp(a) - std::exp(-a);
}

double exp_U(double p, double q) {
    return std::exp(p - 0.5 * q * q);
}

double logsob_M(double x, double y) {
    return x * std::log(x) - y * y / (2.0 * x);
}

double MongeAmpere::scale() const {
    return std::max(1.0, a11 * a11 + 2.0 * a12 * a12 + a22 * a22);
}

double default_ma_step(double x, double y) {
    return 1e-3 * (1.0 + std::abs(x) + std::abs(y));
}

namespace {

struct Derivs {
    double mxx, myy, mxy, my;
};

Derivs central(const std::function<double(double, double)>& m, double x, double y, double h) {
    const double c = m(x, y);
    const double xp = m(x + h, y), xm = m(x - h, y);
    const double yp = m(x, y + h), ym = m(x, y - h);
    const double h2 = h * h;
    return {(xp - 2.0 * c + xm) / h2,
            (yp - 2.0 * c + ym) / h2,
            (m(x + h, y + h) - m(x + h, y - h) - m(x - h, y + h) + m(x - h, y - h)) / (4.0 * h2),
            (yp - ym) / (2.0 * h)};
}

}  // namespace

MongeAmpere monge_ampere_eigs(const std::function<double(double, double)>& m, double x, double y, double h,
                              FdScheme scheme) {
    if (!(h > 0.0)) throw std::invalid_argument("monge_ampere_eigs: h must be > 0");
    if (!(y > h)) throw std::domain_error("monge_ampere_eigs: need y > h");
    Derivs d = central(m, x, y, h);
    if (scheme == FdScheme::Richardson) {
        const Derivs f = central(m, x, y, 0.5 * h);
        auto extrap = [](double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; };
        d = {extrap(d.mxx, f.mxx), extrap(d.myy, f.myy), extrap(d.mxy, f.mxy), extrap(d.my, f.my)};
    }
    MongeAmpere out{};
    out.a11 = d.mxx + d.my / y;
    out.a12 = d.mxy;
    out.a22 = d.myy;
    const double half_trace = 0.5 * (out.a11 + out.a22);
    const double radius = std::hypot(0.5 * (out.a11 - out.a22), out.a12);
    out.lambda_max = half_trace + radius;
    out.lambda_min = half_trace - radius;
    out.det = out.a11 * out.a22 - out.a12 * out.a12;
    return out;
}

AbstractDual abstract_dualize(const Potential& u_pot, const std::function<double(double, double)>& o_fn,
                              double x, double y, double tol) {
    const double m = saddle_solve(u_pot, x, y, tol).value;
    auto o_abs = [&o_fn](double p, double q) { return o_fn(p, std::abs(q)); };
    const double o = run_inf_sup(o_abs, u_pot.p_domain, u_pot.p0, u_pot.q0, x, y, tol).value;
    return {m, o};
}

}  // namespace hamdual::duality
