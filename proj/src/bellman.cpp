#include "hamdual/bellman.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hamdual/parallel.hpp"

namespace hamdual::bellman {

namespace {

AlphaContext build(double alpha, const specfun::SeriesConfig& cfg) {
    AlphaContext ctx;
    ctx.alpha = alpha;
    ctx.series = cfg;
    ctx.beta = alpha > 1.0 ? alpha / (alpha - 1.0) : std::numeric_limits<double>::infinity();
    ctx.s = specfun::smallest_zero(alpha, cfg);
    const specfun::NValue at_s = specfun::eval_n(alpha, ctx.s, cfg);
    ctx.c_norm = -alpha * std::pow(ctx.s, alpha - 1.0) / at_s.d1;
    ctx.s_pow_alpha = std::pow(ctx.s, alpha);
    if (!(ctx.c_norm > 0.0)) {
        std::ostringstream os;
        os << "AlphaContext: N'_alpha(s) must be negative (alpha=" << alpha << ")";
        throw NumericalError(os.str());
    }
    if (std::abs(at_s.value) > 1e-10) throw NumericalError("AlphaContext: |N_alpha(s)| > 1e-10");
    return ctx;
}

}  // namespace

AlphaContext make_context(double alpha, const specfun::SeriesConfig& cfg) {
    if (!(alpha >= 2.0)) throw std::domain_error("make_context: alpha must be >= 2");
    AlphaContext ctx = build(alpha, cfg);
    if (!(ctx.beta > 1.0 && ctx.beta <= 2.0) || !(ctx.s > 0.0 && ctx.s <= 1.0))
        throw NumericalError("make_context: beta or s outside its range");
    return ctx;
}

AlphaContext make_relaxed_context(double alpha, const specfun::SeriesConfig& cfg) {
    if (!(alpha > 0.0)) throw std::domain_error("make_relaxed_context: alpha must be > 0");
    return build(alpha, cfg);
}

double u_alpha(const AlphaContext& ctx, double x) {
    const double ax = std::abs(x);
    if (ax < ctx.s) return ctx.c_norm * specfun::n_series(ctx.alpha, ax, ctx.series);
    return ctx.s_pow_alpha - std::pow(ax, ctx.alpha);
}

double u_alpha_d1(const AlphaContext& ctx, double x) {
    const double ax = std::abs(x);
    const double sign = x < 0.0 ? -1.0 : 1.0;
    if (ax < ctx.s) return ctx.c_norm * specfun::eval_n(ctx.alpha, x, ctx.series).d1;
    return -ctx.alpha * sign * std::pow(ax, ctx.alpha - 1.0);
}

double u_alpha_d2(const AlphaContext& ctx, double x) {
    const double ax = std::abs(x);
    if (ax < ctx.s) return -ctx.c_norm * ctx.alpha * specfun::n_series(ctx.alpha - 2.0, ax, ctx.series);
    return -ctx.alpha * (ctx.alpha - 1.0) * std::pow(ax, ctx.alpha - 2.0);
}

double U(const AlphaContext& ctx, double p, double q) {
    const double ap = std::abs(p);
    const double aq = std::abs(q);
    if (aq == 0.0) return -std::pow(ap, ctx.alpha);
    if (ap >= ctx.s * aq) return ctx.s_pow_alpha * std::pow(aq, ctx.alpha) - std::pow(ap, ctx.alpha);
    return std::pow(aq, ctx.alpha) * ctx.c_norm * specfun::n_series(ctx.alpha, ap / aq, ctx.series);
}

double main_inequality_gap(const AlphaContext& ctx, double p, double q, double a) {
    const double r = std::hypot(a, q);
    return 2.0 * U(ctx, p, q) - U(ctx, p + a, r) - U(ctx, p - a, r);
}

double heat_residual(const AlphaContext& ctx, double p, double t, double margin) {
    if (!(t > 0.0)) throw std::domain_error("heat_residual: t must be > 0");
    const double z = p / std::sqrt(t);
    if (std::abs(std::abs(z) - ctx.s) < margin * ctx.s) {
        std::ostringstream os;
        os << "heat_residual: |p|/sqrt(t) = " << std::abs(z) << " is within " << margin
           << " (relative) of s = " << ctx.s;
        throw SeamProximityError(os.str());
    }
    // With u~(p,t) = t^(alpha/2) u(z): u~_t + u~_pp/2 = t^(alpha/2-1)/2 (u'' - z u' + alpha u).
    const double bracket =
        u_alpha_d2(ctx, z) - z * u_alpha_d1(ctx, z) + ctx.alpha * u_alpha(ctx, z);
    return 0.5 * std::pow(t, 0.5 * ctx.alpha - 1.0) * bracket;
}

double obstacle_gap(const AlphaContext& ctx, double p, double q) {
    const double obstacle = std::pow(std::abs(q), ctx.alpha) * ctx.s_pow_alpha - std::pow(std::abs(p), ctx.alpha);
    return U(ctx, p, q) - obstacle;
}

double convexity_in_t_gap(const AlphaContext& ctx, double p, double t1, double t2) {
    if (t1 < 0.0 || t2 < 0.0) throw std::domain_error("convexity_in_t_gap: t must be >= 0");
    return 0.5 * U(ctx, p, std::sqrt(t1)) + 0.5 * U(ctx, p, std::sqrt(t2)) -
           U(ctx, p, std::sqrt(0.5 * (t1 + t2)));
}

double Axis::at(std::size_t i) const {
    if (count <= 1) return min;
    if (i + 1 == count) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

void GridSpec::validate() const {
    if (axes.empty()) throw std::invalid_argument("GridSpec: no axes");
    for (const Axis& a : axes) {
        if (a.count < 2) throw std::invalid_argument("GridSpec: count must be >= 2");
        if (!(a.min < a.max)) throw std::invalid_argument("GridSpec: min must be < max");
    }
}

std::size_t GridSpec::cells() const {
    std::size_t n = 1;
    for (const Axis& a : axes) n *= a.count;
    return n;
}

std::vector<double> GridSpec::cell(std::size_t index) const {
    std::vector<double> out(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
        out[k] = axes[k].at(index % axes[k].count);
        index /= axes[k].count;
    }
    return out;
}

ViolationReport verify_bellman_grid(const AlphaContext& ctx, const GridSpec& grid, double tol,
                                    unsigned workers) {
    grid.validate();
    if (grid.axes.size() != 3) throw std::invalid_argument("verify_bellman_grid: expected axes (p, q, a)");
    const std::size_t cells = grid.cells();
    auto chunks = parallel_chunks<ViolationReport>(
        cells, workers, [&](std::size_t begin, std::size_t end, unsigned) {
            ViolationReport rep(tol);
            for (std::size_t i = begin; i < end; ++i) {
                const std::vector<double> c = grid.cell(i);
                const double p = c[0], q = c[1], a = c[2];
                const std::uint64_t base = 3 * static_cast<std::uint64_t>(i);
                rep.record(obstacle_gap(ctx, p, q), base, c, "obstacle");
                rep.record(main_inequality_gap(ctx, p, q, a), base + 1, c, "main_inequality");
                rep.record(convexity_in_t_gap(ctx, p, q * q, q * q + a * a), base + 2, c, "t_convexity");
            }
            return rep;
        });
    ViolationReport total(tol);
    for (const auto& c : chunks) total.merge(c);
    return total;
}

}  // namespace hamdual::bellman
