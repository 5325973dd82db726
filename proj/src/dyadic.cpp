#include "hamdual/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hamdual/random.hpp"

namespace hamdual::dyadic {

namespace {

void check_depth(int depth) {
    if (depth < 0 || depth > kMaxDepth) throw std::out_of_range("dyadic: depth must lie in [0, 16]");
}

}  // namespace

DyadicMartingale::DyadicMartingale(int depth, std::vector<double> leaves)
    : depth_(depth), leaves_(std::move(leaves)) {
    check_depth(depth);
    if (leaves_.size() != (std::size_t{1} << depth))
        throw std::invalid_argument("DyadicMartingale: need exactly 2^depth leaves");

    levels_.resize(depth + 1);
    levels_[depth] = leaves_;
    for (int n = depth - 1; n >= 0; --n) {
        const auto& finer = levels_[n + 1];
        auto& lvl = levels_[n];
        lvl.resize(std::size_t{1} << n);
        for (std::size_t k = 0; k < lvl.size(); ++k) lvl[k] = 0.5 * (finer[2 * k] + finer[2 * k + 1]);
    }

    square_.assign(leaves_.size(), 0.0);
    for (std::size_t leaf = 0; leaf < leaves_.size(); ++leaf) {
        double s2 = 0.0;
        for (int n = 0; n < depth; ++n) {
            const double d = levels_[n + 1][leaf >> (depth - n - 1)] - levels_[n][leaf >> (depth - n)];
            s2 += d * d;
        }
        square_[leaf] = std::sqrt(s2);
    }
}

double DyadicMartingale::integrate(const std::function<double(double, double)>& h) const {
    double s = 0.0;
    for (std::size_t i = 0; i < leaves_.size(); ++i) s += h(leaves_[i], square_[i]);
    return s / static_cast<double>(leaves_.size());
}

std::vector<std::vector<double>> martingale_levels(const DyadicMartingale& g) {
    return g.levels();
}

std::vector<double> square_function(const DyadicMartingale& g) {
    return g.square();
}

DyadicMartingale from_increments(double start, const std::vector<std::vector<double>>& increments) {
    const int depth = static_cast<int>(increments.size());
    check_depth(depth);
    std::vector<double> cur{start};
    for (int n = 0; n < depth; ++n) {
        if (increments[n].size() != cur.size())
            throw std::invalid_argument("from_increments: level n needs 2^n increments");
        std::vector<double> next(2 * cur.size());
        for (std::size_t k = 0; k < cur.size(); ++k) {
            next[2 * k] = cur[k] + increments[n][k];
            next[2 * k + 1] = cur[k] - increments[n][k];
        }
        cur = std::move(next);
    }
    return {depth, std::move(cur)};
}

double orthogonality_defect(const DyadicMartingale& g) {
    const double m = g.mean();
    // Centering first keeps the subtraction well conditioned.
    return g.integrate([m](double v, double s) { return (v - m) * (v - m) - s * s; });
}

double master_bound_gap(const std::function<double(double, double)>& u_fn, const DyadicMartingale& g) {
    return u_fn(g.mean(), 0.0) - g.integrate(u_fn);
}

double cww_gap(const DyadicMartingale& g) {
    return std::exp(g.mean()) - g.integrate([](double v, double s) { return std::exp(v - 0.5 * s * s); });
}

TailCheck wolff_tail_check(const DyadicMartingale& g, double lambda) {
    if (!(lambda >= 0.0)) throw std::domain_error("wolff_tail_check: lambda must be >= 0");
    const auto& sq = g.square();
    const double s_inf = *std::max_element(sq.begin(), sq.end());
    if (!(s_inf > 0.0)) throw std::domain_error("wolff_tail_check: S(g) vanishes identically");
    const double measure = g.integrate([lambda](double v, double) { return v >= lambda ? 1.0 : 0.0; });
    const double bound = std::exp(-lambda * lambda / (2.0 * s_inf * s_inf));
    return {measure, bound, measure <= bound};
}

DavisCheck davis_ratio(const DyadicMartingale& g, double p, double s_p, double rel_tol) {
    if (!(p > 0.0)) throw std::domain_error("davis_ratio: p must be > 0");
    const double gn = std::pow(g.integrate([p](double v, double) { return std::pow(std::abs(v), p); }), 1.0 / p);
    const double sn = std::pow(g.integrate([p](double, double s) { return std::pow(s, p); }), 1.0 / p);
    DavisCheck out{};
    if (p <= 2.0) {
        out.lhs = gn;
        out.rhs = s_p * sn;
    } else {
        out.lhs = s_p * sn;
        out.rhs = gn;
    }
    out.ok = out.lhs <= out.rhs * (1.0 + rel_tol);
    return out;
}

DyadicMartingale random_martingale(int depth, std::uint64_t seed, double mean) {
    check_depth(depth);
    Rng rng(seed);
    const double r = rng.uniform(0.5, 1.2);
    std::vector<std::vector<double>> inc(depth);
    double scale = 1.0;
    for (int n = 0; n < depth; ++n) {
        inc[n].resize(std::size_t{1} << n);
        for (double& d : inc[n]) d = scale * rng.uniform(-1.0, 1.0);
        scale *= r;
    }
    return from_increments(mean, inc);
}

}  // namespace hamdual::dyadic
