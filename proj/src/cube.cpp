#include "hamdual/cube.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hamdual/duality.hpp"
#include "hamdual/random.hpp"
#include "hamdual/specfun.hpp"

namespace hamdual::cube {

namespace {

void check_dim(int n, int cap, const char* who) {
    if (n < 1 || n > cap) throw std::out_of_range(std::string(who) + ": dimension out of range");
}

void check_axis(const CubeFunction& f, int j) {
    if (j < 0 || j >= f.dim()) throw std::out_of_range("axis index out of range");
}

}  // namespace

CubeFunction::CubeFunction(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
    check_dim(n, kMaxDim, "CubeFunction");
    if (values_.size() != (std::size_t{1} << n))
        throw std::invalid_argument("CubeFunction: need exactly 2^n values");
}

CubeFunction CubeFunction::zeros(int n) {
    check_dim(n, kMaxDim, "CubeFunction");
    return {n, std::vector<double>(std::size_t{1} << n, 0.0)};
}

CubeFunction CubeFunction::constant(int n, double c) {
    check_dim(n, kMaxDim, "CubeFunction");
    return {n, std::vector<double>(std::size_t{1} << n, c)};
}

CubeFunction CubeFunction::dictator(int n, int j) {
    check_dim(n, kMaxDim, "CubeFunction");
    if (j < 0 || j >= n) throw std::out_of_range("dictator: axis out of range");
    std::vector<double> v(std::size_t{1} << n);
    for (std::size_t m = 0; m < v.size(); ++m) v[m] = coordinate(m, j);
    return {n, std::move(v)};
}

CubeFunction CubeFunction::coordinate_sum(int n) {
    check_dim(n, kMaxDim, "CubeFunction");
    std::vector<double> v(std::size_t{1} << n, 0.0);
    for (std::size_t m = 0; m < v.size(); ++m)
        for (int j = 0; j < n; ++j) v[m] += coordinate(m, j);
    return {n, std::move(v)};
}

CubeFunction CubeFunction::monomial(int n, std::uint32_t mask) {
    check_dim(n, kMaxDim, "CubeFunction");
    std::vector<double> v(std::size_t{1} << n, 1.0);
    for (std::size_t m = 0; m < v.size(); ++m)
        for (int j = 0; j < n; ++j)
            if ((mask >> j) & 1U) v[m] *= coordinate(m, j);
    return {n, std::move(v)};
}

CubeFunction operator+(const CubeFunction& f, const CubeFunction& g) {
    if (f.dim() != g.dim()) throw std::invalid_argument("dimension mismatch");
    std::vector<double> v(f.size());
    for (std::size_t m = 0; m < v.size(); ++m) v[m] = f[m] + g[m];
    return {f.dim(), std::move(v)};
}

CubeFunction operator*(double a, const CubeFunction& f) {
    std::vector<double> v(f.size());
    for (std::size_t m = 0; m < v.size(); ++m) v[m] = a * f[m];
    return {f.dim(), std::move(v)};
}

CubeFunction partial_derivative(const CubeFunction& f, int j) {
    check_axis(f, j);
    const std::size_t bit = std::size_t{1} << j;
    std::vector<double> v(f.size());
    for (std::size_t m = 0; m < v.size(); ++m) v[m] = 0.5 * (f[m] - f[m ^ bit]);
    return {f.dim(), std::move(v)};
}

namespace {

double grad_sq_at(std::span<const double> f, int n, std::size_t m) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        const double d = 0.5 * (f[m] - f[m ^ (std::size_t{1} << j)]);
        s += d * d;
    }
    return s;
}

}  // namespace

CubeFunction gradient_norm(const CubeFunction& f) {
    std::vector<double> v(f.size());
    for (std::size_t m = 0; m < v.size(); ++m) v[m] = std::sqrt(grad_sq_at(f.values(), f.dim(), m));
    return {f.dim(), std::move(v)};
}

CubeFunction average_axis(const CubeFunction& f, int j) {
    check_axis(f, j);
    const std::size_t bit = std::size_t{1} << j;
    std::vector<double> v(f.size());
    for (std::size_t m = 0; m < v.size(); ++m) v[m] = 0.5 * (f[m] + f[m ^ bit]);
    return {f.dim(), std::move(v)};
}

CubeFunction permute_axes(const CubeFunction& f, std::span<const int> perm) {
    const int n = f.dim();
    if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permute_axes: size mismatch");
    std::vector<bool> seen(n, false);
    for (int k : perm) {
        if (k < 0 || k >= n || seen[k]) throw std::invalid_argument("permute_axes: not a permutation");
        seen[k] = true;
    }
    std::vector<double> v(f.size());
    for (std::size_t m = 0; m < v.size(); ++m) {
        std::size_t image = 0;
        for (int j = 0; j < n; ++j)
            if ((m >> j) & 1U) image |= std::size_t{1} << perm[j];
        v[image] = f[m];
    }
    return {n, std::move(v)};
}

double expectation(const CubeFunction& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s / static_cast<double>(f.size());
}

double abs_moment(const CubeFunction& f, double p) {
    if (!(p > 0.0)) throw std::domain_error("abs_moment: p must be > 0");
    double s = 0.0;
    for (double v : f.values()) s += std::pow(std::abs(v), p);
    return s / static_cast<double>(f.size());
}

double pnorm(const CubeFunction& f, double p) {
    return std::pow(abs_moment(f, p), 1.0 / p);
}

double theorem1_gap(const CubeFunction& f, double p, double s) {
    const double lhs = pnorm(gradient_norm(f), p);
    const double spread = std::max(0.0, abs_moment(f, p) - std::pow(std::abs(expectation(f)), p));
    return lhs - s * std::pow(spread, 1.0 / p);
}

double khinchin_factor(double p) {
    const double ratio = specfun::gamma_fn(0.5 * (p + 1.0)) / specfun::gamma_fn(1.5);
    return std::pow(2.0, 0.5 * (p - 2.0)) * std::min(1.0, ratio);
}

double rademacher_gap(const CubeFunction& f, double p, double s) {
    check_dim(f.dim(), kMaxRademacherDim, "rademacher_gap");
    const int n = f.dim();
    const std::size_t size = f.size();
    std::vector<CubeFunction> partials;
    partials.reserve(n);
    for (int j = 0; j < n; ++j) partials.push_back(partial_derivative(f, j));
    double lhs = 0.0;
    for (std::size_t m = 0; m < size; ++m) {
        for (std::size_t sign = 0; sign < size; ++sign) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += CubeFunction::coordinate(sign, j) * partials[j][m];
            lhs += std::pow(std::abs(acc), p);
        }
    }
    lhs /= static_cast<double>(size) * static_cast<double>(size);
    const double mean = expectation(f);
    double centered = 0.0;
    for (double v : f.values()) centered += std::pow(std::abs(v - mean), p);
    centered /= static_cast<double>(size);
    return lhs - std::pow(s, p) * khinchin_factor(p) * centered;
}

double poincare_ratio(const CubeFunction& f, double p) {
    const double den = abs_moment(f, p) - std::pow(std::abs(expectation(f)), p);
    if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
    return abs_moment(gradient_norm(f), p) / den;
}

namespace {

// Incremental evaluation of log(ratio) when a single value changes.
class RatioObjective {
public:
    RatioObjective(int n, double p, std::vector<double> values) : n_(n), p_(p), f_(std::move(values)) {
        grad_pow_.resize(f_.size());
        refresh();
    }

    const std::vector<double>& values() const { return f_; }
    double current() const { return evaluate(sum_grad_, sum_abs_, sum_f_, max_abs()); }

    /// log(ratio) if f[i] were v.
    double trial(std::size_t i, double v) const {
        const double old = f_[i];
        double sum_grad = sum_grad_ - grad_pow_[i];
        sum_grad += std::pow(grad_sq_with(i, i, v), 0.5 * p_);
        for (int j = 0; j < n_; ++j) {
            const std::size_t nb = i ^ (std::size_t{1} << j);
            sum_grad += std::pow(grad_sq_with(nb, i, v), 0.5 * p_) - grad_pow_[nb];
        }
        const double sum_abs = sum_abs_ - std::pow(std::abs(old), p_) + std::pow(std::abs(v), p_);
        const double sum_f = sum_f_ - old + v;
        double mx = std::abs(v);
        for (std::size_t m = 0; m < f_.size(); ++m)
            if (m != i) mx = std::max(mx, std::abs(f_[m]));
        return evaluate(sum_grad, sum_abs, sum_f, mx);
    }

    void set(std::size_t i, double v) {
        f_[i] = v;
        refresh();
    }

    void normalize() {
        const double mx = max_abs();
        if (mx > 0.0)
            for (double& v : f_) v /= mx;
        refresh();
    }

private:
    double max_abs() const {
        double mx = 0.0;
        for (double v : f_) mx = std::max(mx, std::abs(v));
        return mx;
    }

    double grad_sq_with(std::size_t m, std::size_t i, double v) const {
        double s = 0.0;
        const double fm = m == i ? v : f_[m];
        for (int j = 0; j < n_; ++j) {
            const std::size_t nb = m ^ (std::size_t{1} << j);
            const double d = 0.5 * (fm - (nb == i ? v : f_[nb]));
            s += d * d;
        }
        return s;
    }

    double evaluate(double sum_grad, double sum_abs, double sum_f, double mx) const {
        const double size = static_cast<double>(f_.size());
        const double den = sum_abs / size - std::pow(std::abs(sum_f / size), p_);
        if (!(mx > 0.0) || !(den >= kSearchDenominatorFloor * std::pow(mx, p_)))
            return std::numeric_limits<double>::infinity();
        return std::log(std::max(sum_grad / size, std::numeric_limits<double>::min()) / den);
    }

    void refresh() {
        sum_grad_ = sum_abs_ = sum_f_ = 0.0;
        for (std::size_t m = 0; m < f_.size(); ++m) {
            grad_pow_[m] = std::pow(grad_sq_at(f_, n_, m), 0.5 * p_);
            sum_grad_ += grad_pow_[m];
            sum_abs_ += std::pow(std::abs(f_[m]), p_);
            sum_f_ += f_[m];
        }
    }

    int n_;
    double p_;
    std::vector<double> f_;
    std::vector<double> grad_pow_;
    double sum_grad_ = 0.0, sum_abs_ = 0.0, sum_f_ = 0.0;
};

// Golden-section search for a smaller objective on [v - delta, v + delta].
std::pair<double, double> coordinate_step(const RatioObjective& obj, std::size_t i, double v, double current,
                                          double delta) {
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = v - delta, hi = v + delta;
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double f1 = obj.trial(i, x1), f2 = obj.trial(i, x2);
    for (int it = 0; it < 40; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = obj.trial(i, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = obj.trial(i, x2);
        }
    }
    const double best_x = f1 <= f2 ? x1 : x2;
    const double best_f = std::min(f1, f2);
    if (best_f < current) return {best_x, best_f};
    return {v, current};
}

CubeFunction descend(int n, double p, std::vector<double> start) {
    RatioObjective obj(n, p, std::move(start));
    obj.normalize();
    double current = obj.current();
    double delta = 0.5;
    for (int sweep = 0; sweep < 400 && delta > 1e-9; ++sweep) {
        const double before = current;
        for (std::size_t i = 0; i < obj.values().size(); ++i) {
            auto [x, fx] = coordinate_step(obj, i, obj.values()[i], current, delta);
            if (fx < current) {
                obj.set(i, x);
                current = obj.current();
            }
        }
        obj.normalize();
        current = obj.current();
        if (!(before - current > 1e-12)) delta *= 0.5;
    }
    return {n, obj.values()};
}

}  // namespace

ConstantSearch best_constant_search(int n, double p, int restarts, std::uint64_t seed) {
    check_dim(n, kMaxSearchDim, "best_constant_search");
    if (!(p > 0.0)) throw std::domain_error("best_constant_search: p must be > 0");
    if (restarts < 0) throw std::invalid_argument("best_constant_search: restarts must be >= 0");

    std::vector<std::vector<double>> starts;
    for (int j = 0; j < n; ++j) {
        const CubeFunction d = CubeFunction::dictator(n, j);
        starts.emplace_back(d.values().begin(), d.values().end());
    }
    {
        const CubeFunction near_const = CubeFunction::constant(n, 1.0) + 0.1 * CubeFunction::dictator(n, 0);
        starts.emplace_back(near_const.values().begin(), near_const.values().end());
    }
    for (int r = 0; r < restarts; ++r) {
        const CubeFunction g = random_function(n, case_seed(seed, 0xC0457A47ULL, static_cast<std::uint64_t>(r)));
        starts.emplace_back(g.values().begin(), g.values().end());
    }

    ConstantSearch best{std::numeric_limits<double>::infinity(), CubeFunction::zeros(n)};
    for (auto& s : starts) {
        // Keep the start itself as a candidate: the dictator pins estimate <= 1.
        const CubeFunction s_fn(n, s);
        const double r0 = poincare_ratio(s_fn, p);
        if (r0 < best.estimate) best = {r0, s_fn};
        CubeFunction w = descend(n, p, s);
        const double r = poincare_ratio(w, p);
        if (r < best.estimate) best = {r, std::move(w)};
    }
    return best;
}

double ramon_gap(double x, double p) {
    return 2.0 * std::pow(std::abs(x - 1.0), p) - std::pow(std::abs(x), p) + 1.0 - p * (1.0 - x);
}

CubeSubset::CubeSubset(int n, std::vector<bool> membership) : n_(n), membership_(std::move(membership)) {
    check_dim(n, kMaxDim, "CubeSubset");
    if (membership_.size() != (std::size_t{1} << n))
        throw std::invalid_argument("CubeSubset: need exactly 2^n membership bits");
    cardinality_ = static_cast<std::size_t>(std::count(membership_.begin(), membership_.end(), true));
}

CubeSubset CubeSubset::from_mask(int n, std::uint64_t mask) {
    check_dim(n, 6, "CubeSubset::from_mask");
    std::vector<bool> bits(std::size_t{1} << n);
    for (std::size_t m = 0; m < bits.size(); ++m) bits[m] = (mask >> m) & 1U;
    return {n, std::move(bits)};
}

CubeSubset CubeSubset::halfcube(int n, int j) {
    check_dim(n, kMaxDim, "CubeSubset");
    if (j < 0 || j >= n) throw std::out_of_range("halfcube: axis out of range");
    std::vector<bool> bits(std::size_t{1} << n);
    for (std::size_t m = 0; m < bits.size(); ++m) bits[m] = (m >> j) & 1U;
    return {n, std::move(bits)};
}

std::uint64_t CubeSubset::mask() const {
    if (n_ > 6) throw std::out_of_range("CubeSubset::mask: n must be <= 6");
    std::uint64_t out = 0;
    for (std::size_t m = 0; m < membership_.size(); ++m)
        if (membership_[m]) out |= std::uint64_t{1} << m;
    return out;
}

CubeFunction CubeSubset::sign_function() const {
    std::vector<double> v(membership_.size());
    for (std::size_t m = 0; m < v.size(); ++m) v[m] = membership_[m] ? 1.0 : -1.0;
    return {n_, std::move(v)};
}

CubeFunction surface_weight(const CubeSubset& a) {
    const int n = a.dim();
    std::vector<double> w(std::size_t{1} << n, 0.0);
    for (std::size_t m = 0; m < w.size(); ++m)
        for (int j = 0; j < n; ++j)
            if (a.contains(m) != a.contains(m ^ (std::size_t{1} << j))) w[m] += 1.0;
    return {n, std::move(w)};
}

SigmaResult sigma_exhaustive(int n, double p) {
    check_dim(n, kMaxSigmaDim, "sigma_exhaustive");
    if (!(p >= 0.0)) throw std::domain_error("sigma_exhaustive: p must be >= 0");
    const unsigned vertices = 1U << n;
    const int half = static_cast<int>(vertices / 2);
    std::vector<double> weight_pow(n + 1);
    for (int k = 0; k <= n; ++k) weight_pow[k] = k == 0 ? 0.0 : std::pow(static_cast<double>(k), 0.5 * p);

    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    const std::uint32_t limit = vertices == 32 ? 0xFFFFFFFFU : (1U << vertices) - 1U;
    for (std::uint32_t mask = 0;; ++mask) {
        if (std::popcount(mask) == half) {
            std::vector<int> hist(n + 1, 0);
            for (unsigned m = 0; m < vertices; ++m) {
                const bool in = (mask >> m) & 1U;
                int w = 0;
                for (int j = 0; j < n; ++j) w += in != static_cast<bool>((mask >> (m ^ (1U << j))) & 1U);
                ++hist[w];
            }
            double score = 0.0;
            for (int k = 0; k <= n; ++k) score += hist[k] * weight_pow[k];
            score /= static_cast<double>(vertices);
            if (score < best) {
                best = score;
                best_mask = mask;
            }
        }
        if (mask == limit) break;
    }
    return {best, CubeSubset::from_mask(n, best_mask)};
}

double induction_step_gap(const CubeFunction& f, const bellman::AlphaContext& ctx, int j, double tol) {
    check_axis(f, j);
    const CubeFunction avg = average_axis(f, j);
    const CubeFunction grad_f = gradient_norm(f);
    const CubeFunction grad_avg = gradient_norm(avg);
    const std::size_t bit = std::size_t{1} << j;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < f.size(); ++m) {
        if (m & bit) continue;
        const double left = duality::dual_M(ctx, avg[m], grad_avg[m], tol);
        const double right = 0.5 * (duality::dual_M(ctx, f[m], grad_f[m], tol) +
                                    duality::dual_M(ctx, f[m | bit], grad_f[m | bit], tol));
        worst = std::min(worst, left - right);
    }
    return worst;
}

double full_chain_gap(const CubeFunction& f, const bellman::AlphaContext& ctx, double tol) {
    const CubeFunction grad = gradient_norm(f);
    double avg = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) avg += duality::dual_M(ctx, f[m], grad[m], tol);
    avg /= static_cast<double>(f.size());
    return duality::dual_M(ctx, expectation(f), 0.0, tol) - avg;
}

CubeFunction random_function(int n, std::uint64_t seed) {
    check_dim(n, kMaxDim, "random_function");
    Rng rng(seed);
    std::vector<double> v(std::size_t{1} << n);
    for (double& x : v) x = rng.normal();
    return {n, std::move(v)};
}

}  // namespace hamdual::cube
