#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hamdual::dyadic {

inline constexpr int kMaxDepth = 16;
inline constexpr int kDefaultDepth = 8;

/// A step function g on [0,1) with 2^depth equal dyadic pieces, viewed as
/// the terminal value of its dyadic martingale g_0, ..., g_depth.
class DyadicMartingale {
public:
    DyadicMartingale(int depth, std::vector<double> leaves);

    int depth() const { return depth_; }
    std::span<const double> leaves() const { return leaves_; }

    /// g_n for n = 0..depth; level n has 2^n entries.
    const std::vector<std::vector<double>>& levels() const { return levels_; }

    /// S(g) per leaf: (sum_{n<m} (g_{n+1} - g_n)^2)^(1/2).
    const std::vector<double>& square() const { return square_; }

    /// Integral over [0,1) of a leafwise function of (g, S).
    double integrate(const std::function<double(double, double)>& h) const;
    double mean() const { return levels_.front().front(); }

private:
    int depth_;
    std::vector<double> leaves_;
    std::vector<std::vector<double>> levels_;
    std::vector<double> square_;
};

std::vector<std::vector<double>> martingale_levels(const DyadicMartingale& g);
std::vector<double> square_function(const DyadicMartingale& g);

/// Builds g from a start value and Haar increments: level n carries 2^n
/// increments d, and the children of a level-n interval get g_n +- d.
DyadicMartingale from_increments(double start, const std::vector<std::vector<double>>& increments);

/// int g^2 - (int g)^2 - int S^2; zero up to rounding.
double orthogonality_defect(const DyadicMartingale& g);

/// U(int g, 0) - int U(g, S(g)). Should be >= 0 for a valid U.
double master_bound_gap(const std::function<double(double, double)>& u_fn, const DyadicMartingale& g);

/// exp(int g) - int exp(g - S^2 / 2). Should be >= 0.
double cww_gap(const DyadicMartingale& g);

struct TailCheck {
    double measure;
    double bound;
    bool ok;
};

/// |{g >= lambda}| against exp(-lambda^2 / (2 ||S||_inf^2)), for mean-zero g.
TailCheck wolff_tail_check(const DyadicMartingale& g, double lambda);

struct DavisCheck {
    double lhs;
    double rhs;
    bool ok;
};

/// p <= 2: lhs = ||g||_p, rhs = s_p ||S||_p.
/// p > 2:  lhs = s_p ||S||_p, rhs = ||g||_p.
/// ok = lhs <= rhs (1 + rel_tol).
DavisCheck davis_ratio(const DyadicMartingale& g, double p, double s_p, double rel_tol = 1e-12);

/// Random martingale of the given depth from Rng(seed): a per-sample ratio r
/// uniform in [0.5, 1.2], then level-n increments uniform in [-1, 1] times
/// r^n. The start value is `mean`.
DyadicMartingale random_martingale(int depth, std::uint64_t seed, double mean = 0.0);

}  // namespace hamdual::dyadic
