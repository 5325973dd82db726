#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hamdual/bellman.hpp"

namespace hamdual::cube {

/// Largest dimension a CubeFunction may have.
inline constexpr int kMaxDim = 20;

/// f : {-1,1}^n -> R stored as 2^n values. Bit j of the index m is set iff
/// x_j = +1 (axes are numbered from 0).
class CubeFunction {
public:
    CubeFunction(int n, std::vector<double> values);

    /// All-zero function.
    static CubeFunction zeros(int n);
    static CubeFunction constant(int n, double c);
    /// f(x) = x_j
    static CubeFunction dictator(int n, int j);
    /// f(x) = x_0 + ... + x_{n-1}
    static CubeFunction coordinate_sum(int n);
    /// f(x) = prod_{j in mask} x_j
    static CubeFunction monomial(int n, std::uint32_t mask);

    int dim() const { return n_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t m) const { return values_[m]; }
    std::span<const double> values() const { return values_; }

    /// x_j at vertex m: +1 or -1.
    static double coordinate(std::size_t m, int j) { return ((m >> j) & 1U) ? 1.0 : -1.0; }

private:
    int n_;
    std::vector<double> values_;
};

CubeFunction operator+(const CubeFunction& f, const CubeFunction& g);
CubeFunction operator*(double a, const CubeFunction& f);

/// d_j f(x) = (f(x) - f(S_j x)) / 2
CubeFunction partial_derivative(const CubeFunction& f, int j);

/// |grad f|(x) = (sum_j (d_j f(x))^2)^(1/2)
CubeFunction gradient_norm(const CubeFunction& f);

/// Average over the coordinate j; the result no longer depends on x_j.
CubeFunction average_axis(const CubeFunction& f, int j);

/// Relabels axes: output axis perm[j] carries input axis j.
CubeFunction permute_axes(const CubeFunction& f, std::span<const int> perm);

double expectation(const CubeFunction& f);

/// (E|f|^p)^(1/p)
double pnorm(const CubeFunction& f, double p);

/// E|f|^p
double abs_moment(const CubeFunction& f, double p);

/// (E|grad f|^p)^(1/p) - s (E|f|^p - |Ef|^p)^(1/p); >= 0 for s = s_{p'}.
double theorem1_gap(const CubeFunction& f, double p, double s);

/// Largest dimension accepted by rademacher_gap (4^n terms).
inline constexpr int kMaxRademacherDim = 12;

/// Sharp Khinchin factor 2^((p-2)/2) min(1, Gamma((p+1)/2) / Gamma(3/2)).
double khinchin_factor(double p);

/// E_x E_x' |sum_j x'_j d_j f(x)|^p - s^p khinchin_factor(p) E|f - Ef|^p,
/// both averages by exhaustive enumeration.
double rademacher_gap(const CubeFunction& f, double p, double s);

/// E|grad f|^p / (E|f|^p - |Ef|^p); +inf when the denominator vanishes.
double poincare_ratio(const CubeFunction& f, double p);

struct ConstantSearch {
    double estimate;
    CubeFunction witness;
};

/// Largest dimension accepted by best_constant_search.
inline constexpr int kMaxSearchDim = 6;

/// Lower limit on E|f|^p - |Ef|^p (with max|f| = 1) during the search.
inline constexpr double kSearchDenominatorFloor = 1e-8;

/// Numerical upper estimate of c_p(n) = inf_f E|grad f|^p / (E|f|^p - |Ef|^p):
/// multi-start cyclic coordinate descent on log(ratio) over the 2^n values,
/// each coordinate by golden section on a window that halves whenever a
/// sweep stalls, f rescaled to max|f| = 1 after every sweep. Starts: every dictator, 1 + 0.1 x_0, then `restarts`
/// standard-normal draws from Rng(case_seed(seed, ...)).
ConstantSearch best_constant_search(int n, double p, int restarts, std::uint64_t seed);

/// 2|x-1|^p - |x|^p + 1 - p(1-x); >= 0 for p in [1, 2].
double ramon_gap(double x, double p);

/// A ⊂ {-1,1}^n as a membership bitset over vertex indices.
class CubeSubset {
public:
    CubeSubset(int n, std::vector<bool> membership);
    /// n <= 6: membership from the bits of `mask` (bit m = vertex m).
    static CubeSubset from_mask(int n, std::uint64_t mask);
    /// {x : x_j = +1}
    static CubeSubset halfcube(int n, int j);

    int dim() const { return n_; }
    bool contains(std::size_t m) const { return membership_[m]; }
    std::size_t cardinality() const { return cardinality_; }
    /// Indicator bits as an integer (n <= 6).
    std::uint64_t mask() const;
    /// +1 on A, -1 off A.
    CubeFunction sign_function() const;

private:
    int n_;
    std::vector<bool> membership_;
    std::size_t cardinality_;
};

/// w_A(x) = number of neighbours y of x with exactly one of x, y in A.
CubeFunction surface_weight(const CubeSubset& a);

struct SigmaResult {
    double sigma;
    CubeSubset argmin;
};

/// Largest dimension accepted by sigma_exhaustive.
inline constexpr int kMaxSigmaDim = 4;

/// min over |A| = 2^(n-1) of E w_A^(p/2), exhaustively. Ties go to the
/// numerically smallest membership mask. Each candidate is scored from its
/// histogram of w values, so equal histograms score bit-identically.
SigmaResult sigma_exhaustive(int n, double p);

/// min over vertices (x_j averaged out) of
///   M(E_j f, |grad E_j f|) - E_j M(f, |grad f|); >= 0.
double induction_step_gap(const CubeFunction& f, const bellman::AlphaContext& ctx, int j,
                          double tol = 1e-10);

/// M(Ef, 0) - E M(f, |grad f|); >= 0.
double full_chain_gap(const CubeFunction& f, const bellman::AlphaContext& ctx, double tol = 1e-10);

/// Standard-normal values from Rng(seed).
CubeFunction random_function(int n, std::uint64_t seed);

}  // namespace hamdual::cube
