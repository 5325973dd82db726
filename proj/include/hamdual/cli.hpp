#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hamdual/report.hpp"

namespace hamdual::cli {

enum class Format { Csv, Json };

/// Parsed command line. Unset optionals fall back to per-command defaults.
struct RunConfig {
    std::string command;
    std::string target;  ///< verify only
    std::optional<double> alpha_min, alpha_max, alpha_step;
    std::vector<double> p_grid;
    std::optional<int> n;
    int depth = 8;
    std::optional<std::int64_t> samples;
    std::uint64_t seed = 0;
    std::optional<double> tol;
    unsigned workers = 1;
    Format format = Format::Csv;
    std::string out;
    bool timing = false;
};

/// One row of a verify report.
struct Record {
    std::string check;
    std::string params;
    ViolationReport report;
    double seconds = 0.0;
};

using Cell = std::variant<double, std::int64_t, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// %.17g, with inf / nan spelled out.
std::string format_double(double v);

/// Shortest of %.15g / %.17g that reads back exactly.
std::string format_param(double v);

void write_table(std::ostream& os, const Table& t, Format fmt);
Table records_table(const std::vector<Record>& recs, bool timing);

/// Inclusive arithmetic grid min, min + step, ..., max.
std::vector<double> make_grid(double min, double max, double step);

// Sweeps shared by the CLI and the acceptance runner. Each returns one
// record per check and parameter set, in a fixed order.

/// Obstacle, main-inequality and t-convexity on `per_axis`^3 points of
/// [-3,3] x (0,3] x [-3,3]; at alpha = 2 also the exact identity (tol 1e-12).
std::vector<Record> sweep_bellman(const std::vector<double>& alphas, std::size_t per_axis, double tol,
                                  unsigned workers);

/// Dual obstacle and dual inequality on `per_axis`^4 points of
/// [-2,2] x [0,2] x [-1,1] x [-1,1]; the alpha = 2 closed form (tol 1e-8);
/// the vector inequality with N = 3 on `vector_samples` random tuples.
std::vector<Record> sweep_dual(const std::vector<double>& alphas, std::size_t per_axis,
                               std::int64_t vector_samples, std::uint64_t seed, double tol, unsigned workers);

/// Poincare gap (theorem1_gap) on seeded random f for each (n, p), plus the dictator at p = 2.
std::vector<Record> sweep_cube(const std::vector<int>& ns, const std::vector<double>& ps, std::int64_t samples,
                               std::uint64_t seed, double tol, unsigned workers);

/// Rademacher-average gap on seeded random f for each (n, p).
std::vector<Record> sweep_rademacher(const std::vector<int>& ns, const std::vector<double>& ps,
                                     std::int64_t samples, std::uint64_t seed, double tol, unsigned workers);

/// Orthogonality, CWW, Wolff tails, Davis ratios and master-bound gaps on
/// seeded random martingales.
std::vector<Record> sweep_dyadic(int depth, const std::vector<double>& ps, std::int64_t samples,
                                 std::uint64_t seed, double tol, unsigned workers);

/// Monge-Ampere eigenvalues and determinant of the two closed-form M at
/// `points` seeded points of [0.2, 2]^2.
std::vector<Record> sweep_ma(std::int64_t points, std::uint64_t seed, double tol);

/// Minimax against the 3/2 closed form on a per_axis^2 grid of [-2,2] x [0,2],
/// and the cubic identity on `triples` random triples (tol 1e-12).
std::vector<Record> sweep_p32(std::size_t per_axis, std::int64_t triples, std::uint64_t seed, double tol,
                              unsigned workers);

/// Rows (alpha, s, sqrt(2/alpha), 1, checked, ok). Bounds apply for alpha >= 2.
Table constants_table(const std::vector<double>& alphas, bool& violated);

/// Rows for p in the grid; violated if some p in (1,2) has LHS <= (p-1)^p.
Table poincare_table(const std::vector<double>& ps, bool& violated);

/// max{sqrt(2/pi), s_{p'}^p} on [1, 2], 1 above 2, 0 below 1.
double sigma_lower_bound(double p);

Table sigma_table(int n, const std::vector<double>& ps, double tol, bool& violated);

/// Entry point. Exit codes: 0 clean, 1 usage, 2 violation, 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hamdual::cli
