#include "hamdual/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <thread>

#include "hamdual/bellman.hpp"
#include "hamdual/cube.hpp"
#include "hamdual/duality.hpp"
#include "hamdual/dyadic.hpp"
#include "hamdual/errors.hpp"
#include "hamdual/parallel.hpp"
#include "hamdual/random.hpp"
#include "hamdual/specfun.hpp"

namespace hamdual::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double conjugate(double p) { return p / (p - 1.0); }

// Stream id for a parameter pair, independent of grid order.
std::uint64_t stream_of(std::uint64_t tag, double v, std::uint64_t k = 0) {
    return splitmix64(tag ^ splitmix64(std::bit_cast<std::uint64_t>(v) ^ (k << 1)));
}

std::string params_of(std::initializer_list<std::pair<const char*, double>> kv) {
    std::string s;
    for (const auto& [k, v] : kv) {
        if (!s.empty()) s += ';';
        s += k;
        s += '=';
        s += format_param(v);
    }
    return s;
}

template <class PerIndex>
ViolationReport run_sweep(std::size_t count, unsigned workers, double tol, PerIndex per_index) {
    auto parts = parallel_chunks<ViolationReport>(count, workers, [&](std::size_t b, std::size_t e, unsigned) {
        ViolationReport rep(tol);
        for (std::size_t i = b; i < e; ++i) per_index(i, rep);
        return rep;
    });
    ViolationReport total(tol);
    for (const auto& r : parts) total.merge(r);
    return total;
}

std::string join_location(const std::vector<double>& loc) {
    std::string s;
    for (double v : loc) {
        if (!s.empty()) s += ';';
        s += format_double(v);
    }
    return s;
}

std::string cell_text(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) return format_double(*d);
    if (const std::int64_t* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (const bool* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    return std::get<std::string>(c);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string json_value(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) return format_double(*d);
        return nlohmann::json(format_double(*d)).dump();
    }
    if (const std::int64_t* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (const bool* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    return nlohmann::json(std::get<std::string>(c)).dump();
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_param(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    if (std::strtod(buf, nullptr) == v) return buf;
    return format_double(v);
}

void write_table(std::ostream& os, const Table& t, Format fmt) {
    if (fmt == Format::Csv) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(row[i]));
            os << '\n';
        }
        return;
    }
    for (const auto& row : t.rows) {
        os << '{';
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << nlohmann::json(t.columns[i]).dump() << ':' << json_value(row[i]);
        os << "}\n";
    }
}

Table records_table(const std::vector<Record>& recs, bool timing) {
    Table t;
    t.columns = {"check", "params", "worst_gap", "tol", "n_checked", "n_violations", "worst_check", "worst_location"};
    if (timing) t.columns.push_back("wall_time");
    for (const auto& r : recs) {
        std::vector<Cell> row{r.check,
                              r.params,
                              r.report.worst_gap,
                              r.report.tol,
                              static_cast<std::int64_t>(r.report.n_checked),
                              static_cast<std::int64_t>(r.report.n_violations),
                              r.report.worst_check,
                              join_location(r.report.worst_location)};
        if (timing) row.emplace_back(r.seconds);
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<double> make_grid(double min, double max, double step) {
    if (!(step > 0.0) || !(min <= max)) throw std::invalid_argument("grid: need min <= max and step > 0");
    std::vector<double> g;
    const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) g.push_back(min + static_cast<double>(k) * step);
    return g;
}

std::vector<Record> sweep_bellman(const std::vector<double>& alphas, std::size_t per_axis, double tol,
                                  unsigned workers) {
    std::vector<Record> out;
    bellman::GridSpec grid;
    grid.axes = {{-3.0, 3.0, per_axis}, {3.0 / static_cast<double>(per_axis), 3.0, per_axis}, {-3.0, 3.0, per_axis}};
    for (double alpha : alphas) {
        const auto t0 = Clock::now();
        const bellman::AlphaContext ctx = bellman::make_context(alpha);
        Record r{"bellman", params_of({{"alpha", alpha}}), bellman::verify_bellman_grid(ctx, grid, tol, workers), 0};
        r.seconds = seconds_since(t0);
        out.push_back(std::move(r));
        if (alpha == 2.0) {
            const auto t1 = Clock::now();
            Record e{"bellman.alpha2_identity", params_of({{"alpha", alpha}}), ViolationReport{}, 0};
            e.report = run_sweep(grid.cells(), workers, 1e-12, [&](std::size_t i, ViolationReport& rep) {
                const std::vector<double> c = grid.cell(i);
                const double p = c[0], q = c[1], a = c[2];
                const double worst = std::max({std::abs(bellman::obstacle_gap(ctx, p, q)),
                                               std::abs(bellman::main_inequality_gap(ctx, p, q, a)),
                                               std::abs(bellman::convexity_in_t_gap(ctx, p, q * q, q * q + a * a))});
                rep.record(-worst, i, c, "abs_gap");
            });
            e.seconds = seconds_since(t1);
            out.push_back(std::move(e));
        }
    }
    return out;
}

std::vector<Record> sweep_dual(const std::vector<double>& alphas, std::size_t per_axis,
                               std::int64_t vector_samples, std::uint64_t seed, double tol, unsigned workers) {
    std::vector<Record> out;
    const bellman::Axis ax{-2.0, 2.0, per_axis}, ay{0.0, 2.0, per_axis}, aa{-1.0, 1.0, per_axis},
        ab{-1.0, 1.0, per_axis};
    const std::size_t n2 = per_axis * per_axis;
    for (double alpha : alphas) {
        const bellman::AlphaContext ctx = bellman::make_context(alpha);

        auto t0 = Clock::now();
        // M on the (x, y) plane, shared by both checks.
        std::vector<double> m_xy(n2);
        {
            auto parts = parallel_chunks<int>(n2, workers, [&](std::size_t b, std::size_t e, unsigned) {
                for (std::size_t i = b; i < e; ++i) m_xy[i] = duality::dual_M(ctx, ax.at(i / per_axis), ay.at(i % per_axis));
                return 0;
            });
        }
        Record obs{"dual.obstacle", params_of({{"alpha", alpha}}), ViolationReport{}, 0};
        obs.report = run_sweep(n2, 1, tol, [&](std::size_t i, ViolationReport& rep) {
            const double x = ax.at(i / per_axis), y = ay.at(i % per_axis);
            rep.record(m_xy[i] - duality::dual_obstacle(ctx, x, y), i, {x, y}, "obstacle");
        });
        const double obs_seconds = seconds_since(t0);

        t0 = Clock::now();
        Record ineq{"dual.inequality", params_of({{"alpha", alpha}}), ViolationReport{}, 0};
        ineq.report = run_sweep(n2 * n2, workers, tol, [&](std::size_t i, ViolationReport& rep) {
            const std::size_t xy = i / n2, abi = i % n2;
            const double x = ax.at(xy / per_axis), y = ay.at(xy % per_axis);
            const double a = aa.at(abi / per_axis), b = ab.at(abi % per_axis);
            const double gap = 2.0 * m_xy[xy] - duality::dual_M(ctx, x + a, std::hypot(a, y + b)) -
                               duality::dual_M(ctx, x - a, std::hypot(a, y - b));
            rep.record(gap, i, {x, y, a, b}, "dual_inequality");
        });
        ineq.seconds = seconds_since(t0) + obs_seconds;
        obs.seconds = obs_seconds;
        out.push_back(std::move(obs));
        out.push_back(std::move(ineq));

        if (alpha == 2.0) {
            Record cf{"dual.alpha2_closed_form", params_of({{"alpha", alpha}}), ViolationReport{}, 0};
            cf.report = run_sweep(n2, 1, 1e-8, [&](std::size_t i, ViolationReport& rep) {
                const double x = ax.at(i / per_axis), y = ay.at(i % per_axis);
                rep.record(-std::abs(m_xy[i] - 0.25 * (x * x - y * y)), i, {x, y}, "abs_diff");
            });
            out.push_back(std::move(cf));
        }

        t0 = Clock::now();
        Record vec{"dual.vector_main", params_of({{"alpha", alpha}, {"N", 3}}), ViolationReport{}, 0};
        const std::uint64_t stream = stream_of(0xD0A1ULL, alpha);
        vec.report = run_sweep(static_cast<std::size_t>(vector_samples), workers, tol,
                               [&](std::size_t i, ViolationReport& rep) {
                                   Rng rng(case_seed(seed, stream, i));
                                   const double x = rng.uniform(-2.0, 2.0), a = rng.uniform(-1.0, 1.0);
                                   double y[3], b[3];
                                   for (double& v : y) v = rng.uniform(-1.0, 1.0);
                                   for (double& v : b) v = rng.uniform(-1.0, 1.0);
                                   rep.record(duality::vector_main_gap(ctx, x, a, y, b), i,
                                              {x, a, y[0], y[1], y[2], b[0], b[1], b[2]}, "vector_main");
                               });
        vec.seconds = seconds_since(t0);
        out.push_back(std::move(vec));
    }
    return out;
}

std::vector<Record> sweep_cube(const std::vector<int>& ns, const std::vector<double>& ps, std::int64_t samples,
                               std::uint64_t seed, double tol, unsigned workers) {
    std::vector<Record> out;
    for (int n : ns) {
        for (double p : ps) {
            const auto t0 = Clock::now();
            const double s = specfun::smallest_zero(conjugate(p));
            const std::uint64_t stream = stream_of(0xC0BEULL, p, static_cast<std::uint64_t>(n));
            Record r{"cube.theorem1", params_of({{"n", n}, {"p", p}}), ViolationReport{}, 0};
            r.report = run_sweep(static_cast<std::size_t>(samples), workers, tol, [&](std::size_t i, ViolationReport& rep) {
                const cube::CubeFunction f = cube::random_function(n, case_seed(seed, stream, i));
                rep.record(cube::theorem1_gap(f, p, s), i, {static_cast<double>(i)}, "theorem1");
            });
            r.seconds = seconds_since(t0);
            out.push_back(std::move(r));
        }
        if (std::find(ps.begin(), ps.end(), 2.0) != ps.end()) {
            const double s2 = specfun::smallest_zero(2.0);
            Record d{"cube.dictator_p2", params_of({{"n", n}, {"p", 2.0}}), ViolationReport(1e-12), 0};
            for (int j = 0; j < n; ++j)
                d.report.record(-std::abs(cube::theorem1_gap(cube::CubeFunction::dictator(n, j), 2.0, s2)),
                                static_cast<std::uint64_t>(j), {static_cast<double>(j)}, "abs_gap");
            out.push_back(std::move(d));
        }
    }
    return out;
}

std::vector<Record> sweep_rademacher(const std::vector<int>& ns, const std::vector<double>& ps,
                                     std::int64_t samples, std::uint64_t seed, double tol, unsigned workers) {
    std::vector<Record> out;
    for (int n : ns) {
        for (double p : ps) {
            const auto t0 = Clock::now();
            const double s = specfun::smallest_zero(conjugate(p));
            const std::uint64_t stream = stream_of(0x4ADEULL, p, static_cast<std::uint64_t>(n));
            Record r{"rademacher", params_of({{"n", n}, {"p", p}}), ViolationReport{}, 0};
            r.report = run_sweep(static_cast<std::size_t>(samples), workers, tol, [&](std::size_t i, ViolationReport& rep) {
                const cube::CubeFunction f = cube::random_function(n, case_seed(seed, stream, i));
                rep.record(cube::rademacher_gap(f, p, s), i, {static_cast<double>(i)}, "rademacher");
            });
            r.seconds = seconds_since(t0);
            out.push_back(std::move(r));
        }
    }
    return out;
}

namespace {

dyadic::DyadicMartingale rescaled(const dyadic::DyadicMartingale& g, double scale, double shift) {
    std::vector<double> leaves(g.leaves().begin(), g.leaves().end());
    for (double& v : leaves) v = scale * v + shift;
    return {g.depth(), std::move(leaves)};
}

}  // namespace

std::vector<Record> sweep_dyadic(int depth, const std::vector<double>& ps, std::int64_t samples,
                                 std::uint64_t seed, double tol, unsigned workers) {
    const auto t0 = Clock::now();
    const std::vector<double> lambdas{0.5, 1.0, 2.0};
    const std::vector<double> master_alphas{2.0, 3.0, 4.0, 6.0};
    constexpr double kMasterTol = 1e-9;

    std::vector<double> s_p;
    for (double p : ps) s_p.push_back(specfun::smallest_zero(p));
    std::vector<bellman::AlphaContext> ctxs;
    for (double a : master_alphas) ctxs.push_back(bellman::make_context(a));

    // Report slots: orthogonality, cww, wolff x3, davis x|ps|, master x4, master_exp.
    const std::size_t n_davis = ps.size();
    const std::size_t slots = 2 + lambdas.size() + n_davis + master_alphas.size() + 1;
    auto make_reports = [&] {
        std::vector<ViolationReport> reps;
        reps.emplace_back(tol);
        reps.emplace_back(tol);
        for (std::size_t k = 0; k < lambdas.size(); ++k) reps.emplace_back(0.0);
        for (std::size_t k = 0; k < n_davis; ++k) reps.emplace_back(1e-12);
        for (std::size_t k = 0; k <= master_alphas.size(); ++k) reps.emplace_back(kMasterTol);
        return reps;
    };

    auto parts = parallel_chunks<std::vector<ViolationReport>>(
        static_cast<std::size_t>(samples), workers, [&](std::size_t b, std::size_t e, unsigned) {
            std::vector<ViolationReport> reps = make_reports();
            for (std::size_t i = b; i < e; ++i) {
                const std::vector<double> loc{static_cast<double>(i)};
                const dyadic::DyadicMartingale g = dyadic::random_martingale(depth, case_seed(seed, 0xDA1ULL, i));
                const double shift = Rng(case_seed(seed, 0xDA2ULL, i)).uniform(-1.0, 1.0);
                const dyadic::DyadicMartingale gs = rescaled(g, 1.0, shift);
                std::size_t k = 0;

                const double var = gs.integrate([m = gs.mean()](double v, double) { return (v - m) * (v - m); });
                reps[k++].record(-std::abs(dyadic::orthogonality_defect(gs)) / std::max(1.0, var), i, loc,
                                 "orthogonality");
                reps[k++].record(dyadic::cww_gap(gs) / std::max(1.0, std::exp(gs.mean())), i, loc, "cww");

                const auto& sq = g.square();
                const double s_inf = *std::max_element(sq.begin(), sq.end());
                const dyadic::DyadicMartingale gn = rescaled(g, 1.0 / s_inf, 0.0);
                for (double lam : lambdas) {
                    const dyadic::TailCheck tc = dyadic::wolff_tail_check(gn, lam);
                    reps[k++].record(tc.bound - tc.measure, i, loc, "wolff");
                }
                for (std::size_t j = 0; j < n_davis; ++j) {
                    const dyadic::DavisCheck dc = dyadic::davis_ratio(g, ps[j], s_p[j]);
                    reps[k++].record((dc.rhs - dc.lhs) / std::max(dc.rhs, 1e-300), i, loc, "davis");
                }
                for (const auto& ctx : ctxs) {
                    auto u = [&ctx](double p, double q) { return bellman::U(ctx, p, q); };
                    const double scale =
                        std::max(1.0, gs.integrate([&u](double v, double s) { return std::abs(u(v, s)); }));
                    reps[k++].record(dyadic::master_bound_gap(u, gs) / scale, i, loc, "master_davis");
                }
                const double exp_scale = std::max(1.0, std::exp(gs.mean()));
                reps[k++].record(dyadic::master_bound_gap(duality::exp_U, gs) / exp_scale, i, loc, "master_exp");
            }
            return reps;
        });

    std::vector<ViolationReport> total = make_reports();
    for (const auto& part : parts)
        for (std::size_t k = 0; k < slots; ++k) total[k].merge(part[k]);

    const double secs = seconds_since(t0);
    const double d = depth;
    std::vector<Record> out;
    std::size_t k = 0;
    out.push_back({"dyadic.orthogonality", params_of({{"depth", d}}), total[k++], secs});
    out.push_back({"dyadic.cww", params_of({{"depth", d}}), total[k++], secs});
    for (double lam : lambdas) out.push_back({"dyadic.wolff", params_of({{"depth", d}, {"lambda", lam}}), total[k++], secs});
    for (double p : ps) out.push_back({"dyadic.davis", params_of({{"depth", d}, {"p", p}}), total[k++], secs});
    for (double a : master_alphas)
        out.push_back({"dyadic.master_davis", params_of({{"depth", d}, {"alpha", a}}), total[k++], secs});
    out.push_back({"dyadic.master_exp", params_of({{"depth", d}}), total[k++], secs});
    return out;
}

std::vector<Record> sweep_ma(std::int64_t points, std::uint64_t seed, double tol) {
    struct Candidate {
        const char* name;
        double (*fn)(double, double);
    };
    const Candidate cands[] = {{"logsob", duality::logsob_M}, {"p32", duality::poincare32_closed_form}};
    std::vector<Record> out;
    for (const auto& c : cands) {
        const auto t0 = Clock::now();
        Record eig{std::string("ma.eigenvalues.") + c.name, "", ViolationReport(tol), 0};
        Record det{std::string("ma.determinant.") + c.name, "", ViolationReport(tol), 0};
        Rng rng(case_seed(seed, 0x3A3AULL, 0));
        for (std::int64_t i = 0; i < points; ++i) {
            const double x = rng.uniform(0.2, 2.0), y = rng.uniform(0.2, 2.0);
            const duality::MongeAmpere ma =
                duality::monge_ampere_eigs(c.fn, x, y, duality::default_ma_step(x, y));
            eig.report.record(-ma.lambda_max, static_cast<std::uint64_t>(i), {x, y}, "lambda_max");
            det.report.record(-std::abs(ma.det) / ma.scale(), static_cast<std::uint64_t>(i), {x, y}, "abs_det");
        }
        eig.seconds = det.seconds = seconds_since(t0);
        out.push_back(std::move(eig));
        out.push_back(std::move(det));
    }
    return out;
}

std::vector<Record> sweep_p32(std::size_t per_axis, std::int64_t triples, std::uint64_t seed, double tol,
                              unsigned workers) {
    std::vector<Record> out;
    auto t0 = Clock::now();
    const bellman::Axis ax{-2.0, 2.0, per_axis}, ay{0.0, 2.0, per_axis};
    Record mm{"p32.minimax", "", ViolationReport{}, 0};
    mm.report = run_sweep(per_axis * per_axis, workers, tol, [&](std::size_t i, ViolationReport& rep) {
        const double x = ax.at(i / per_axis), y = ay.at(i % per_axis);
        rep.record(-std::abs(duality::poincare32_check(x, y).diff), i, {x, y}, "abs_diff");
    });
    mm.seconds = seconds_since(t0);
    out.push_back(std::move(mm));

    t0 = Clock::now();
    Record id{"p32.identity", "", ViolationReport(1e-12), 0};
    Rng rng(case_seed(seed, 0x9032ULL, 0));
    for (std::int64_t i = 0; i < triples; ++i) {
        const double p = rng.uniform(-2.0, 2.0), q = rng.uniform(-2.0, 2.0), a = rng.uniform(-2.0, 2.0);
        id.report.record(-std::abs(duality::poincare32_U_identity_gap(p, q, a)), static_cast<std::uint64_t>(i),
                         {p, q, a}, "abs_gap");
    }
    id.seconds = seconds_since(t0);
    out.push_back(std::move(id));
    return out;
}

Table constants_table(const std::vector<double>& alphas, bool& violated) {
    Table t;
    t.columns = {"alpha", "s_alpha", "lower", "upper", "bounds_apply", "ok"};
    violated = false;
    for (double a : alphas) {
        const double s = specfun::smallest_zero(a);
        const double lower = std::sqrt(2.0 / a);
        const bool apply = a >= 2.0;
        const bool ok = !apply || (lower <= s && s <= 1.0);
        violated = violated || !ok;
        t.rows.push_back({a, s, lower, 1.0, apply, ok});
    }
    return t;
}

Table poincare_table(const std::vector<double>& ps, bool& violated) {
    Table t;
    t.columns = {"p", "p_conj", "s_conj", "s_conj_pow_p", "ns", "lhs", "two_over_pi", "lower_max", "lhs_gt_ns",
                 "degenerate"};
    violated = false;
    const double two_over_pi = 2.0 / std::numbers::pi;
    for (double p : ps) {
        const double pc = conjugate(p);
        const double s = specfun::smallest_zero(pc);
        const double sp = std::pow(s, p);
        const double ns = std::pow(p - 1.0, p);
        const double lhs = sp * cube::khinchin_factor(p);
        const bool strict = lhs > ns;
        if (p < 2.0 && !strict) violated = true;
        t.rows.push_back({p, pc, s, sp, ns, lhs, two_over_pi, std::max(two_over_pi, s), strict, s < two_over_pi});
    }
    return t;
}

double sigma_lower_bound(double p) {
    if (p > 2.0) return 1.0;
    if (p < 1.0) return 0.0;
    const double bobkov = std::sqrt(2.0 / std::numbers::pi);
    if (p == 1.0) return bobkov;  // s_{p'}^p -> 0 as p -> 1
    return std::max(bobkov, std::pow(specfun::smallest_zero(conjugate(p)), p));
}

Table sigma_table(int n, const std::vector<double>& ps, double tol, bool& violated) {
    Table t;
    t.columns = {"n", "p", "sigma", "lower_bound", "argmin", "ok"};
    violated = false;
    for (double p : ps) {
        const cube::SigmaResult r = cube::sigma_exhaustive(n, p);
        const double lb = sigma_lower_bound(p);
        const bool ok = r.sigma >= lb - tol;
        violated = violated || !ok;
        char hex[24];
        std::snprintf(hex, sizeof hex, "0x%llx", static_cast<unsigned long long>(r.argmin.mask()));
        t.rows.push_back({static_cast<std::int64_t>(n), p, r.sigma, lb, std::string(hex), ok});
    }
    return t;
}

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw UsageError(msg);
}

std::vector<double> alpha_values(const RunConfig& cfg, std::vector<double> fallback) {
    if (!cfg.alpha_min && !cfg.alpha_max) return fallback;
    require(cfg.alpha_min && cfg.alpha_max, "--alpha-min and --alpha-max must be given together");
    return make_grid(*cfg.alpha_min, *cfg.alpha_max, cfg.alpha_step.value_or(0.5));
}

std::vector<double> p_values(const RunConfig& cfg, std::vector<double> fallback) {
    return cfg.p_grid.empty() ? fallback : cfg.p_grid;
}

std::vector<int> n_values(const RunConfig& cfg, std::vector<int> fallback, int cap) {
    if (!cfg.n) return fallback;
    require(*cfg.n >= 1 && *cfg.n <= cap, "--n must lie in [1, " + std::to_string(cap) + "]");
    return {*cfg.n};
}

double tol_or(const RunConfig& cfg, double fallback) {
    const double t = cfg.tol.value_or(fallback);
    require(t > 0.0, "--tol must be > 0");
    return t;
}

std::int64_t samples_or(const RunConfig& cfg, std::int64_t fallback) {
    const std::int64_t s = cfg.samples.value_or(fallback);
    require(s >= 1, "--samples must be >= 1");
    return s;
}

int run_verify(const RunConfig& cfg, std::ostream& os) {
    std::vector<Record> recs;
    const std::string& t = cfg.target;
    if (t == "bellman" || t == "dual") {
        const auto alphas = alpha_values(cfg, t == "bellman" ? std::vector<double>{2, 3, 4, 6, 10}
                                                              : std::vector<double>{2, 3, 4});
        for (double a : alphas) require(a >= 2.0 && a <= 64.0, "alpha must lie in [2, 64] for " + t);
        if (t == "bellman")
            recs = sweep_bellman(alphas, 50, tol_or(cfg, 1e-9), cfg.workers);
        else
            recs = sweep_dual(alphas, 20, samples_or(cfg, 1000), cfg.seed, tol_or(cfg, 1e-6), cfg.workers);
    } else if (t == "cube" || t == "rademacher") {
        const auto ps = p_values(cfg, {1.1, 1.5, 1.9, 2.0});
        for (double p : ps) require(p > 1.0 && p <= 2.0, "p must lie in (1, 2]");
        if (t == "cube")
            recs = sweep_cube(n_values(cfg, {1, 2, 3, 4}, 16), ps, samples_or(cfg, 10000), cfg.seed,
                              tol_or(cfg, 1e-9), cfg.workers);
        else
            recs = sweep_rademacher(n_values(cfg, {1, 2, 3}, cube::kMaxRademacherDim), ps, samples_or(cfg, 10000),
                                    cfg.seed, tol_or(cfg, 1e-9), cfg.workers);
    } else if (t == "dyadic") {
        require(cfg.depth >= 1 && cfg.depth <= dyadic::kMaxDepth, "--depth must lie in [1, 16]");
        const auto ps = p_values(cfg, {1.0, 1.5, 2.0, 3.0, 4.0});
        for (double p : ps) require(p > 0.0 && p <= 64.0, "p must lie in (0, 64]");
        recs = sweep_dyadic(cfg.depth, ps, samples_or(cfg, 10000), cfg.seed, tol_or(cfg, 1e-12), cfg.workers);
    } else if (t == "ma") {
        recs = sweep_ma(samples_or(cfg, 100), cfg.seed, tol_or(cfg, 1e-6));
    } else {
        recs = sweep_p32(40, samples_or(cfg, 1000), cfg.seed, tol_or(cfg, 1e-7), cfg.workers);
    }
    write_table(os, records_table(recs, cfg.timing), cfg.format);
    const bool violated = std::any_of(recs.begin(), recs.end(), [](const Record& r) { return !r.report.clean(); });
    return violated ? 2 : 0;
}

int dispatch(const RunConfig& cfg, std::ostream& os) {
    bool violated = false;
    if (cfg.command == "constants") {
        const auto alphas = alpha_values(cfg, make_grid(2.0, 20.0, 0.5));
        for (double a : alphas) require(a > 0.0 && a <= 64.0, "alpha must lie in (0, 64]");
        write_table(os, constants_table(alphas, violated), cfg.format);
    } else if (cfg.command == "poincare-table") {
        const auto ps = p_values(cfg, {1.01, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 1.99, 2.0});
        for (double p : ps) require(p > 1.0 && p <= 2.0, "p must lie in (1, 2]");
        write_table(os, poincare_table(ps, violated), cfg.format);
    } else if (cfg.command == "sigma") {
        const int n = cfg.n.value_or(4);
        require(n >= 1 && n <= cube::kMaxSigmaDim, "--n must lie in [1, 4]");
        const auto ps = p_values(cfg, {1.0, 1.25, 1.5, 1.75, 2.0});
        for (double p : ps) require(p >= 0.0 && p <= 64.0, "p must lie in [0, 64]");
        write_table(os, sigma_table(n, ps, tol_or(cfg, 1e-9), violated), cfg.format);
    } else {
        return run_verify(cfg, os);
    }
    return violated ? 2 : 0;
}

unsigned default_workers(std::ostream& err, bool& bad) {
    bad = false;
    if (const char* env = std::getenv("TOOL_WORKERS")) {
        char* end = nullptr;
        const long w = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || w < 1 || w > 1024) {
            err << "TOOL_WORKERS must be an integer in [1, 1024]\n";
            bad = true;
            return 1;
        }
        return static_cast<unsigned>(w);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Hamming-cube Poincare constants and verification sweeps"};
    app.name("hamdual");
    app.require_subcommand(1);

    double alpha = 0, alpha_min = 0, alpha_max = 0, alpha_step = 0, p_single = 0, tol = 0;
    int n = 0;
    std::int64_t samples = 0;
    unsigned workers = 0;
    std::string format = "csv";

    struct Opts {
        CLI::Option *alpha, *amin, *amax, *astep, *p, *n, *samples, *tol, *workers;
    };
    std::vector<std::pair<CLI::App*, Opts>> subs;

    auto add_common = [&](CLI::App* sub) {
        Opts o{};
        o.alpha = sub->add_option("--alpha", alpha, "Single alpha (sets min = max)");
        o.amin = sub->add_option("--alpha-min", alpha_min, "Alpha grid start");
        o.amax = sub->add_option("--alpha-max", alpha_max, "Alpha grid end (inclusive)");
        o.astep = sub->add_option("--alpha-step", alpha_step, "Alpha grid step (default 0.5)");
        sub->add_option("--p-grid", cfg.p_grid, "Comma-separated exponents")->delimiter(',');
        o.p = sub->add_option("--p", p_single, "Single exponent (appended to --p-grid)");
        o.n = sub->add_option("--n", n, "Cube dimension");
        sub->add_option("--depth", cfg.depth, "Dyadic depth (default 8)");
        o.samples = sub->add_option("--samples", samples, "Random samples per case");
        sub->add_option("--seed", cfg.seed, "Run seed (default 0)");
        o.tol = sub->add_option("--tol", tol, "Violation tolerance");
        o.workers = sub->add_option("--workers", workers, "Worker threads (default: TOOL_WORKERS, else all cores)");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", cfg.out, "Output file (default stdout)");
        sub->add_flag("--timing", cfg.timing, "Append a wall_time column to verify reports");
        subs.emplace_back(sub, o);
    };

    add_common(app.add_subcommand("constants", "Table of s_alpha against its bounds"));
    add_common(app.add_subcommand("poincare-table", "Rademacher-form constant against (p-1)^p"));
    auto* verify = app.add_subcommand("verify", "Run a verification sweep");
    verify->add_option("target", cfg.target, "bellman | dual | cube | rademacher | dyadic | ma | p32")
        ->required()
        ->check(CLI::IsMember({"bellman", "dual", "cube", "rademacher", "dyadic", "ma", "p32"}));
    add_common(verify);
    add_common(app.add_subcommand("sigma", "Exhaustive surface-measure table"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    for (const auto& [sub, o] : subs) {
        if (!sub->parsed()) continue;
        cfg.command = sub->get_name();
        if (o.alpha->count()) {
            if (o.amin->count() || o.amax->count()) {
                err << "--alpha cannot be combined with --alpha-min/--alpha-max\n";
                return 1;
            }
            cfg.alpha_min = cfg.alpha_max = alpha;
        }
        if (o.amin->count()) cfg.alpha_min = alpha_min;
        if (o.amax->count()) cfg.alpha_max = alpha_max;
        if (o.astep->count()) cfg.alpha_step = alpha_step;
        if (o.p->count()) cfg.p_grid.push_back(p_single);
        if (o.n->count()) cfg.n = n;
        if (o.samples->count()) cfg.samples = samples;
        if (o.tol->count()) cfg.tol = tol;
        if (o.workers->count()) {
            if (workers < 1) {
                err << "--workers must be >= 1\n";
                return 1;
            }
            cfg.workers = workers;
        } else {
            bool bad = false;
            cfg.workers = default_workers(err, bad);
            if (bad) return 1;
        }
    }
    cfg.format = format == "json" ? Format::Json : Format::Csv;

    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        if (!file) {
            err << "cannot open " << cfg.out << " for writing\n";
            return 1;
        }
    }
    std::ostream& os = cfg.out.empty() ? out : file;

    try {
        return dispatch(cfg, os);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace hamdual::cli
