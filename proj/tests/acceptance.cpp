// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "hamdual/cli.hpp"
#include "hamdual/cube.hpp"
#include "hamdual/duality.hpp"
#include "hamdual/specfun.hpp"

namespace hc = hamdual::cli;
namespace sf = hamdual::specfun;
namespace cb = hamdual::cube;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

unsigned worker_count() {
    if (const char* env = std::getenv("TOOL_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return static_cast<unsigned>(w);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Clean records; detail names the worst one.
Outcome all_clean(const std::vector<hc::Record>& recs) {
    bool ok = true;
    std::ostringstream os;
    std::size_t checked = 0;
    const hc::Record* worst = nullptr;
    double worst_rel = std::numeric_limits<double>::infinity();
    for (const auto& r : recs) {
        checked += r.report.n_checked;
        if (!r.report.clean()) {
            ok = false;
            os << r.check << "[" << r.params << "] worst_gap=" << r.report.worst_gap << "; ";
        }
        const double rel = r.report.worst_gap + r.report.tol;
        if (rel < worst_rel) {
            worst_rel = rel;
            worst = &r;
        }
    }
    os << "records=" << recs.size() << " cases=" << checked;
    if (worst) os << " tightest=" << worst->check << "[" << worst->params << "] gap=" << worst->report.worst_gap;
    return {ok, os.str()};
}

Outcome zeros_closed_form() {
    const double s2 = sf::smallest_zero(2.0), s4 = sf::smallest_zero(4.0);
    const double e2 = std::abs(s2 - 1.0), e4 = std::abs(s4 - std::sqrt(3.0 - std::sqrt(6.0)));
    std::ostringstream os;
    os << "|s2-1|=" << e2 << " |s4-sqrt(3-sqrt6)|=" << e4;
    return {e2 <= 1e-10 && e4 <= 1e-8, os.str()};
}

Outcome zeros_bounds() {
    bool violated = false;
    const hc::Table t = hc::constants_table(hc::make_grid(2.0, 20.0, 0.5), violated);
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (const auto& row : t.rows) {
        const double s = std::get<double>(row[1]);
        monotone = monotone && s < prev;
        prev = s;
    }
    std::ostringstream os;
    os << "alphas=" << t.rows.size() << " bounds_ok=" << !violated << " strictly_decreasing=" << monotone;
    return {!violated && monotone && t.rows.size() == 37, os.str()};
}

Outcome p_exponent_table() {
    bool violated = false;
    const hc::Table t = hc::poincare_table(hc::make_grid(1.01, 1.99, 0.01), violated);
    const double p0 = sf::solve_p0();
    std::ostringstream os;
    os << "rows=" << t.rows.size() << " lhs>(p-1)^p everywhere=" << !violated << " p0=" << p0;
    return {!violated && t.rows.size() == 99 && std::abs(p0 - 1.847) <= 1e-3, os.str()};
}

Outcome sigma_checks() {
    bool ok = true;
    std::ostringstream os;
    for (int n = 2; n <= 4; ++n) {
        bool violated = false;
        hc::sigma_table(n, {1.0, 1.25, 1.5, 1.75, 2.0}, 1e-9, violated);
        ok = ok && !violated;
        const double s2 = cb::sigma_exhaustive(n, 2.0).sigma;
        ok = ok && s2 == 1.0;
        for (double p : {3.0, 4.0}) ok = ok && std::abs(cb::sigma_exhaustive(n, p).sigma - 1.0) <= 1e-12;
        os << "n=" << n << " sigma(1)=" << cb::sigma_exhaustive(n, 1.0).sigma << " sigma(2)=" << s2 << "; ";
    }
    os << "lower bounds hold=" << ok;
    return {ok, os.str()};
}

Outcome degeneracy_above_two() {
    const cb::ConstantSearch r = cb::best_constant_search(1, 3.0, 8, 0);
    bool geometric = true;
    std::ostringstream os;
    os << "search estimate=" << r.estimate << " ratios:";
    double prev = 0.0;
    for (int k = 1; k <= 5; ++k) {
        const double a = std::pow(10.0, -k);
        const double ratio = cb::poincare_ratio(cb::CubeFunction(1, {1.0 - a, 1.0 + a}), 3.0);
        if (k > 1) {
            const double q = ratio / prev;
            geometric = geometric && q > 0.09 && q < 0.11;
        }
        prev = ratio;
        os << " " << ratio;
    }
    return {r.estimate < 0.01 && geometric, os.str()};
}

}  // namespace

int main() {
    const unsigned workers = worker_count();
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> crits = {
        {1, "closed-form zeros s2, s4", 1.0, zeros_closed_form},
        {2, "zero bounds and monotonicity on alpha in [2, 20]", 2.0, zeros_bounds},
        {3, "Bellman sweep, 50^3 grid", 60.0,
         [&] { return all_clean(hc::sweep_bellman({2, 3, 4, 6, 10}, 50, 1e-9, workers)); }},
        {4, "dual sweep, 20^4 grid and N=3 vector form", 300.0,
         [&] { return all_clean(hc::sweep_dual({2, 3, 4}, 20, 1000, 0, 1e-6, workers)); }},
        {5, "3/2 closed form vs minimax, cubic identity", 30.0,
         [&] { return all_clean(hc::sweep_p32(40, 1000, 0, 1e-7, workers)); }},
        {6, "cube Poincare gap, 1e4 functions per (n, p)", 60.0,
         [&] { return all_clean(hc::sweep_cube({1, 2, 3, 4}, {1.1, 1.5, 1.9, 2.0}, 10000, 0, 1e-9, workers)); }},
        {7, "Rademacher form, 1e4 functions per (n, p)", 120.0,
         [&] { return all_clean(hc::sweep_rademacher({1, 2, 3}, {1.1, 1.5, 1.9, 2.0}, 10000, 0, 1e-9, workers)); }},
        {8, "exponent table p in [1.01, 1.99] and p0", 5.0, p_exponent_table},
        {9, "surface measure table", 30.0, sigma_checks},
        {10, "dyadic martingales, 1e4 depth-8 samples", 60.0,
         [&] { return all_clean(hc::sweep_dyadic(8, {1.0, 1.5, 2.0, 3.0, 4.0}, 10000, 0, 1e-12, workers)); }},
        {11, "no Poincare constant above p = 2", 30.0, degeneracy_above_two},
        {12, "Monge-Ampere degeneracy at 100 points", 5.0, [] { return all_clean(hc::sweep_ma(100, 0, 1e-6)); }},
    };

    int failures = 0;
    for (const auto& c : crits) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = o.ok && in_time;
        if (!pass) ++failures;
        std::printf("CRITERION %2d %s  %s  (%.2f s of %.0f s)  %s%s\n", c.id, pass ? "PASS" : "FAIL", c.name, secs,
                    c.budget_s, o.detail.c_str(), in_time ? "" : "  [over time budget]");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(crits.size()) - failures, crits.size());
    return failures == 0 ? 0 : 1;
}
