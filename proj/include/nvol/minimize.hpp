#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nvol/errors.hpp"
#include "nvol/germ.hpp"
#include "nvol/rational.hpp"

namespace nvol {

struct MinimizeConfig {
    double tol = 1e-10;      // Nelder-Mead simplex diameter at convergence
    long max_evals = 40000;  // per start
    int starts = 8;          // barycenter + (starts-1) random interior seeds
    std::uint64_t seed = 0x5EED;
    bool parallel = true;
};

struct MinimizationReport {
    std::vector<double> u_star;  // normalized to ⟨u, w⟩ = 1
    double nvol_star = std::numeric_limits<double>::infinity();
    int starts = 0;
    double spread = 0;        // max pairwise distance among converged minimizers
    long evaluations = 0;
    double slice_residual = 0;  // |⟨u*, w⟩ - 1|
};

/**
 * nvol objective at a float point: the point is rationalized at 1e-12
 * precision, checked against Int(sigma) exactly, and evaluated through the
 * exact volume engine. Returns the exact rational value, or nothing outside
 * the interior. Float coordinates exist only here, in the optimizer.
 */
inline std::optional<Rat> objective_exact(const GermPtr& germ,
                                          const std::vector<double>& u) {
    if (static_cast<int>(u.size()) != germ->rank()) throw Error("vector length mismatch");
    VecQ q(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i])) return std::nullopt;
        q[i] = rationalize(u[i]);
    }
    if (!germ->contains_interior(q)) return std::nullopt;
    const Rat a = dot(q, germ->gorenstein_covector());
    Rat an = 1;
    for (int i = 0; i < germ->rank(); ++i) an *= a;
    return an * germ->scaled_truncation_volume(q);
}

/** Double view of the exact objective; +infinity outside the interior. */
inline double objective(const GermPtr& germ, const std::vector<double>& u) {
    const auto v = objective_exact(germ, u);
    return v ? to_double(*v) : std::numeric_limits<double>::infinity();
}

namespace detail {

/** Chart for the slice ⟨u, w⟩ = 1: drop the coordinate where |w| is largest. */
struct SliceChart {
    GermPtr germ;
    int dropped;  // index of the eliminated coordinate
    std::vector<double> w;

    explicit SliceChart(GermPtr g) : germ(std::move(g)) {
        w = to_doubles(germ->gorenstein_covector());
        dropped = 0;
        for (std::size_t i = 1; i < w.size(); ++i)
            if (std::abs(w[i]) > std::abs(w[dropped])) dropped = static_cast<int>(i);
    }

    std::vector<double> to_chart(const std::vector<double>& u) const {
        std::vector<double> x;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (static_cast<int>(i) != dropped) x.push_back(u[i]);
        return x;
    }

    std::vector<double> to_point(const std::vector<double>& x) const {
        std::vector<double> u(w.size());
        double rest = 0;
        std::size_t k = 0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (static_cast<int>(i) == dropped) continue;
            u[i] = x[k++];
            rest += u[i] * w[i];
        }
        u[dropped] = (1.0 - rest) / w[dropped];
        return u;
    }
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    long evaluations = 0;
    bool converged = false;
};

/** Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2). */
template <typename F>
NelderMeadResult nelder_mead(F&& f, const std::vector<double>& x0, double step,
                             double tol, long max_evals) {
    const std::size_t n = x0.size();
    NelderMeadResult res;
    std::vector<std::vector<double>> simplex;
    std::vector<double> values;
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        return f(x);
    };
    simplex.push_back(x0);
    values.push_back(eval(x0));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(x0);
        x[i] += step * (std::abs(x[i]) + 1.0);
        simplex.push_back(x);
        values.push_back(eval(x));
    }
    auto order = [&] {
        std::vector<std::size_t> idx(simplex.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> v2;
        for (std::size_t i : idx) {
            s2.push_back(simplex[i]);
            v2.push_back(values[i]);
        }
        simplex = std::move(s2);
        values = std::move(v2);
    };
    auto diameter = [&] {
        double d = 0;
        for (std::size_t i = 1; i < simplex.size(); ++i)
            for (std::size_t j = 0; j < n; ++j)
                d = std::max(d, std::abs(simplex[i][j] - simplex[0][j]));
        return d;
    };
    order();
    while (res.evaluations < max_evals) {
        if (diameter() < tol && std::isfinite(values[0])) {
            res.converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t s = 0; s < n; ++s) centroid[i] += simplex[s][i];
            centroid[i] /= static_cast<double>(n);
        }
        const std::vector<double>& worst = simplex[n];
        std::vector<double> refl(n);
        for (std::size_t i = 0; i < n; ++i) refl[i] = centroid[i] + (centroid[i] - worst[i]);
        const double fr = eval(refl);
        if (fr < values[0]) {
            std::vector<double> expa(n);
            for (std::size_t i = 0; i < n; ++i)
                expa[i] = centroid[i] + 2.0 * (centroid[i] - worst[i]);
            const double fe = eval(expa);
            if (fe < fr) {
                simplex[n] = expa;
                values[n] = fe;
            } else {
                simplex[n] = refl;
                values[n] = fr;
            }
        } else if (fr < values[n - 1]) {
            simplex[n] = refl;
            values[n] = fr;
        } else {
            const bool outside = fr < values[n];
            std::vector<double> contr(n);
            const std::vector<double>& anchor = outside ? refl : worst;
            for (std::size_t i = 0; i < n; ++i)
                contr[i] = centroid[i] + 0.5 * (anchor[i] - centroid[i]);
            const double fc = eval(contr);
            if (fc < std::min(fr, values[n])) {
                simplex[n] = contr;
                values[n] = fc;
            } else {
                for (std::size_t s = 1; s <= n; ++s) {
                    for (std::size_t i = 0; i < n; ++i)
                        simplex[s][i] = simplex[0][i] + 0.5 * (simplex[s][i] - simplex[0][i]);
                    values[s] = eval(simplex[s]);
                }
            }
        }
        order();
    }
    res.x = simplex[0];
    res.value = values[0];
    return res;
}

}  // namespace detail

/**
 * Minimizes nvol over Int(sigma) on the slice ⟨u, w⟩ = 1 with multistart
 * Nelder-Mead: the normalized ray barycenter plus seeded random interior
 * points. Runs are independent (optionally parallel); the report aggregates
 * the best run with deterministic tie-breaking.
 */
inline MinimizationReport minimize(const GermPtr& germ, const MinimizeConfig& config = {}) {
    const detail::SliceChart chart(germ);
    const int n = germ->rank();

    std::vector<std::vector<double>> starts;
    {
        const VecQ bary = germ->ray_barycenter();
        const Rat scale = dot(bary, germ->gorenstein_covector());
        std::vector<double> u(n);
        for (int j = 0; j < n; ++j) u[j] = to_double(bary[j] / scale);
        if (!germ->contains_interior(u)) throw NoInteriorStart();
        starts.push_back(u);
    }
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> weight(0.1, 1.0);
    const auto& rays = germ->sigma().rays();
    while (static_cast<int>(starts.size()) < std::max(1, config.starts)) {
        std::vector<double> u(n, 0.0);
        for (const VecZ& r : rays) {
            const double c = weight(rng);
            for (int j = 0; j < n; ++j) u[j] += c * to_double(Rat(r[j]));
        }
        double s = 0;
        for (int j = 0; j < n; ++j) s += u[j] * chart.w[j];
        for (int j = 0; j < n; ++j) u[j] /= s;
        if (germ->contains_interior(u)) starts.push_back(std::move(u));
    }

    // Nelder-Mead stalls a few 1e-9 from the optimum once double-precision
    // objective differences flatten out; a pattern-search polish with exact
    // rational comparisons removes that noise floor (the objective is exact
    // at rationalized points, so ordering stays sharp below double epsilon).
    auto polish = [&](detail::NelderMeadResult r) {
        std::vector<double> x = r.x;
        auto fx = objective_exact(germ, chart.to_point(x));
        double h = 1e-7;
        long budget = 6000;
        while (h >= 1e-12 && budget > 0) {
            bool moved = false;
            for (std::size_t i = 0; i < x.size(); ++i) {
                for (const double s : {+1.0, -1.0}) {
                    std::vector<double> y(x);
                    y[i] += s * h;
                    const auto fy = objective_exact(germ, chart.to_point(y));
                    ++r.evaluations;
                    --budget;
                    if (fy && (!fx || *fy < *fx)) {
                        x = std::move(y);
                        fx = fy;
                        moved = true;
                    }
                }
            }
            if (!moved) h /= 2;
        }
        r.x = std::move(x);
        if (fx) r.value = to_double(*fx);
        return r;
    };

    auto run_one = [&](const std::vector<double>& start) {
        auto f = [&](const std::vector<double>& x) {
            return objective(germ, chart.to_point(x));
        };
        detail::NelderMeadResult r = detail::nelder_mead(f, chart.to_chart(start), 0.25,
                                                         config.tol, config.max_evals);
        if (r.converged) r = polish(std::move(r));
        return r;
    };

    std::vector<detail::NelderMeadResult> runs(starts.size());
    if (config.parallel && starts.size() > 1) {
        std::vector<std::future<detail::NelderMeadResult>> futs;
        for (const auto& s : starts)
            futs.push_back(std::async(std::launch::async, run_one, s));
        for (std::size_t i = 0; i < futs.size(); ++i) runs[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < starts.size(); ++i) runs[i] = run_one(starts[i]);
    }

    MinimizationReport report;
    report.starts = static_cast<int>(starts.size());
    std::vector<std::vector<double>> minimizers;
    for (const auto& r : runs) {
        report.evaluations += r.evaluations;
        if (!r.converged) continue;
        const std::vector<double> u = chart.to_point(r.x);
        minimizers.push_back(u);
        const bool better =
            r.value < report.nvol_star ||
            (r.value == report.nvol_star &&
             std::lexicographical_compare(u.begin(), u.end(), report.u_star.begin(),
                                          report.u_star.end()));
        if (report.u_star.empty() || better) {
            report.u_star = u;
            report.nvol_star = r.value;
        }
    }
    if (report.u_star.empty()) throw Error("no multistart run converged");
    for (std::size_t i = 0; i < minimizers.size(); ++i)
        for (std::size_t j = i + 1; j < minimizers.size(); ++j) {
            double d = 0;
            for (int k = 0; k < n; ++k)
                d = std::max(d, std::abs(minimizers[i][k] - minimizers[j][k]));
            report.spread = std::max(report.spread, d);
        }
    double slice = 0;
    for (int j = 0; j < n; ++j) slice += report.u_star[j] * chart.w[j];
    report.slice_residual = std::abs(slice - 1.0);
    return report;
}

struct RationalityProbe {
    bool divisorial_candidate = false;
    std::string label;
    VecZ direction;           // primitive integer direction when divisorial
    std::vector<Rat> coords;  // reconstructed rational coordinates
};

/**
 * Continued-fraction reconstruction of the minimizer coordinates with
 * denominators <= bound. A candidate counts as divisorial when every
 * coordinate is within accept_tol of its best bounded-denominator fraction.
 * The polished minimizer is accurate to ~1e-12, while an irrational
 * coordinate misses every fraction with denominator <= 10^4 by at least
 * ~1/(2 * 10^8); 1e-10 separates the two regimes with two decades of margin
 * on either side. A heuristic probe, never a proof.
 */
inline RationalityProbe rationality_probe(const MinimizationReport& report,
                                          const GermPtr& germ,
                                          const Int& denominator_bound,
                                          double accept_tol = 1e-10) {
    RationalityProbe out;
    bool all = true;
    for (double c : report.u_star) {
        const Rat r = rationalize_bounded(c, denominator_bound);
        out.coords.push_back(r);
        if (std::abs(to_double(r) - c) > accept_tol) all = false;
    }
    out.divisorial_candidate = all;
    if (all) {
        out.direction = clear_denominators(out.coords);
        if (!germ->contains_interior(to_vecq(out.direction)))
            throw Error("reconstructed direction left the interior of sigma");
        out.label = "divisorial-candidate (rational direction found)";
    } else {
        out.label = "non-divisorial-candidate (no small rational direction)";
    }
    return out;
}

}  // namespace nvol
