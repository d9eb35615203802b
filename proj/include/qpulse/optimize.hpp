#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpulse/math_util.hpp"

namespace qpulse {

struct OptimizationResult {
    std::vector<double> params_opt;
    double objective_opt = 0.0;
    long n_evals = 0;
    bool converged = false;
    int restarts_used = 0;
};

struct NelderMeadOptions {
    double xtol = 1e-6;  // simplex diameter
    double ftol = 1e-10; // objective spread
    long max_evals = 2000;
    double initial_step = 0.1; // relative simplex size
};

using Objective = std::function<double(const std::vector<double>&)>;

namespace detail {

// Standard downhill simplex (maximization): reflection 1, expansion 2,
// contraction 1/2, shrink 1/2. Out-of-box points are clamped and charged a
// penalty proportional to the excursion.
inline OptimizationResult nelder_mead_single(const Objective& objective,
                                             std::vector<double> x0,
                                             const std::vector<double>& lo,
                                             const std::vector<double>& hi,
                                             const NelderMeadOptions& opt) {
    const std::size_t dim = x0.size();
    long evals = 0;
    auto eval = [&](std::vector<double> x) {
        double penalty = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            if (x[i] < lo[i]) {
                penalty += lo[i] - x[i];
                x[i] = lo[i];
            } else if (x[i] > hi[i]) {
                penalty += x[i] - hi[i];
                x[i] = hi[i];
            }
        }
        ++evals;
        return objective(x) - penalty;
    };

    for (std::size_t i = 0; i < dim; ++i) x0[i] = std::clamp(x0[i], lo[i], hi[i]);
    std::vector<std::vector<double>> v(dim + 1, x0);
    std::vector<double> f(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) {
        double step = opt.initial_step * std::max(std::abs(x0[i]), 1.0);
        if (v[i + 1][i] + step > hi[i]) step = -step;
        v[i + 1][i] += step;
    }
    f[0] = eval(v[0]);
    if (!std::isfinite(f[0]))
        throw std::domain_error("nelder_mead: objective not finite at x0");
    for (std::size_t i = 1; i <= dim; ++i) f[i] = eval(v[i]);

    auto order = [&]() {
        std::vector<std::size_t> idx(dim + 1);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
        std::vector<std::vector<double>> v2(dim + 1);
        std::vector<double> f2(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) {
            v2[i] = v[idx[i]];
            f2[i] = f[idx[i]];
        }
        v.swap(v2);
        f.swap(f2);
    };

    bool converged = false;
    while (evals < opt.max_evals) {
        order();
        double diam = 0.0;
        for (std::size_t i = 1; i <= dim; ++i)
            for (std::size_t k = 0; k < dim; ++k)
                diam = std::max(diam, std::abs(v[i][k] - v[0][k]));
        if (diam < opt.xtol && std::abs(f[0] - f[dim]) < opt.ftol) {
            converged = true;
            break;
        }
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += v[i][k] / dim;
        auto blend = [&](double t) {
            std::vector<double> p(dim);
            for (std::size_t k = 0; k < dim; ++k)
                p[k] = centroid[k] + t * (centroid[k] - v[dim][k]);
            return p;
        };
        auto xr = blend(1.0);
        const double fr = eval(xr);
        if (fr > f[0]) {
            auto xe = blend(2.0);
            const double fe = eval(xe);
            if (fe > fr) {
                v[dim] = xe;
                f[dim] = fe;
            } else {
                v[dim] = xr;
                f[dim] = fr;
            }
        } else if (fr > f[dim - 1]) {
            v[dim] = xr;
            f[dim] = fr;
        } else {
            auto xc = blend(-0.5);
            const double fc = eval(xc);
            if (fc > f[dim]) {
                v[dim] = xc;
                f[dim] = fc;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) { // shrink
                    for (std::size_t k = 0; k < dim; ++k)
                        v[i][k] = v[0][k] + 0.5 * (v[i][k] - v[0][k]);
                    f[i] = eval(v[i]);
                }
            }
        }
    }
    order();
    OptimizationResult out;
    out.params_opt = v[0];
    for (std::size_t i = 0; i < dim; ++i)
        out.params_opt[i] = std::clamp(out.params_opt[i], lo[i], hi[i]);
    out.objective_opt = f[0];
    out.n_evals = evals;
    out.converged = converged;
    return out;
}

} // namespace detail

// Maximizes the objective over a box, restarting from x0 plus seeded random
// perturbations. Deterministic for a fixed seed; the best restart wins, ties
// by first occurrence.
inline OptimizationResult nelder_mead(const Objective& objective,
                                      const std::vector<double>& x0,
                                      const std::vector<double>& lo,
                                      const std::vector<double>& hi,
                                      const NelderMeadOptions& opt = {},
                                      int restarts = 8,
                                      std::uint64_t seed = 0x5eedULL) {
    if (x0.size() != lo.size() || x0.size() != hi.size())
        throw std::domain_error("nelder_mead: bound dimensions mismatch");
    for (std::size_t i = 0; i < x0.size(); ++i)
        if (!(lo[i] < hi[i])) throw std::domain_error("nelder_mead: empty box");

    OptimizationResult best = detail::nelder_mead_single(objective, x0, lo, hi, opt);
    best.restarts_used = 0;
    SplitMix64 rng(seed);
    long total_evals = best.n_evals;
    for (int r = 1; r <= restarts; ++r) {
        std::vector<double> xr(x0.size());
        for (std::size_t i = 0; i < x0.size(); ++i) {
            const double span = hi[i] - lo[i];
            const double center = std::clamp(x0[i], lo[i], hi[i]);
            xr[i] = std::clamp(center + (rng.next_double() - 0.5) * 0.5 * span,
                               lo[i], hi[i]);
        }
        OptimizationResult cand = detail::nelder_mead_single(objective, xr, lo, hi, opt);
        total_evals += cand.n_evals;
        if (cand.objective_opt > best.objective_opt) {
            best = cand;
            best.restarts_used = r;
        }
    }
    best.n_evals = total_evals;
    return best;
}

struct SweepAxis {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    int count = 2;
    bool log_scale = false;

    double value(int i) const {
        if (count < 2) throw std::domain_error("SweepAxis: count >= 2");
        const double t = static_cast<double>(i) / (count - 1);
        if (log_scale) {
            if (min <= 0.0 || max <= 0.0)
                throw std::domain_error("SweepAxis: log scale needs positive range");
            return std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
        }
        return min + t * (max - min);
    }
};

struct SweepGrid {
    std::vector<SweepAxis> axes;
    std::string objective_id;
    std::map<std::string, double> fixed;
};

struct SweepRow {
    std::vector<double> params;
    double objective = 0.0;
};

using SweepObjective = std::function<double(const std::map<std::string, double>&)>;

// Dense evaluation over the grid in row-major axis order; rows are written by
// index so the output is deterministic regardless of thread count.
inline std::vector<SweepRow> sweep(const SweepGrid& grid, const SweepObjective& fn,
                                   unsigned n_threads = 1) {
    if (grid.axes.empty()) throw std::domain_error("sweep: no axes");
    std::size_t total = 1;
    for (const auto& ax : grid.axes) {
        if (ax.count < 2) throw std::domain_error("sweep: axis count >= 2");
        total *= static_cast<std::size_t>(ax.count);
    }
    std::vector<SweepRow> rows(total);
    parallel_for(total, n_threads, [&](std::size_t flat) {
        std::size_t rem = flat;
        std::map<std::string, double> params = grid.fixed;
        SweepRow row;
        row.params.resize(grid.axes.size());
        for (std::size_t a = grid.axes.size(); a-- > 0;) {
            const auto& ax = grid.axes[a];
            const int i = static_cast<int>(rem % ax.count);
            rem /= ax.count;
            row.params[a] = ax.value(i);
            params[ax.name] = row.params[a];
        }
        row.objective = fn(params);
        rows[flat] = std::move(row);
    });
    return rows;
}

} // namespace qpulse
