#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "wan/errors.hpp"
#include "wan/growthcurve.hpp"
#include "wan/parallel.hpp"

namespace wan {

struct FitParams {
    double c0 = 0;
    double growth_alpha = 0;  // accelerated-growth index; asymptote is its inverse
    double n0 = 0;            // regime-transition node count
    double theta = 0;         // transition sharpness
    double residual = 0;      // weighted RMS of the fit
    double delta_l_end = 0;   // L_fit(N_tot) - mean_L(N_tot)
    bool converged = true;
};

// Chain-phase exact ASPL of an n-node path.
inline double l_chain(double n) { return (n + 1.0) / 3.0; }

inline constexpr double kPoleEpsilon = 1e-9;

// Random-regime form ln N / (ln(c0/(alpha+1)) + alpha ln N). The denominator
// must stay positive; parameters that drive it to zero are unphysical at
// that n.
inline double l_rand(double n, double c0, double growth_alpha) {
    const double log_n = std::log(n);
    const double denom = std::log(c0 / (growth_alpha + 1.0)) + growth_alpha * log_n;
    if (!(denom > kPoleEpsilon))
        throw PoleError("l_rand denominator not positive at n = " + std::to_string(n));
    return log_n / denom;
}

inline double asymptote(const FitParams& params) { return 1.0 / params.growth_alpha; }

// Sigmoid interpolant between the chain and random regimes, 0.5 at n0.
inline double sigmoid(double n, double n0, double theta) {
    return 1.0 / (1.0 + std::pow(n0 / n, theta));
}

inline double l_fit(double n, const FitParams& p) {
    const double s = sigmoid(n, p.n0, p.theta);
    return (1.0 - s) * l_chain(n) + s * l_rand(n, p.c0, p.growth_alpha);
}

namespace detail {

// Weighted sum of squared errors with weights uniform in log N, so the
// dense integer checkpoints below 100 do not drown the asymptotic regime.
struct FitProblem {
    std::vector<double> n;
    std::vector<double> l;
    std::vector<double> w;
    double weight_total = 0;

    explicit FitProblem(const GrowthCurve& curve) {
        std::vector<CurveSample> samples = curve.samples;
        std::sort(samples.begin(), samples.end(),
                  [](const CurveSample& a, const CurveSample& b) { return a.n < b.n; });
        for (const CurveSample& s : samples) {
            n.push_back(static_cast<double>(s.n));
            l.push_back(s.mean_l);
        }
        const size_t m = n.size();
        w.resize(m, 1.0);
        if (m >= 2) {
            std::vector<double> x(m);
            for (size_t i = 0; i < m; ++i) x[i] = std::log(n[i]);
            for (size_t i = 0; i < m; ++i) {
                const double left = i == 0 ? x[1] - x[0] : x[i] - x[i - 1];
                const double right = i + 1 == m ? x[m - 1] - x[m - 2] : x[i + 1] - x[i];
                w[i] = (left + right) / 2.0;
            }
        }
        for (double wi : w) weight_total += wi;
    }

    // Mean squared (weighted) error; +inf when the pole guard trips.
    double loss(const std::array<double, 4>& log_params) const {
        const double c0 = std::exp(log_params[0]);
        const double alpha = std::exp(log_params[1]);
        const double n0 = std::exp(log_params[2]);
        const double theta = std::exp(log_params[3]);
        const double log_c = std::log(c0 / (alpha + 1.0));
        double sse = 0;
        for (size_t i = 0; i < n.size(); ++i) {
            const double log_n = std::log(n[i]);
            const double denom = log_c + alpha * log_n;
            if (!(denom > kPoleEpsilon)) return std::numeric_limits<double>::infinity();
            const double s = 1.0 / (1.0 + std::pow(n0 / n[i], theta));
            const double model = (1.0 - s) * l_chain(n[i]) + s * (log_n / denom);
            const double err = model - l[i];
            sse += w[i] * err * err;
        }
        return sse / weight_total;
    }
};

// Nelder-Mead on a 4-dimensional log-parameter space.
inline std::pair<std::array<double, 4>, double>
nelder_mead(const FitProblem& problem, std::array<double, 4> x0, int max_iter) {
    constexpr int dim = 4;
    using Point = std::array<double, 4>;
    struct Vertex {
        Point x;
        double f;
    };
    std::array<Vertex, dim + 1> simplex;
    simplex[0] = {x0, problem.loss(x0)};
    for (int i = 0; i < dim; ++i) {
        Point p = x0;
        p[i] += 0.25;
        simplex[i + 1] = {p, problem.loss(p)};
    }
    auto order = [&] {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    };
    order();
    for (int it = 0; it < max_iter; ++it) {
        const double spread = simplex[dim].f - simplex[0].f;
        if (spread < 1e-14 * (1.0 + std::abs(simplex[0].f))) break;

        Point centroid{};
        for (int i = 0; i < dim; ++i)
            for (int d = 0; d < dim; ++d) centroid[d] += simplex[i].x[d] / dim;

        auto blend = [&](double t) {
            Point p;
            for (int d = 0; d < dim; ++d)
                p[d] = centroid[d] + t * (simplex[dim].x[d] - centroid[d]);
            return p;
        };
        const Point reflected = blend(-1.0);
        const double fr = problem.loss(reflected);
        if (fr < simplex[0].f) {
            const Point expanded = blend(-2.0);
            const double fe = problem.loss(expanded);
            simplex[dim] = fe < fr ? Vertex{expanded, fe} : Vertex{reflected, fr};
        } else if (fr < simplex[dim - 1].f) {
            simplex[dim] = {reflected, fr};
        } else {
            const Point contracted = blend(fr < simplex[dim].f ? -0.5 : 0.5);
            const double fc = problem.loss(contracted);
            if (fc < std::min(fr, simplex[dim].f)) {
                simplex[dim] = {contracted, fc};
            } else {
                for (int i = 1; i <= dim; ++i) {
                    for (int d = 0; d < dim; ++d)
                        simplex[i].x[d] = (simplex[i].x[d] + simplex[0].x[d]) / 2.0;
                    simplex[i].f = problem.loss(simplex[i].x);
                }
            }
        }
        order();
    }
    return {simplex[0].x, simplex[0].f};
}

} // namespace detail

// Fits (c0, growth_alpha, N0, theta) to a growth curve by multi-start
// Nelder-Mead in log-parameter space; ties resolve lexicographically so the
// result is independent of evaluation order and worker count.
inline FitParams fit(const GrowthCurve& curve,
                     std::optional<FitParams> init = std::nullopt, int jobs = 1) {
    if (curve.samples.size() < 20)
        throw ConfigError("fit needs at least 20 curve samples");
    const detail::FitProblem problem(curve);
    if (problem.n.back() < 100.0 * problem.n.front())
        throw ConfigError("fit needs samples spanning at least two decades of N");

    std::vector<std::array<double, 4>> starts;
    if (init) {
        starts.push_back({std::log(init->c0), std::log(init->growth_alpha),
                          std::log(init->n0), std::log(init->theta)});
    }
    for (double c0 : {1.0, 2.0, 5.0})
        for (double alpha : {0.2, 0.3, 0.4, 0.5, 0.6})
            for (double n0 : {10.0, 30.0, 100.0})
                for (double theta : {1.0, 2.0, 4.0})
                    starts.push_back({std::log(c0), std::log(alpha), std::log(n0),
                                      std::log(theta)});

    struct Result {
        std::array<double, 4> x;
        double f = std::numeric_limits<double>::infinity();
    };
    std::vector<Result> results(starts.size());
    parallel_for(starts.size(), jobs, [&](size_t i) {
        auto [x1, f1] = detail::nelder_mead(problem, starts[i], 600);
        // Restart from the found minimum with a fresh simplex; escapes
        // degenerate simplices near the optimum.
        auto [x2, f2] = detail::nelder_mead(problem, x1, 400);
        results[i] = f2 < f1 ? Result{x2, f2} : Result{x1, f1};
    });

    const Result* best = nullptr;
    for (const Result& r : results) {
        if (!std::isfinite(r.f)) continue;
        if (best == nullptr || r.f < best->f || (r.f == best->f && r.x < best->x))
            best = &r;
    }
    if (best == nullptr)
        throw FitDivergedError("no initialization produced a finite loss");

    FitParams params;
    params.c0 = std::exp(best->x[0]);
    params.growth_alpha = std::exp(best->x[1]);
    params.n0 = std::exp(best->x[2]);
    params.theta = std::exp(best->x[3]);
    params.residual = std::sqrt(best->f);
    params.converged = std::isfinite(best->f);
    const size_t last = problem.n.size() - 1;
    params.delta_l_end = l_fit(problem.n[last], params) - problem.l[last];
    return params;
}

} // namespace wan
