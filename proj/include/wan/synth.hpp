#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wan/errors.hpp"
#include "wan/growthcurve.hpp"
#include "wan/metrics.hpp"
#include "wan/netbuild.hpp"
#include "wan/parallel.hpp"

namespace wan {

struct SynthConfig {
    double p0 = 1.0;     // new-node probability scale
    double delta = 0.8;  // Heaps exponent target, p(tau) = p0 * tau^(delta-1)
    double eta = 0.5;    // attachment-exponent rate, xi(t) = 1 - t^(-eta)
    uint64_t seed = 1;
    uint64_t steps = 1000;
    // Duplicate-edge draws are resampled by default; with false they become
    // no-op Repeat steps (the walker still moves).
    bool resample_duplicates = true;
};

inline void validate(const SynthConfig& cfg) {
    if (!(cfg.p0 > 0.0 && cfg.p0 <= 1.0)) throw ConfigError("synth: need 0 < p0 <= 1");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ConfigError("synth: need 0 < delta < 1");
    if (!(cfg.eta > 0.0)) throw ConfigError("synth: need eta > 0");
    if (cfg.steps < 2) throw ConfigError("synth: need steps >= 2");
}

inline double new_node_probability(uint64_t tau, const SynthConfig& cfg) {
    return std::min(1.0, cfg.p0 * std::pow(static_cast<double>(tau), cfg.delta - 1.0));
}

// Selection kernel weight k^xi(t) with xi(t) = 1 - t^(-eta): uniform at
// t = 1, approaching linear preferential attachment as t grows.
inline double attachment_weight(double k, double t, double eta) {
    return std::pow(k, 1.0 - std::pow(t, -eta));
}

namespace detail {

inline double rand_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline uint64_t rand_index(std::mt19937_64& rng, uint64_t bound) {
    return static_cast<uint64_t>(
        (static_cast<__uint128_t>(rng()) * bound) >> 64);
}

} // namespace detail

// Growth walker of the accelerated-growth model. State starts as a 2-node
// chain at tau = 1; each step either spawns a new node on the walker or
// draws an attachment target among existing nodes with weight k^xi(t),
// excluding the walker itself. Every edge keeps touching the node linked in
// the preceding step, which is the memory the text-growth picture requires.
class SynthGrower {
public:
    explicit SynthGrower(const SynthConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
        net_.add_node();
        net_.add_node();
        net_.add_edge(0, 1);
        endpoints_ = {0, 1};
        net_.last_active = 1;
        tau_ = 1;
        net_.tokens_consumed = 1;
    }

    GrowthEvent step() {
        ++tau_;
        ++net_.tokens_consumed;
        GrowthEvent ev;
        ev.tau = tau_;
        const uint32_t walker = net_.last_active;
        if (detail::rand_unit(rng_) < new_node_probability(tau_, cfg_)) {
            const uint32_t node = net_.add_node();
            net_.add_edge(walker, node);
            endpoints_.push_back(walker);
            endpoints_.push_back(node);
            net_.last_active = node;
            ev.kind = GrowthKind::NewNode;
            ev.node = node;
            return ev;
        }
        const double xi =
            1.0 - std::pow(static_cast<double>(net_.n_nodes()), -cfg_.eta);
        // A walker adjacent to every other node has no addable edge, so
        // resampling cannot succeed; the step degrades to a repeat move
        // along an existing edge (the seed pair starts in this state).
        const bool walker_complete = net_.degree(walker) == net_.n_nodes() - 1;
        for (int attempt = 0; attempt < 100; ++attempt) {
            const uint32_t target = draw_target(xi, walker);
            if (!walker_complete && net_.add_edge(walker, target)) {
                endpoints_.push_back(walker);
                endpoints_.push_back(target);
                net_.last_active = target;
                ev.kind = GrowthKind::NewEdge;
                ev.node = target;
                return ev;
            }
            if (walker_complete || !cfg_.resample_duplicates) {
                net_.last_active = target;
                ev.kind = GrowthKind::Repeat;
                ev.node = target;
                return ev;
            }
        }
        throw SaturationError("100 attachment draws all hit existing edges at tau " +
                              std::to_string(tau_));
    }

    uint64_t tau() const { return tau_; }
    const AdjacencyNetwork& network() const { return net_; }

private:
    // Degree-proportional proposal (uniform edge endpoint) thinned to
    // k^xi by accepting with probability k^(xi-1) <= 1.
    uint32_t draw_target(double xi, uint32_t walker) {
        for (;;) {
            const uint32_t cand = endpoints_[detail::rand_index(rng_, endpoints_.size())];
            if (cand == walker) continue;
            const double k = static_cast<double>(net_.degree(cand));
            if (detail::rand_unit(rng_) < std::pow(k, xi - 1.0)) return cand;
        }
    }

    SynthConfig cfg_;
    std::mt19937_64 rng_;
    AdjacencyNetwork net_;
    std::vector<uint32_t> endpoints_;
    uint64_t tau_ = 1;
};

struct SynthResult {
    AdjacencyNetwork net;
    std::vector<uint32_t> nodes_at_tau;  // N(tau) for tau = 1..steps
};

inline SynthResult generate(const SynthConfig& cfg) {
    validate(cfg);
    SynthGrower grower(cfg);
    SynthResult result;
    result.nodes_at_tau.reserve(cfg.steps);
    result.nodes_at_tau.push_back(grower.network().n_nodes());
    while (grower.tau() < cfg.steps) {
        grower.step();
        result.nodes_at_tau.push_back(grower.network().n_nodes());
    }
    result.net = grower.network();
    return result;
}

// N(tau) trajectory log-sampled like a vocabulary-growth curve, ready for
// heaps_fit.
inline std::vector<std::pair<uint64_t, uint64_t>>
node_growth_curve(const SynthResult& result) {
    std::vector<std::pair<uint64_t, uint64_t>> curve;
    const size_t len = result.nodes_at_tau.size();
    for (int k = 0;; ++k) {
        const auto tau = static_cast<uint64_t>(std::llround(std::pow(10.0, k / 25.0)));
        if (tau >= len) break;
        if (curve.empty() || tau > curve.back().first)
            curve.emplace_back(tau, result.nodes_at_tau[tau - 1]);
    }
    curve.emplace_back(len, result.nodes_at_tau[len - 1]);
    return curve;
}

// Mean L(N) over independently seeded realizations, sampled at the given
// node-count checkpoints; same assembly semantics as curve_for_text.
inline GrowthCurve synth_curve(const SynthConfig& cfg,
                               const CheckpointSchedule& checkpoints,
                               uint32_t n_realizations, int jobs = 1) {
    validate(cfg);
    if (checkpoints.points.empty()) throw ConfigError("empty checkpoint schedule");
    if (n_realizations == 0) throw ConfigError("need at least one realization");

    const auto& points = checkpoints.points;
    std::vector<std::vector<double>> l_values(n_realizations);
    parallel_for(n_realizations, jobs, [&](size_t r) {
        SynthConfig local = cfg;
        local.seed = cfg.seed + 0x9E3779B97F4A7C15ull * (r + 1);
        SynthGrower grower(local);
        auto& row = l_values[r];
        row.reserve(points.size());
        for (uint32_t target : points) {
            while (grower.network().n_nodes() < target) {
                if (grower.tau() >= cfg.steps)
                    throw VocabularyExhaustedError(
                        "checkpoint " + std::to_string(target) +
                        " not reached within " + std::to_string(cfg.steps) + " steps");
                grower.step();
            }
            row.push_back(aspl(grower.network()));
        }
    });

    GrowthCurve curve;
    curve.mode = CurveMode::Tokens;
    curve.text_id = "synth";
    for (size_t p = 0; p < points.size(); ++p)
        curve.samples.push_back(CurveSample{points[p], detail::exact_mean_column(l_values, p),
                                            n_realizations});
    return curve;
}

} // namespace wan
