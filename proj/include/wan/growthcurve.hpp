#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wan/errors.hpp"
#include "wan/metrics.hpp"
#include "wan/netbuild.hpp"
#include "wan/parallel.hpp"
#include "wan/tokenizer.hpp"

namespace wan {

enum class CurveMode { Tokens, WordsOnly };

inline const char* to_string(CurveMode mode) {
    return mode == CurveMode::Tokens ? "tokens" : "words";
}

struct CheckpointSchedule {
    std::vector<uint32_t> points;  // strictly increasing, first >= 2
};

// Shifted-start schedule: realizations for a checkpoint N start at offsets
// spaced by the delta_tau of the band that covers N.
struct ShiftSchedule {
    struct Band {
        uint64_t n_max;
        uint64_t delta_tau;
    };
    std::vector<Band> bands;

    uint64_t delta_tau_for(uint64_t n) const {
        for (const Band& b : bands)
            if (n <= b.n_max) return b.delta_tau;
        // Extend the ladder: another factor 10 per decade of N.
        uint64_t n_max = bands.empty() ? 10000 : bands.back().n_max;
        uint64_t dtau = bands.empty() ? 100 : bands.back().delta_tau;
        while (n > n_max) {
            n_max *= 10;
            dtau *= 10;
        }
        return dtau;
    }
};

// Delta-tau = 100 up to N = 10^4, then x10 per decade.
inline ShiftSchedule default_shift_schedule() {
    return ShiftSchedule{{{10000, 100}, {100000, 1000}, {1000000, 10000}}};
}

struct CurveSample {
    uint32_t n;
    double mean_l;
    uint32_t realizations;
};

struct GrowthCurve {
    std::vector<CurveSample> samples;  // ascending in n
    CurveMode mode = CurveMode::Tokens;
    std::string text_id;
};

// Every integer from 2 to 100, then 25 log-spaced points per decade,
// ending exactly at n_total.
inline CheckpointSchedule default_checkpoints(uint32_t n_total) {
    if (n_total < 2) throw ConfigError("checkpoint schedule needs n_total >= 2");
    CheckpointSchedule sched;
    for (uint32_t n = 2; n <= std::min<uint32_t>(100, n_total); ++n)
        sched.points.push_back(n);
    for (int k = 51;; ++k) {  // 10^(51/25) is the first grid point above 100
        const auto p = static_cast<uint32_t>(std::llround(std::pow(10.0, k / 25.0)));
        if (p >= n_total) break;
        if (p > sched.points.back()) sched.points.push_back(p);
    }
    if (sched.points.back() != n_total) sched.points.push_back(n_total);
    return sched;
}

namespace detail {

inline const TokenStream& mode_view(const TokenStream& stream, CurveMode mode,
                                    TokenStream& storage) {
    if (mode == CurveMode::Tokens) return stream;
    storage = strip_punctuation(stream);
    return storage;
}

// Mean in fixed input order. When every value is bit-equal the mean IS that
// value; taking the shortcut keeps chain-regime means exact instead of
// drifting in the last bits of a long float sum.
inline double exact_mean(const std::vector<double>& values) {
    const double first = values.front();
    bool all_equal = true;
    double sum = 0.0;
    for (double v : values) {
        all_equal = all_equal && v == first;
        sum += v;
    }
    return all_equal ? first : sum / static_cast<double>(values.size());
}

inline double exact_mean_column(const std::vector<std::vector<double>>& rows,
                                size_t col) {
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& row : rows) values.push_back(row[col]);
    return exact_mean(values);
}

} // namespace detail

// The measurement protocol: for each checkpoint N, grow the network
// cyclically from every offset in the band's shift grid until it holds N
// nodes, measure the ASPL of that snapshot, and average over offsets.
// Within one offset the growth runs once, pausing at each checkpoint.
inline GrowthCurve curve_for_text(const TokenStream& stream, CurveMode mode,
                                  const CheckpointSchedule& checkpoints,
                                  const ShiftSchedule& shifts,
                                  const std::string& text_id = "",
                                  int jobs = 1) {
    if (checkpoints.points.empty()) throw ConfigError("empty checkpoint schedule");
    TokenStream storage;
    const TokenStream& view = detail::mode_view(stream, mode, storage);
    const InternedStream interned = intern_stream(view);
    const uint64_t total_len = interned.total_len();

    const uint32_t max_checkpoint = checkpoints.points.back();
    if (interned.vocabulary() < max_checkpoint)
        throw VocabularyExhaustedError(
            "vocabulary " + std::to_string(interned.vocabulary()) +
            " smaller than largest checkpoint " + std::to_string(max_checkpoint));

    GrowthCurve curve;
    curve.mode = mode;
    curve.text_id = text_id;

    // Group checkpoints by shift band, preserving ascending order.
    std::map<uint64_t, std::vector<uint32_t>> by_dtau;
    for (uint32_t n : checkpoints.points)
        by_dtau[shifts.delta_tau_for(n)].push_back(n);

    std::map<uint32_t, CurveSample> samples;
    for (const auto& [dtau, points] : by_dtau) {
        std::vector<uint64_t> offsets;
        for (uint64_t off = 0; off < total_len; off += dtau) offsets.push_back(off);
        // One slot per (offset, checkpoint); summed in offset order afterwards.
        std::vector<std::vector<double>> l_values(offsets.size());

        parallel_for(offsets.size(), jobs, [&](size_t idx) {
            IdGrower grower(interned, offsets[idx], total_len);
            auto& row = l_values[idx];
            row.reserve(points.size());
            for (uint32_t target : points) {
                while (grower.network().n_nodes() < target) {
                    if (!grower.step())
                        throw VocabularyExhaustedError(
                            "checkpoint " + std::to_string(target) +
                            " unreachable from offset " + std::to_string(offsets[idx]));
                }
                row.push_back(aspl(grower.network()));
            }
        });

        for (size_t p = 0; p < points.size(); ++p) {
            samples[points[p]] = CurveSample{
                points[p], detail::exact_mean_column(l_values, p),
                static_cast<uint32_t>(offsets.size())};
        }
    }
    for (const auto& [n, sample] : samples) curve.samples.push_back(sample);
    return curve;
}

// Pointwise mean over the curves that reach each N; the per-point count
// records how many curves contributed.
inline GrowthCurve group_average(const std::vector<GrowthCurve>& curves) {
    if (curves.empty()) throw EmptyGroupError("no curves to average");
    const CurveMode mode = curves.front().mode;
    for (const GrowthCurve& c : curves)
        if (c.mode != mode) throw ConfigError("group_average needs a single mode");

    std::map<uint32_t, std::vector<double>> acc;  // n -> contributing values
    for (const GrowthCurve& c : curves)
        for (const CurveSample& s : c.samples) acc[s.n].push_back(s.mean_l);
    GrowthCurve out;
    out.mode = mode;
    out.text_id = "group";
    for (const auto& [n, values] : acc)
        out.samples.push_back(CurveSample{n, detail::exact_mean(values),
                                          static_cast<uint32_t>(values.size())});
    return out;
}

} // namespace wan
