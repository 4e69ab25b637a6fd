#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wan/errors.hpp"
#include "wan/netbuild.hpp"
#include "wan/parallel.hpp"
#include "wan/tokenizer.hpp"

namespace wan {

namespace detail {

// Flat CSR view of an adjacency network, friendlier to BFS than the
// per-node vectors.
struct Csr {
    std::vector<uint32_t> offsets;
    std::vector<uint32_t> neighbors;

    explicit Csr(const AdjacencyNetwork& net) {
        const uint32_t n = net.n_nodes();
        offsets.resize(n + 1);
        uint32_t total = 0;
        for (uint32_t u = 0; u < n; ++u) {
            offsets[u] = total;
            total += static_cast<uint32_t>(net.adjacency[u].size());
        }
        offsets[n] = total;
        neighbors.resize(total);
        for (uint32_t u = 0; u < n; ++u)
            std::copy(net.adjacency[u].begin(), net.adjacency[u].end(),
                      neighbors.begin() + offsets[u]);
    }
};

// Sum of BFS distances from `source` to every reachable node.
// Returns the number of visited nodes through `visited`.
inline uint64_t bfs_distance_sum(const Csr& g, uint32_t source,
                                 std::vector<uint32_t>& dist,
                                 std::vector<uint32_t>& queue,
                                 uint32_t n, uint32_t& visited) {
    constexpr uint32_t kUnseen = 0xFFFFFFFFu;
    std::fill(dist.begin(), dist.begin() + n, kUnseen);
    dist[source] = 0;
    queue[0] = source;
    size_t head = 0, tail = 1;
    uint64_t sum = 0;
    while (head < tail) {
        const uint32_t u = queue[head++];
        const uint32_t du = dist[u];
        sum += du;
        for (uint32_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
            const uint32_t v = g.neighbors[e];
            if (dist[v] == kUnseen) {
                dist[v] = du + 1;
                queue[tail++] = v;
            }
        }
    }
    visited = static_cast<uint32_t>(tail);
    return sum;
}

} // namespace detail

// Average shortest path length over ordered node pairs, exact, one BFS per
// source. Distances accumulate in 64-bit integers so the result is
// bit-identical for any worker count.
inline double aspl(const AdjacencyNetwork& net, int jobs = 1) {
    const uint32_t n = net.n_nodes();
    if (n <= 1) return 0.0;
    const detail::Csr g(net);

    std::atomic<uint64_t> total{0};
    std::atomic<bool> disconnected{false};
    const int workers = std::max(1, jobs);
    const size_t chunk = std::max<size_t>(1, (n + 8 * workers - 1) / (8 * workers));
    const size_t n_chunks = (n + chunk - 1) / chunk;

    parallel_for(n_chunks, workers, [&](size_t c) {
        thread_local std::vector<uint32_t> dist, queue;
        if (dist.size() < n) {
            dist.resize(n);
            queue.resize(n);
        }
        uint64_t local = 0;
        const uint32_t lo = static_cast<uint32_t>(c * chunk);
        const uint32_t hi = static_cast<uint32_t>(std::min<size_t>(n, lo + chunk));
        for (uint32_t s = lo; s < hi; ++s) {
            uint32_t visited = 0;
            local += detail::bfs_distance_sum(g, s, dist, queue, n, visited);
            if (visited != n) {
                disconnected.store(true, std::memory_order_relaxed);
                return;
            }
        }
        total.fetch_add(local, std::memory_order_relaxed);
    });

    if (disconnected.load())
        throw DisconnectedError("network has unreachable node pairs");
    return static_cast<double>(total.load()) /
           (static_cast<double>(n) * (static_cast<double>(n) - 1.0));
}

struct DegreeHistogram {
    std::map<uint32_t, uint32_t> counts;  // degree -> node count

    uint32_t max_degree() const { return counts.empty() ? 0 : counts.rbegin()->first; }
    uint32_t degree_one_nodes() const {
        auto it = counts.find(1);
        return it == counts.end() ? 0 : it->second;
    }
    uint64_t total_nodes() const {
        uint64_t t = 0;
        for (const auto& [k, c] : counts) t += c;
        return t;
    }
};

inline DegreeHistogram degree_histogram(const AdjacencyNetwork& net) {
    DegreeHistogram hist;
    for (uint32_t u = 0; u < net.n_nodes(); ++u)
        ++hist.counts[static_cast<uint32_t>(net.degree(u))];
    return hist;
}

struct DegreeExponent {
    double gamma;
    double stderr_;
    size_t tail_size;
};

// Continuous maximum-likelihood exponent on the tail k >= kmin:
//   gamma = 1 + n / sum ln(k_i / (kmin - 0.5)),  stderr = (gamma - 1) / sqrt(n)
inline DegreeExponent fit_degree_exponent(const DegreeHistogram& hist, uint32_t kmin) {
    size_t distinct = 0;
    size_t n = 0;
    double log_sum = 0.0;
    const double shift = static_cast<double>(kmin) - 0.5;
    for (const auto& [k, c] : hist.counts) {
        if (k < kmin) continue;
        ++distinct;
        n += c;
        log_sum += c * std::log(static_cast<double>(k) / shift);
    }
    if (distinct < 10)
        throw InsufficientTailError("need at least 10 distinct degrees >= kmin, have " +
                                    std::to_string(distinct));
    const double gamma = 1.0 + static_cast<double>(n) / log_sum;
    return DegreeExponent{gamma, (gamma - 1.0) / std::sqrt(static_cast<double>(n)),
                          n};
}

struct ZipfFit {
    double zipf_alpha;
    double beta;
    double fit_error;  // RMS residual of log f
};

struct HeapsFit {
    double delta;
    double prefactor;
    double fit_error;
    bool saturated = false;
};

namespace detail {

// Frequencies by rank: descending count, ties broken by first appearance.
inline std::vector<uint64_t> rank_frequencies(const TokenStream& stream) {
    std::unordered_map<std::string, uint64_t> counts;
    std::vector<const std::string*> order;
    for (const Token& tok : stream.tokens) {
        auto [it, fresh] = counts.try_emplace(tok.surface, 0);
        if (fresh) order.push_back(&it->first);
        ++it->second;
    }
    std::vector<uint64_t> freq;
    freq.reserve(order.size());
    std::stable_sort(order.begin(), order.end(),
                     [&](const std::string* a, const std::string* b) {
                         return counts[*a] > counts[*b];
                     });
    for (const std::string* s : order) freq.push_back(counts[*s]);
    return freq;
}

// Least-squares fit of log f = C - alpha * log(r + beta) for a fixed beta.
// Returns (alpha, C, sse).
inline std::tuple<double, double, double>
zipf_ls_at_beta(const std::vector<uint64_t>& freq, double beta) {
    const size_t n = freq.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t r = 0; r < n; ++r) {
        const double x = std::log(static_cast<double>(r + 1) + beta);
        const double y = std::log(static_cast<double>(freq[r]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    const double slope = denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double sse = 0;
    for (size_t r = 0; r < n; ++r) {
        const double x = std::log(static_cast<double>(r + 1) + beta);
        const double y = std::log(static_cast<double>(freq[r]));
        const double e = y - (intercept + slope * x);
        sse += e * e;
    }
    return {-slope, intercept, sse};
}

inline double zipf_sse(const std::vector<uint64_t>& freq, double beta) {
    return std::get<2>(zipf_ls_at_beta(freq, beta));
}

} // namespace detail

// Zipf-Mandelbrot fit over all ranks; the shift parameter is scanned on a
// coarse grid and refined by golden-section search.
inline ZipfFit zipf_fit(const TokenStream& stream) {
    const std::vector<uint64_t> freq = detail::rank_frequencies(stream);
    if (freq.size() < 100)
        throw TooSmallVocabularyError("zipf fit needs >= 100 types, have " +
                                      std::to_string(freq.size()));

    double best_beta = 0.0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 32; ++i) {
        const double beta = 0.25 * i;
        const double sse = detail::zipf_sse(freq, beta);
        if (sse < best_sse) {
            best_sse = sse;
            best_beta = beta;
        }
    }
    // Golden-section refinement on the bracketing interval.
    double lo = std::max(-0.9, best_beta - 0.25);
    double hi = best_beta + 0.25;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
    double fa = detail::zipf_sse(freq, a), fb = detail::zipf_sse(freq, b);
    for (int it = 0; it < 60 && hi - lo > 1e-7; ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = detail::zipf_sse(freq, a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = detail::zipf_sse(freq, b);
        }
    }
    const double beta = (lo + hi) / 2;
    auto [alpha, intercept, sse] = detail::zipf_ls_at_beta(freq, beta);
    (void)intercept;
    return ZipfFit{alpha, beta, std::sqrt(sse / freq.size())};
}

// Vocabulary-growth curve sampled at log-spaced stream lengths
// (25 points per decade, final length always included).
inline std::vector<std::pair<uint64_t, uint64_t>> heaps_curve(const TokenStream& stream) {
    const size_t len = stream.total_len();
    if (len == 0) return {};
    std::vector<uint64_t> sample_taus;
    for (int k = 0;; ++k) {
        const auto tau = static_cast<uint64_t>(std::llround(std::pow(10.0, k / 25.0)));
        if (tau >= len) break;
        if (sample_taus.empty() || tau > sample_taus.back()) sample_taus.push_back(tau);
    }
    sample_taus.push_back(len);

    std::vector<std::pair<uint64_t, uint64_t>> curve;
    curve.reserve(sample_taus.size());
    std::unordered_set<std::string_view> seen;
    size_t next = 0;
    for (size_t i = 0; i < len; ++i) {
        seen.insert(stream.tokens[i].surface);
        while (next < sample_taus.size() && sample_taus[next] == i + 1) {
            curve.emplace_back(i + 1, seen.size());
            ++next;
        }
    }
    return curve;
}

// Power-law fit of the vocabulary growth; points with tau >= 100 weigh in
// (all points when the curve is too short for that window).
inline HeapsFit heaps_fit(const std::vector<std::pair<uint64_t, uint64_t>>& curve) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [tau, types] : curve)
        if (tau >= 100) pts.emplace_back(std::log(double(tau)), std::log(double(types)));
    if (pts.size() < 3) {
        pts.clear();
        for (const auto& [tau, types] : curve)
            pts.emplace_back(std::log(double(tau)), std::log(double(types)));
    }
    HeapsFit fit{0.0, 0.0, 0.0, false};
    if (pts.size() < 2) {
        fit.delta = 1.0;
        fit.prefactor = curve.empty() ? 0.0 : double(curve.back().second);
        return fit;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double denom = n * sxx - sx * sx;
    const double slope = denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double sse = 0;
    for (const auto& [x, y] : pts) {
        const double e = y - (intercept + slope * x);
        sse += e * e;
    }
    fit.delta = slope;
    fit.prefactor = std::exp(intercept);
    fit.fit_error = std::sqrt(sse / pts.size());

    // Saturated when the vocabulary stopped growing over the last octave.
    if (curve.size() >= 2) {
        const uint64_t final_types = curve.back().second;
        const uint64_t half_tau = curve.back().first / 2;
        for (const auto& [tau, types] : curve) {
            if (tau >= half_tau) {
                fit.saturated = (types == final_types);
                break;
            }
        }
    }
    return fit;
}

} // namespace wan
