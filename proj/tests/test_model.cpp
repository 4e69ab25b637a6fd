#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "wan/metrics.hpp"
#include "wan/model.hpp"

namespace {

wan::FitParams params_of(double c0, double alpha, double n0, double theta) {
    wan::FitParams p;
    p.c0 = c0;
    p.growth_alpha = alpha;
    p.n0 = n0;
    p.theta = theta;
    return p;
}

// Log-spaced N grid from 2 to n_max.
std::vector<uint32_t> log_grid(uint32_t n_max, int per_decade = 12) {
    std::vector<uint32_t> ns{2};
    for (int k = 1;; ++k) {
        const double v = 2.0 * std::pow(10.0, static_cast<double>(k) / per_decade);
        const auto n = static_cast<uint32_t>(std::llround(v));
        if (n > n_max) break;
        if (n > ns.back()) ns.push_back(n);
    }
    if (ns.back() != n_max) ns.push_back(n_max);
    return ns;
}

wan::GrowthCurve curve_from_model(const wan::FitParams& p, uint32_t n_max,
                                  double noise_sigma, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    wan::GrowthCurve curve;
    curve.text_id = "model";
    for (uint32_t n : log_grid(n_max)) {
        double l = wan::l_fit(n, p);
        if (noise_sigma > 0) l += noise(rng);
        curve.samples.push_back({n, l, 1});
    }
    return curve;
}

} // namespace

TEST_CASE("chain law values", "[model]") {
    CHECK(wan::l_chain(2) == 1.0);
    CHECK(wan::l_chain(11) == 4.0);
    CHECK(wan::l_chain(3) == Catch::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(wan::l_chain(3) == Catch::Approx(oracle::dense_aspl(oracle::path_graph(3))));
}

TEST_CASE("chain law equals path aspl up to 50 nodes", "[model]") {
    for (uint32_t n = 2; n <= 50; ++n)
        CHECK(wan::l_chain(n) == wan::aspl(oracle::path_graph(n)));
}

TEST_CASE("l_rand collapses to the asymptote when the log term vanishes", "[model]") {
    const double alpha = 0.37;
    for (double n : {10.0, 1e3, 1e6, 1e12})
        CHECK(wan::l_rand(n, alpha + 1.0, alpha) == Catch::Approx(1.0 / alpha));
}

TEST_CASE("l_rand approaches one over alpha", "[model]") {
    // Finite-size gap at n is |D| / (D + alpha ln n) with
    // D = ln(c0/(alpha+1)); at n = 1e12 the 2% window needs |D| < ~0.2.
    const double alpha = 0.37;
    const double val = wan::l_rand(1e12, 1.5, alpha);
    CHECK(std::abs(val - 1.0 / alpha) / (1.0 / alpha) < 0.02);
}

TEST_CASE("l_rand guards its pole", "[model]") {
    // c0 tiny makes the denominator negative at moderate n.
    CHECK_THROWS_AS(wan::l_rand(10.0, 1e-6, 0.3), wan::PoleError);
}

TEST_CASE("asymptote is the inverse growth exponent", "[model]") {
    CHECK(wan::asymptote(params_of(1, 0.5, 10, 2)) == 2.0);
    CHECK(wan::asymptote(params_of(1, 1.0 / 2.65, 10, 2)) == Catch::Approx(2.65));
}

TEST_CASE("distance to the asymptote shrinks monotonically", "[model]") {
    const double alpha = 0.4, c0 = 2.0;
    double prev = std::numeric_limits<double>::infinity();
    for (double exp10 = 3.0; exp10 <= 12.0; exp10 += 0.1) {
        const double gap = std::abs(wan::l_rand(std::pow(10.0, exp10), c0, alpha) -
                                    1.0 / alpha);
        CHECK(gap <= prev);
        prev = gap;
    }
}

TEST_CASE("sigmoid midpoint and limits", "[model]") {
    CHECK(wan::sigmoid(100, 100, 2.5) == 0.5);
    CHECK(wan::sigmoid(200, 100, 50) == Catch::Approx(1.0).margin(1e-9));
    CHECK(wan::sigmoid(1, 100, 2) == Catch::Approx(1.0 / (1.0 + 1e4)).epsilon(1e-9));
}

TEST_CASE("sigmoid is increasing and bounded", "[model]") {
    double prev = 0.0;
    for (double n = 1; n <= 1e6; n *= 1.7) {
        const double s = wan::sigmoid(n, 300, 1.3);
        CHECK(s > prev);
        CHECK(s > 0.0);
        CHECK(s < 1.0);
        prev = s;
    }
}

TEST_CASE("l_fit interpolates between the regimes", "[model]") {
    const auto p = params_of(2.0, 0.4, 100, 40);  // sharp transition
    CHECK(wan::l_fit(5, p) == Catch::Approx(wan::l_chain(5)).epsilon(1e-9));
    CHECK(wan::l_fit(10000, p) ==
          Catch::Approx(wan::l_rand(10000, p.c0, p.growth_alpha)).epsilon(1e-6));
    const auto mid = params_of(2.0, 0.4, 100, 2.5);
    CHECK(wan::l_fit(100, mid) ==
          Catch::Approx((wan::l_chain(100) +
                         wan::l_rand(100, mid.c0, mid.growth_alpha)) / 2.0));
}

TEST_CASE("l_fit tends to the chain law at small n and 1/alpha at large n", "[model]") {
    const auto p = params_of(2.0, 0.4, 30, 2.5);
    CHECK(wan::l_fit(1.0000001, p) == Catch::Approx(wan::l_chain(1)).margin(1e-3));
    const double target = 1.0 / p.growth_alpha;
    const double at_1e3 = std::abs(wan::l_fit(1e3, p) - target);
    const double at_1e6 = std::abs(wan::l_fit(1e6, p) - target);
    const double at_1e12 = std::abs(wan::l_fit(1e12, p) - target);
    CHECK(at_1e12 < at_1e6);
    CHECK(at_1e6 < at_1e3);
    CHECK(at_1e12 / target < 0.05);
}

TEST_CASE("noiseless round trip recovers parameters to 4 digits", "[model]") {
    const auto truth = params_of(2.0, 0.4, 30, 2.5);
    const auto curve = curve_from_model(truth, 100000, 0.0, 0);
    const auto fitted = wan::fit(curve);
    CHECK(fitted.residual < 1e-6);
    CHECK(fitted.c0 == Catch::Approx(truth.c0).epsilon(5e-4));
    CHECK(fitted.growth_alpha == Catch::Approx(truth.growth_alpha).epsilon(5e-4));
    CHECK(fitted.n0 == Catch::Approx(truth.n0).epsilon(5e-4));
    CHECK(fitted.theta == Catch::Approx(truth.theta).epsilon(5e-4));
}

TEST_CASE("noisy round trip stays within five percent", "[model]") {
    const auto truth = params_of(2.0, 0.4, 30, 2.5);
    const auto curve = curve_from_model(truth, 100000, 0.01, 1234);
    const auto fitted = wan::fit(curve);
    CHECK(fitted.c0 == Catch::Approx(truth.c0).epsilon(0.05));
    CHECK(fitted.growth_alpha == Catch::Approx(truth.growth_alpha).epsilon(0.05));
    CHECK(fitted.n0 == Catch::Approx(truth.n0).epsilon(0.05));
    CHECK(fitted.theta == Catch::Approx(truth.theta).epsilon(0.05));
}

TEST_CASE("fit ignores sample order", "[model]") {
    const auto truth = params_of(1.5, 0.45, 40, 2.0);
    auto curve = curve_from_model(truth, 20000, 0.005, 77);
    const auto a = wan::fit(curve);
    std::mt19937_64 rng(5);
    std::shuffle(curve.samples.begin(), curve.samples.end(), rng);
    const auto b = wan::fit(curve);
    CHECK(a.c0 == b.c0);
    CHECK(a.growth_alpha == b.growth_alpha);
    CHECK(a.n0 == b.n0);
    CHECK(a.theta == b.theta);
}

TEST_CASE("fit validates its input", "[model]") {
    const auto truth = params_of(2.0, 0.4, 30, 2.5);
    wan::GrowthCurve tiny;
    for (uint32_t n : {2u, 4u, 8u, 16u})
        tiny.samples.push_back({n, wan::l_fit(n, truth), 1});
    CHECK_THROWS_AS(wan::fit(tiny), wan::ConfigError);
}
