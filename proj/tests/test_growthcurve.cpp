#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wan/growthcurve.hpp"
#include "wan/metrics.hpp"

using oracle::stream_of;

namespace {

wan::TokenStream periodic_stream(const std::vector<std::string>& block, int repeats) {
    std::vector<std::string> words;
    for (int r = 0; r < repeats; ++r)
        words.insert(words.end(), block.begin(), block.end());
    return stream_of(words);
}

bool same_samples(const wan::GrowthCurve& a, const wan::GrowthCurve& b) {
    if (a.samples.size() != b.samples.size()) return false;
    for (size_t i = 0; i < a.samples.size(); ++i)
        if (a.samples[i].n != b.samples[i].n ||
            a.samples[i].mean_l != b.samples[i].mean_l ||
            a.samples[i].realizations != b.samples[i].realizations)
            return false;
    return true;
}

} // namespace

TEST_CASE("default checkpoints cover small totals densely", "[growthcurve]") {
    const auto sched = wan::default_checkpoints(50);
    REQUIRE(sched.points.size() == 49);
    CHECK(sched.points.front() == 2);
    CHECK(sched.points.back() == 50);
    for (size_t i = 0; i < sched.points.size(); ++i)
        CHECK(sched.points[i] == i + 2);
}

TEST_CASE("default checkpoints go log-spaced past 100", "[growthcurve]") {
    const auto sched = wan::default_checkpoints(1000);
    CHECK(sched.points.front() == 2);
    CHECK(sched.points.back() == 1000);
    for (uint32_t n = 2; n <= 100; ++n)
        CHECK(std::binary_search(sched.points.begin(), sched.points.end(), n));
    // Strictly increasing, and roughly 25 points over the 100..1000 decade.
    for (size_t i = 1; i < sched.points.size(); ++i)
        CHECK(sched.points[i] > sched.points[i - 1]);
    const size_t above_100 =
        sched.points.end() -
        std::upper_bound(sched.points.begin(), sched.points.end(), 100u);
    CHECK(above_100 >= 23);
    CHECK(above_100 <= 27);
}

TEST_CASE("last checkpoint equals the requested total", "[growthcurve]") {
    CHECK(wan::default_checkpoints(123456).points.back() == 123456u);
    CHECK(wan::default_checkpoints(2).points ==
          std::vector<uint32_t>{2});
}

TEST_CASE("shift schedule bands and their extension", "[growthcurve]") {
    const auto shifts = wan::default_shift_schedule();
    CHECK(shifts.delta_tau_for(2) == 100);
    CHECK(shifts.delta_tau_for(10000) == 100);
    CHECK(shifts.delta_tau_for(10001) == 1000);
    CHECK(shifts.delta_tau_for(100000) == 1000);
    CHECK(shifts.delta_tau_for(100001) == 10000);
    CHECK(shifts.delta_tau_for(1000000) == 10000);
    CHECK(shifts.delta_tau_for(10000000) == 100000);  // ladder keeps climbing
}

TEST_CASE("periodic streams make every start equivalent", "[growthcurve]") {
    const auto stream = periodic_stream({"v", "w", "x", "y", "z"}, 40);
    const wan::CheckpointSchedule checkpoints{{2, 3, 4, 5}};
    const wan::ShiftSchedule fine{{{100000, 1}}};
    const wan::ShiftSchedule coarse{{{100000, 5}}};
    const auto a = wan::curve_for_text(stream, wan::CurveMode::Tokens, checkpoints, fine);
    const auto b = wan::curve_for_text(stream, wan::CurveMode::Tokens, checkpoints, coarse);
    REQUIRE(a.samples.size() == b.samples.size());
    for (size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].mean_l == b.samples[i].mean_l);
        CHECK(a.samples[i].realizations == 200);
        CHECK(b.samples[i].realizations == 40);
    }
}

TEST_CASE("two-offset toy curve equals the enumerated mean", "[growthcurve]") {
    // From offset 0 the fourth node arrives on a star; from offset 4 it
    // arrives on a triangle with a pendant. Both enumerated by the dense
    // oracle and frozen: (3/2 + 4/3) / 2 = 17/12.
    const auto stream = stream_of({"a", "b", "a", "c", "a", "d", "e"});
    const wan::CheckpointSchedule checkpoints{{4}};
    const wan::ShiftSchedule shifts{{{1000, 4}}};  // offsets 0 and 4
    const auto curve =
        wan::curve_for_text(stream, wan::CurveMode::Tokens, checkpoints, shifts);
    REQUIRE(curve.samples.size() == 1);
    CHECK(curve.samples[0].realizations == 2);

    const double l0 = oracle::dense_aspl(wan::snapshot_at_nodes(stream, 0, 4));
    const double l4 = oracle::dense_aspl(wan::snapshot_at_nodes(stream, 4, 4));
    CHECK(l0 == 1.5);
    CHECK(l4 == Catch::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(curve.samples[0].mean_l == (l0 + l4) / 2.0);
    CHECK(curve.samples[0].mean_l == Catch::Approx(17.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("chain regime means are exact", "[growthcurve]") {
    // Before any repeat every realization is a path, so the mean at N = 2
    // and N = 3 must be exactly 1 and 4/3.
    std::mt19937_64 rng(31);
    std::vector<std::string> words;
    for (int i = 0; i < 400; ++i) words.push_back("w" + std::to_string(rng() % 60));
    const auto stream = stream_of(words);
    const wan::CheckpointSchedule checkpoints{{2, 3}};
    const auto curve = wan::curve_for_text(stream, wan::CurveMode::Tokens, checkpoints,
                                           wan::ShiftSchedule{{{1000, 10}}});
    CHECK(curve.samples[0].mean_l == 1.0);
    CHECK(curve.samples[1].mean_l == 4.0 / 3.0);
}

TEST_CASE("per-realization values reproduce bit-identically", "[growthcurve]") {
    std::mt19937_64 rng(32);
    std::vector<std::string> words;
    for (int i = 0; i < 300; ++i) words.push_back("w" + std::to_string(rng() % 40));
    const auto stream = stream_of(words);
    for (size_t offset : {0ul, 37ul, 120ul}) {
        const auto snap_a = wan::snapshot_at_nodes(stream, offset, 25);
        const auto snap_b = wan::snapshot_at_nodes(stream, offset, 25);
        CHECK(wan::aspl(snap_a) == wan::aspl(snap_b));
    }
}

TEST_CASE("curve is independent of the job count", "[growthcurve]") {
    std::mt19937_64 rng(33);
    std::vector<std::string> words;
    for (int i = 0; i < 600; ++i) words.push_back("w" + std::to_string(rng() % 80));
    const auto stream = stream_of(words);
    const auto checkpoints = wan::CheckpointSchedule{{2, 10, 40, 80}};
    const wan::ShiftSchedule shifts{{{1000, 50}}};
    const auto seq =
        wan::curve_for_text(stream, wan::CurveMode::Tokens, checkpoints, shifts, "t", 1);
    const auto par =
        wan::curve_for_text(stream, wan::CurveMode::Tokens, checkpoints, shifts, "t", 4);
    CHECK(same_samples(seq, par));
}

TEST_CASE("words-only mode strips punctuation before growing", "[growthcurve]") {
    wan::TokenStream stream;
    for (int r = 0; r < 30; ++r) {
        stream.tokens.push_back({"w" + std::to_string(r % 7), wan::TokenKind::Word});
        stream.tokens.push_back({",", wan::TokenKind::Punctuation});
        stream.tokens.push_back({"u" + std::to_string(r % 5), wan::TokenKind::Word});
    }
    const wan::CheckpointSchedule checkpoints{{2, 6, 12}};
    const wan::ShiftSchedule shifts{{{1000, 20}}};
    const auto tokens =
        wan::curve_for_text(stream, wan::CurveMode::Tokens, checkpoints, shifts);
    const auto words =
        wan::curve_for_text(stream, wan::CurveMode::WordsOnly, checkpoints, shifts);
    CHECK(tokens.mode == wan::CurveMode::Tokens);
    CHECK(words.mode == wan::CurveMode::WordsOnly);
    // The words-only stream is shorter, so the same shift step yields
    // fewer realizations.
    CHECK(words.samples[0].realizations < tokens.samples[0].realizations);
}

TEST_CASE("unreachable checkpoints are an error", "[growthcurve]") {
    const auto stream = stream_of({"a", "b", "c", "a", "b", "c"});
    const wan::CheckpointSchedule checkpoints{{2, 5}};
    CHECK_THROWS_AS(wan::curve_for_text(stream, wan::CurveMode::Tokens, checkpoints,
                                        wan::default_shift_schedule()),
                    wan::VocabularyExhaustedError);
}

TEST_CASE("group average of identical curves is the curve", "[growthcurve]") {
    wan::GrowthCurve base;
    base.mode = wan::CurveMode::Tokens;
    base.samples = {{2, 1.0, 3}, {5, 2.0, 3}, {9, 1.7, 3}};
    const auto avg = wan::group_average({base, base, base});
    REQUIRE(avg.samples.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(avg.samples[i].mean_l == base.samples[i].mean_l);
        CHECK(avg.samples[i].realizations == 3);
    }
}

TEST_CASE("group average tail falls back to surviving curves", "[growthcurve]") {
    wan::GrowthCurve longer, shorter;
    longer.samples = {{2, 1.0, 1}, {5, 4.0, 1}, {9, 6.0, 1}};
    shorter.samples = {{2, 2.0, 1}, {5, 2.0, 1}};
    const auto avg = wan::group_average({longer, shorter});
    REQUIRE(avg.samples.size() == 3);
    CHECK(avg.samples[0].mean_l == 1.5);
    CHECK(avg.samples[0].realizations == 2);
    CHECK(avg.samples[2].mean_l == 6.0);
    CHECK(avg.samples[2].realizations == 1);
}

TEST_CASE("empty group is an error", "[growthcurve]") {
    CHECK_THROWS_AS(wan::group_average({}), wan::EmptyGroupError);
}
