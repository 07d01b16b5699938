#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "driftwatch/windowing.hpp"
#include "support/test_support.hpp"

using namespace driftwatch;
using testsupport::make_dist;

namespace {

const Timestamp kOrigin = *parse_iso8601("2020-01-01T00:00:00Z");
const Duration kDay{86400};

WindowSpec day_spec(std::uint64_t min_samples = 100) {
    return WindowSpec{kDay, kOrigin, min_samples};
}

PredictionEvent event(Timestamp t, const std::string& model, double score,
                      const std::string& study = "s1") {
    return PredictionEvent{study, t, model, "consolidation", score};
}

}  // namespace

TEST_CASE("assign_window anchors index 0 at the origin") {
    TimeWindow w = assign_window(kOrigin, day_spec());
    CHECK(w.index == 0);
    CHECK(w.start == kOrigin);
    CHECK(w.end == kOrigin + kDay);
    CHECK(w.label == "W0");
}

TEST_CASE("assign_window respects the half-open boundary") {
    TimeWindow w = assign_window(kOrigin + kDay, day_spec());
    CHECK(w.index == 1);
    CHECK(w.start == kOrigin + kDay);
}

TEST_CASE("assign_window truncates inside a window") {
    TimeWindow w = assign_window(kOrigin + kDay * 2 + kDay / 2, day_spec());
    CHECK(w.index == 2);
}

TEST_CASE("assign_window rejects pre-epoch timestamps") {
    CHECK_THROWS_AS(assign_window(kOrigin - Duration{1}, day_spec()), PreEpochError);
}

TEST_CASE("assign_window is deterministic") {
    Timestamp t = kOrigin + Duration{123456};
    CHECK(assign_window(t, day_spec()) == assign_window(t, day_spec()));
}

TEST_CASE("accumulator routes scores into per-model histograms") {
    TimeWindow w = assign_window(kOrigin, day_spec());
    WindowAccumulator acc(w, BinningSpec{10, 0.0, 1.0});

    acc.add(event(kOrigin, "AI1", 0.95));
    CHECK(acc.histograms().at("AI1").total == 1);
    CHECK(acc.histograms().at("AI1").counts.back() == 1);

    acc.add(event(kOrigin + Duration{60}, "AI1", 0.99));
    CHECK(acc.histograms().at("AI1").counts.back() == 2);

    acc.add(event(kOrigin + Duration{90}, "AI2", 0.10));
    CHECK(acc.histograms().size() == 2);
    CHECK(acc.histograms().at("AI2").total == 1);
}

TEST_CASE("accumulator rejects events outside its window") {
    WindowAccumulator acc(assign_window(kOrigin, day_spec()), BinningSpec{10, 0.0, 1.0});
    CHECK_THROWS_AS(acc.add(event(kOrigin + kDay, "AI1", 0.5)), RoutingError);
}

TEST_CASE("closed accumulators refuse mutation and double close") {
    WindowAccumulator acc(assign_window(kOrigin, day_spec()), BinningSpec{10, 0.0, 1.0});
    acc.add(event(kOrigin, "AI1", 0.5));
    acc.close(day_spec(1));
    CHECK_FALSE(acc.is_open());
    CHECK_THROWS_AS(acc.add(event(kOrigin, "AI1", 0.5)), WindowClosedError);
    CHECK_THROWS_AS(acc.close(day_spec(1)), WindowClosedError);
}

TEST_CASE("close applies the min_samples floor") {
    WindowAccumulator acc(assign_window(kOrigin, day_spec()), BinningSpec{10, 0.0, 1.0});
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // 352 samples clears the default floor of 100; 40 does not.
    for (int i = 0; i < 352; ++i) acc.add(event(kOrigin + Duration{i}, "AI1", unit(rng)));
    for (int i = 0; i < 40; ++i) acc.add(event(kOrigin + Duration{i}, "AI2", unit(rng)));

    WindowCloseResult r = acc.close(day_spec());
    REQUIRE(r.distributions.count("AI1") == 1);
    CHECK(r.distributions.at("AI1").sample_count() == 352);
    CHECK(r.distributions.count("AI2") == 0);
    REQUIRE(r.insufficient.count("AI2") == 1);
    CHECK(r.insufficient.at("AI2") == 40);
    CHECK(r.insufficient.count("AI3") == 0);  // absent models stay absent
}

TEST_CASE("moving_average with fewer than k entries uses what exists") {
    std::vector<ScoreDistribution> history{make_dist({0.5, 0.5})};
    ScoreDistribution avg = moving_average(history, 3);
    CHECK(avg.mass(0) == doctest::Approx(0.5));
    CHECK(avg.mass(1) == doctest::Approx(0.5));
}

TEST_CASE("moving_average takes the per-bin arithmetic mean") {
    std::vector<ScoreDistribution> history{make_dist({0.5, 0.5}), make_dist({0.7, 0.3})};
    ScoreDistribution avg = moving_average(history, 2);
    CHECK(avg.mass(0) == doctest::Approx(0.6));
    CHECK(avg.mass(1) == doctest::Approx(0.4));
    CHECK(avg.sample_count() == 200);
}

TEST_CASE("moving_average uses only the most recent k distributions") {
    std::vector<ScoreDistribution> history{make_dist({0.2, 0.8}), make_dist({0.4, 0.6}),
                                           make_dist({0.6, 0.4})};
    // Direct mean of the last two: [(0.4+0.6)/2, (0.6+0.4)/2] = [0.5, 0.5].
    ScoreDistribution avg = moving_average(history, 2);
    CHECK(avg.mass(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(avg.mass(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("moving_average of empty history signals the bootstrap phase") {
    CHECK_THROWS_AS(moving_average({}, 1), NoBaselineError);
}

TEST_CASE("property: moving_average output mass sums to one") {
    std::mt19937_64 rng(555);
    BinningSpec binning{10, 0.0, 1.0};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ScoreDistribution> history;
        int n = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) {
            history.push_back(testsupport::random_distribution(rng, binning, 0.2));
        }
        std::uint32_t k = 1 + static_cast<std::uint32_t>(rng() % 10);
        ScoreDistribution avg = moving_average(history, k);
        double sum = 0.0;
        for (double m : avg.mass()) sum += m;
        REQUIRE(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("property: every in-range timestamp maps to exactly one window") {
    std::mt19937_64 rng(777);
    WindowSpec spec = day_spec();
    for (int trial = 0; trial < 2000; ++trial) {
        Timestamp t = kOrigin + Duration{static_cast<std::int64_t>(rng() % (86400 * 40))};
        TimeWindow w = assign_window(t, spec);
        REQUIRE(w.start <= t);
        REQUIRE(t < w.end);
        REQUIRE((w.start - kOrigin).count() % spec.duration.count() == 0);
    }
}

TEST_CASE("property: conservation and replay determinism over random streams") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<std::string> models{"AI1", "AI2", "AI3"};

    for (int trial = 0; trial < 20; ++trial) {
        std::vector<PredictionEvent> stream;
        std::map<std::string, std::uint64_t> expected;
        int n = 50 + static_cast<int>(rng() % 300);
        for (int i = 0; i < n; ++i) {
            const std::string& model = models[rng() % models.size()];
            stream.push_back(event(kOrigin + Duration{static_cast<std::int64_t>(rng() % 86400)},
                                   model, unit(rng), "s" + std::to_string(i)));
            ++expected[model];
        }

        auto run = [&] {
            WindowAccumulator acc(assign_window(kOrigin, day_spec()), BinningSpec{10, 0.0, 1.0});
            for (const auto& e : stream) acc.add(e);
            return acc;
        };
        WindowAccumulator first = run();
        WindowAccumulator second = run();

        for (const auto& [model, count] : expected) {
            REQUIRE(first.histograms().at(model).total == count);
        }
        REQUIRE(first.histograms() == second.histograms());
    }
}

TEST_CASE("parallel partial histograms merged at close equal serial accumulation") {
    std::mt19937_64 rng(2468);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TimeWindow w = assign_window(kOrigin, day_spec());
    BinningSpec binning{10, 0.0, 1.0};

    std::vector<PredictionEvent> stream;
    for (int i = 0; i < 1000; ++i) {
        stream.push_back(event(kOrigin + Duration{static_cast<std::int64_t>(rng() % 86400)},
                               i % 2 == 0 ? "AI1" : "AI2", unit(rng), "s" + std::to_string(i)));
    }

    WindowAccumulator serial(w, binning);
    for (const auto& e : stream) serial.add(e);

    std::vector<WindowAccumulator> partials(4, WindowAccumulator(w, binning));
    for (std::size_t i = 0; i < stream.size(); ++i) partials[i % 4].add(stream[i]);
    WindowAccumulator merged(w, binning);
    for (const auto& p : partials) merged.merge(p);

    REQUIRE(merged.histograms() == serial.histograms());

    // Bit-exact equality must survive normalization too.
    WindowSpec spec = day_spec(1);
    WindowCloseResult a = serial.close(spec);
    WindowCloseResult b = merged.close(spec);
    REQUIRE(a.distributions == b.distributions);
}

TEST_CASE("merging mismatched windows is a routing error") {
    BinningSpec binning{10, 0.0, 1.0};
    WindowAccumulator a(assign_window(kOrigin, day_spec()), binning);
    WindowAccumulator b(assign_window(kOrigin + kDay, day_spec()), binning);
    CHECK_THROWS_AS(a.merge(b), RoutingError);
}
