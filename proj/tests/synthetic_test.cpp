#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "driftwatch/synthetic.hpp"
#include "support/test_support.hpp"

using namespace driftwatch;

namespace {

ScenarioSpec tiny_scenario() {
    ScenarioSpec spec;
    spec.seed = 7;
    spec.origin = *parse_iso8601("2020-01-01T00:00:00Z");
    spec.window_duration = Duration{86400};
    spec.models = {{"AI1", {0.3, 8.0}}, {"AI2", {0.35, 8.0}}, {"AI3", {0.4, 8.0}}};
    spec.phases = {{1, 10, {}}};
    return spec;
}

// Scores for one model inside one scenario window.
std::vector<double> window_scores(const std::vector<PredictionEvent>& events,
                                  const ScenarioSpec& spec, const std::string& model,
                                  int window) {
    std::vector<double> scores;
    Timestamp lo = spec.origin + spec.window_duration * window;
    Timestamp hi = lo + spec.window_duration;
    for (const auto& e : events) {
        if (e.model_id == model && e.timestamp >= lo && e.timestamp < hi) {
            scores.push_back(e.score);
        }
    }
    return scores;
}

}  // namespace

TEST_CASE("generate emits one event per study per model") {
    std::vector<PredictionEvent> events = generate(tiny_scenario());
    CHECK(events.size() == 30);  // 1 window x 10 studies x 3 models
    std::map<std::string, int> per_model;
    for (const auto& e : events) {
        ++per_model[e.model_id];
        CHECK(e.score >= 0.0);
        CHECK(e.score <= 1.0);
        CHECK(e.class_label == "consolidation");
    }
    CHECK(per_model["AI1"] == 10);
    CHECK(per_model["AI2"] == 10);
    CHECK(per_model["AI3"] == 10);
}

TEST_CASE("generate is deterministic for a fixed seed") {
    std::vector<PredictionEvent> a = generate(tiny_scenario());
    std::vector<PredictionEvent> b = generate(tiny_scenario());
    CHECK(a == b);

    ScenarioSpec other = tiny_scenario();
    other.seed = 8;
    CHECK(generate(other) != a);
}

TEST_CASE("timestamps advance monotonically through the stream") {
    ScenarioSpec spec = tiny_scenario();
    spec.phases = {{3, 50, {}}, {2, 25, {}}};
    std::vector<PredictionEvent> events = generate(spec);
    for (std::size_t i = 1; i < events.size(); ++i) {
        CHECK(events[i].timestamp >= events[i - 1].timestamp);
    }
}

TEST_CASE("a phase shift raises the shifted window's temporal divergence") {
    ScenarioSpec spec = tiny_scenario();
    spec.phases = {{2, 800, {}}, {1, 800, {{"AI1", {0.6, 8.0}}}}};
    std::vector<PredictionEvent> events = generate(spec);

    BinningSpec binning{10, 0.0, 1.0};
    auto dist = [&](int window) {
        return normalize(bin_scores(window_scores(events, spec, "AI1", window), binning));
    };
    // Direct evaluation of consecutive-window divergence on the raw scores.
    long double quiet =
        testsupport::oracle_js_bits(dist(1).mass(), dist(0).mass());
    long double shifted =
        testsupport::oracle_js_bits(dist(2).mass(), dist(1).mass());
    CHECK(static_cast<double>(shifted) > static_cast<double>(quiet));
    CHECK(static_cast<double>(shifted) > 0.10);
    CHECK(static_cast<double>(quiet) < 0.05);
}

TEST_CASE("scenario validation rejects degenerate specs") {
    ScenarioSpec spec = tiny_scenario();
    spec.phases.clear();
    CHECK_THROWS_AS(generate(spec), ConfigError);

    spec = tiny_scenario();
    spec.phases[0].studies_per_window = 0;
    CHECK_THROWS_AS(generate(spec), ConfigError);

    spec = tiny_scenario();
    spec.models[0].second.location = 1.0;
    CHECK_THROWS_AS(generate(spec), ConfigError);

    spec = tiny_scenario();
    spec.phases[0].overrides["AI9"] = {0.5, 8.0};
    CHECK_THROWS_AS(generate(spec), ConfigError);
}

TEST_CASE("paper-shaped scenario reproduces the case-study cohort sizes") {
    ScenarioSpec spec = paper_shaped_scenario();
    std::vector<PredictionEvent> events = generate(spec);

    const std::vector<std::uint32_t> sizes{969, 489, 646, 543, 352, 994};
    std::uint64_t expected = 0;
    for (auto s : sizes) expected += s;
    CHECK(events.size() == expected * 3);

    for (std::size_t w = 0; w < sizes.size(); ++w) {
        for (const std::string& model : {"AI1", "AI2", "AI3"}) {
            CHECK(window_scores(events, spec, model, static_cast<int>(w)).size() == sizes[w]);
        }
    }
}

TEST_CASE("paper-shaped scenario stays quiet before the shift and fires after") {
    ScenarioSpec spec = paper_shaped_scenario();
    std::vector<PredictionEvent> events = generate(spec);
    BinningSpec binning{10, 0.0, 1.0};

    auto dist = [&](const std::string& model, int window) {
        return normalize(bin_scores(window_scores(events, spec, model, window), binning));
    };

    for (const std::string& model : {"AI1", "AI2", "AI3"}) {
        // Consecutive-month readings across the stable windows stay low.
        for (int w = 1; w <= 4; ++w) {
            long double js = testsupport::oracle_js_bits(dist(model, w).mass(),
                                                         dist(model, w - 1).mass());
            CHECK(static_cast<double>(js) < 0.10);
        }
        long double post =
            testsupport::oracle_js_bits(dist(model, 5).mass(), dist(model, 4).mass());
        CHECK(static_cast<double>(post) > 0.10);
    }

    // The differential shift also drives at least one pair apart.
    long double pair_js =
        testsupport::oracle_js_bits(dist("AI1", 5).mass(), dist("AI3", 5).mass());
    CHECK(static_cast<double>(pair_js) > 0.20);
}

TEST_CASE("scenario JSON round-trips") {
    ScenarioSpec spec = paper_shaped_scenario(99);
    ScenarioSpec back = scenario_from_json(scenario_to_json(spec));
    CHECK(generate(back) == generate(spec));
}

TEST_CASE("scenario_config derives roles from model order") {
    MonitorConfig cfg = scenario_config(paper_shaped_scenario());
    CHECK(cfg.main_model == "AI1");
    CHECK(cfg.support_models == std::vector<std::string>{"AI2", "AI3"});
    CHECK(cfg.window.duration == Duration{std::chrono::days{30}});
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("null calibration: same-profile windows sit well under the thresholds") {
    int quiet = 0;
    const int trials = 20;
    for (int seed = 0; seed < trials; ++seed) {
        ScenarioSpec spec = tiny_scenario();
        spec.seed = 1000 + static_cast<std::uint64_t>(seed);
        spec.models = {{"AI1", {0.3, 7.0}}};
        spec.phases = {{2, 500, {}}};
        std::vector<PredictionEvent> events = generate(spec);
        BinningSpec binning{10, 0.0, 1.0};
        auto d0 = normalize(bin_scores(window_scores(events, spec, "AI1", 0), binning));
        auto d1 = normalize(bin_scores(window_scores(events, spec, "AI1", 1), binning));
        if (js_divergence(d0, d1).value < 0.05) ++quiet;
    }
    CHECK(quiet == trials);
}
