#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "driftwatch/monitor.hpp"
#include "support/test_support.hpp"

using namespace driftwatch;
using testsupport::make_dist;

namespace {

const Timestamp kOrigin = *parse_iso8601("2020-01-01T00:00:00Z");

MonitorConfig test_config() {
    MonitorConfig cfg;
    cfg.main_model = "AI1";
    cfg.support_models = {"AI2", "AI3"};
    cfg.binning = BinningSpec{10, 0.0, 1.0};
    cfg.window = WindowSpec{Duration{86400}, kOrigin, 100};
    return cfg;
}

TimeWindow window0() { return assign_window(kOrigin, test_config().window); }

DivergenceReading predictive_reading(const std::string& a, const std::string& b, double value) {
    DivergenceReading r;
    r.metric = MetricKind::Predictive;
    r.model_a = a;
    r.model_b = b;
    r.window = window0();
    r.value = DivergenceValue{DivergenceKind::JS, value, false};
    return r;
}

DivergenceReading temporal_reading(const std::string& model, double value) {
    DivergenceReading r;
    r.metric = MetricKind::Temporal;
    r.model_a = model;
    r.model_b = kBaseline;
    r.window = window0();
    r.value = DivergenceValue{DivergenceKind::JS, value, false};
    return r;
}

// Directly recodes the unique-common-member rule as a cross-check: a
// candidate appears in every exceeding pair and every pair without it
// stays at or below the threshold.
std::string brute_force_suspect(const std::vector<DivergenceReading>& readings,
                                double threshold) {
    std::set<std::string> models;
    bool any_exceeds = false;
    for (const auto& r : readings) {
        models.insert(r.model_a);
        models.insert(r.model_b);
        any_exceeds |= r.value.value > threshold;
    }
    if (!any_exceeds) return kInconclusive;

    std::vector<std::string> candidates;
    for (const auto& m : models) {
        bool ok = true;
        for (const auto& r : readings) {
            bool contains = r.model_a == m || r.model_b == m;
            if (r.value.value > threshold && !contains) ok = false;  // exceeding pair without m
            if (!contains && r.value.value > threshold) ok = false;  // m not exonerated
        }
        if (ok) candidates.push_back(m);
    }
    return candidates.size() == 1 ? candidates.front() : kInconclusive;
}

}  // namespace

TEST_CASE("config validation catches role and threshold mistakes") {
    MonitorConfig cfg = test_config();
    CHECK_NOTHROW(cfg.validate());

    MonitorConfig bad = cfg;
    bad.support_models = {"AI1", "AI2"};
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = cfg;
    bad.support_models = {"AI2", "AI2"};
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = cfg;
    bad.support_models.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = cfg;
    bad.predictive_threshold = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = cfg;
    bad.temporal_threshold = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("predictive divergence covers every unordered pair") {
    MonitorConfig cfg = test_config();
    std::map<std::string, ScoreDistribution> dists{
        {"AI1", make_dist({0.2, 0.8})},
        {"AI2", make_dist({0.2, 0.8})},
        {"AI3", make_dist({0.2, 0.8})},
    };
    PredictiveResult r = predictive_divergence(dists, cfg);
    REQUIRE(r.readings.size() == 3);  // n(n-1)/2 for n = 3
    for (const auto& reading : r.readings) {
        CHECK(reading.value.value == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK(r.readings[0].pair_key() == "AI1-AI2");
    CHECK(r.readings[1].pair_key() == "AI1-AI3");
    CHECK(r.readings[2].pair_key() == "AI2-AI3");
    CHECK(r.skipped_pairs.empty());
}

TEST_CASE("predictive divergence skips pairs with a missing member") {
    MonitorConfig cfg = test_config();
    std::map<std::string, ScoreDistribution> dists{
        {"AI1", make_dist({0.2, 0.8})},
        {"AI2", make_dist({0.3, 0.7})},
    };
    PredictiveResult r = predictive_divergence(dists, cfg);
    REQUIRE(r.readings.size() == 1);
    CHECK(r.readings[0].pair_key() == "AI1-AI2");
    REQUIRE(r.skipped_pairs.size() == 2);
    CHECK(r.skipped_pairs[0] == "AI1-AI3");
    CHECK(r.skipped_pairs[1] == "AI2-AI3");
}

TEST_CASE("predictive divergence without the main model is an error") {
    MonitorConfig cfg = test_config();
    std::map<std::string, ScoreDistribution> dists{{"AI2", make_dist({0.2, 0.8})}};
    CHECK_THROWS_AS(predictive_divergence(dists, cfg), Error);
}

TEST_CASE("disjoint single-bin supports read the JS maximum") {
    MonitorConfig cfg = test_config();
    cfg.support_models = {"AI2"};
    std::map<std::string, ScoreDistribution> dists{
        {"AI1", make_dist({1.0, 0.0})},
        {"AI2", make_dist({0.0, 1.0})},
    };
    PredictiveResult r = predictive_divergence(dists, cfg);
    REQUIRE(r.readings.size() == 1);
    CHECK(r.readings[0].value.value == doctest::Approx(1.0));
}

TEST_CASE("temporal stability compares against the moving-average baseline") {
    MonitorConfig cfg = test_config();
    auto current = make_dist({0.5, 0.5});
    std::vector<ScoreDistribution> history{make_dist({0.5, 0.5})};
    auto reading = temporal_stability("AI1", current, history, cfg);
    REQUIRE(reading.has_value());
    CHECK(reading->metric == MetricKind::Temporal);
    CHECK(reading->model_b == kBaseline);
    CHECK(reading->value.value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("temporal stability with empty history signals bootstrap") {
    MonitorConfig cfg = test_config();
    CHECK_FALSE(temporal_stability("AI1", make_dist({0.5, 0.5}), {}, cfg).has_value());
}

TEST_CASE("month-over-month chaining with k = 1 compares adjacent windows only") {
    MonitorConfig cfg = test_config();  // PreviousWindow baseline, k = 1
    std::vector<ScoreDistribution> history{make_dist({0.9, 0.1}), make_dist({0.5, 0.5})};
    auto current = make_dist({0.5, 0.5});
    auto reading = temporal_stability("AI1", current, history, cfg);
    REQUIRE(reading.has_value());
    // Equal to the immediately preceding window, older history ignored.
    CHECK(reading->value.value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("suspect attribution: post-shift fixture points at the common model") {
    // Pairwise readings 0.272 / 0.173 / 0.228 at threshold 0.20: both
    // exceeding pairs contain AI2 and the AI2-free pair stays below.
    std::vector<DivergenceReading> readings{
        predictive_reading("AI1", "AI2", 0.272),
        predictive_reading("AI1", "AI3", 0.173),
        predictive_reading("AI2", "AI3", 0.228),
    };
    CHECK(attribute_suspect(readings, 0.20) == "AI2");
}

TEST_CASE("suspect attribution: reference fixture isolates the outlier model") {
    std::vector<DivergenceReading> readings{
        predictive_reading("AI1", "AI2", 0.116),
        predictive_reading("AI1", "AI3", 0.547),
        predictive_reading("AI2", "AI3", 0.590),
    };
    CHECK(attribute_suspect(readings, 0.20) == "AI3");
}

TEST_CASE("suspect attribution: global shift is inconclusive") {
    std::vector<DivergenceReading> readings{
        predictive_reading("AI1", "AI2", 0.4),
        predictive_reading("AI1", "AI3", 0.5),
        predictive_reading("AI2", "AI3", 0.45),
    };
    CHECK(attribute_suspect(readings, 0.20) == kInconclusive);
}

TEST_CASE("suspect attribution: nothing exceeding is inconclusive, empty is an error") {
    std::vector<DivergenceReading> readings{predictive_reading("AI1", "AI2", 0.05)};
    CHECK(attribute_suspect(readings, 0.20) == kInconclusive);
    CHECK_THROWS_AS(attribute_suspect({}, 0.20), Error);
}

TEST_CASE("property: attribution matches a brute-force recomputation of the rule") {
    std::mt19937_64 rng(8899);
    std::uniform_real_distribution<double> unit(0.0, 0.5);
    const std::vector<std::string> models{"A", "B", "C", "D"};
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<DivergenceReading> readings;
        std::size_t n = 3 + rng() % 2;  // 3 or 4 models, all pairs
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                readings.push_back(predictive_reading(models[i], models[j], unit(rng)));
            }
        }
        REQUIRE(attribute_suspect(readings, 0.20) == brute_force_suspect(readings, 0.20));
    }
}

TEST_CASE("predictive alert bundles offending pairs with attribution") {
    std::vector<DivergenceReading> readings{
        predictive_reading("AI1", "AI2", 0.272),
        predictive_reading("AI1", "AI3", 0.173),
        predictive_reading("AI2", "AI3", 0.228),
    };
    auto alert = build_predictive_alert(readings, 0.20);
    REQUIRE(alert.has_value());
    CHECK(alert->metric == MetricKind::Predictive);
    CHECK(alert->suspect == "AI2");
    CHECK(alert->threshold == 0.20);
    REQUIRE(alert->readings.size() == 2);
    for (const auto& r : alert->readings) CHECK(r.value.value > 0.20);
    CHECK(alert->severity == Severity::Warn);  // worst 0.272 < 2 x 0.20
}

TEST_CASE("reference fixture flags exactly the two outlier pairs") {
    std::vector<DivergenceReading> readings{
        predictive_reading("AI1", "AI2", 0.116),
        predictive_reading("AI1", "AI3", 0.547),
        predictive_reading("AI2", "AI3", 0.590),
    };
    auto alert = build_predictive_alert(readings, 0.20);
    REQUIRE(alert.has_value());
    CHECK(alert->suspect == "AI3");
    REQUIRE(alert->readings.size() == 2);
    CHECK(alert->readings[0].pair_key() == "AI1-AI3");
    CHECK(alert->readings[1].pair_key() == "AI2-AI3");
    CHECK(alert->severity == Severity::Critical);  // 0.590 >= 0.40
}

TEST_CASE("no alert when nothing exceeds the threshold") {
    std::vector<DivergenceReading> readings{predictive_reading("AI1", "AI2", 0.116)};
    CHECK_FALSE(build_predictive_alert(readings, 0.20).has_value());
}

TEST_CASE("temporal alert severity follows the two-times rule") {
    auto critical = build_temporal_alert(temporal_reading("AI1", 0.435), 0.10);
    REQUIRE(critical.has_value());
    CHECK(critical->severity == Severity::Critical);
    CHECK(critical->suspect == "AI1");

    auto warn = build_temporal_alert(temporal_reading("AI1", 0.105), 0.10);
    REQUIRE(warn.has_value());
    CHECK(warn->severity == Severity::Warn);

    CHECK_FALSE(build_temporal_alert(temporal_reading("AI1", 0.099), 0.10).has_value());
}

TEST_CASE("evaluate_window returns readings even when nothing alerts") {
    MonitorConfig cfg = test_config();
    WindowCloseResult closed;
    closed.window = window0();
    closed.distributions.emplace("AI1", make_dist({0.2, 0.8}));
    closed.distributions.emplace("AI2", make_dist({0.2, 0.8}));
    closed.distributions.emplace("AI3", make_dist({0.2, 0.8}));
    std::map<std::string, std::vector<ScoreDistribution>> histories{
        {"AI1", {make_dist({0.2, 0.8})}},
        {"AI2", {make_dist({0.2, 0.8})}},
        {"AI3", {make_dist({0.2, 0.8})}},
    };

    WindowEvaluation eval = evaluate_window(closed, histories, cfg);
    CHECK(eval.readings.size() == 6);  // 3 predictive + 3 temporal
    CHECK(eval.alerts.empty());
    CHECK(eval.coverage_notes.empty());
}

TEST_CASE("evaluate_window emits one temporal alert per offending model") {
    MonitorConfig cfg = test_config();
    WindowCloseResult closed;
    closed.window = window0();
    closed.distributions.emplace("AI1", make_dist({1.0, 0.0}));
    closed.distributions.emplace("AI2", make_dist({1.0, 0.0}));
    closed.distributions.emplace("AI3", make_dist({1.0, 0.0}));
    std::map<std::string, std::vector<ScoreDistribution>> histories{
        {"AI1", {make_dist({0.0, 1.0})}},  // JS = 1.0, critical
        {"AI2", {make_dist({1.0, 0.0})}},  // JS = 0, quiet
        {"AI3", {make_dist({0.0, 1.0})}},  // JS = 1.0, critical
    };

    WindowEvaluation eval = evaluate_window(closed, histories, cfg);
    int temporal_alerts = 0;
    for (const auto& alert : eval.alerts) {
        if (alert.metric == MetricKind::Temporal) {
            ++temporal_alerts;
            CHECK(alert.severity == Severity::Critical);
        }
    }
    CHECK(temporal_alerts == 2);
}

TEST_CASE("evaluate_window turns insufficiency into coverage notes, not alerts") {
    MonitorConfig cfg = test_config();
    WindowCloseResult closed;
    closed.window = window0();
    closed.distributions.emplace("AI1", make_dist({0.2, 0.8}));
    closed.distributions.emplace("AI2", make_dist({0.2, 0.8}));
    closed.insufficient.emplace("AI3", 40);

    WindowEvaluation eval = evaluate_window(closed, {}, cfg);
    CHECK(eval.readings.size() == 1);  // AI1-AI2 only
    CHECK(eval.alerts.empty());
    REQUIRE(eval.coverage_notes.size() == 3);  // insufficiency + two skipped pairs
    CHECK(eval.coverage_notes[0].find("INSUFFICIENT") != std::string::npos);
}

TEST_CASE("evaluate_window notes an absent main model instead of failing") {
    MonitorConfig cfg = test_config();
    WindowCloseResult closed;
    closed.window = window0();
    closed.distributions.emplace("AI2", make_dist({0.2, 0.8}));

    WindowEvaluation eval = evaluate_window(closed, {}, cfg);
    CHECK(eval.readings.empty());
    REQUIRE_FALSE(eval.coverage_notes.empty());
    CHECK(eval.coverage_notes[0].find("main model") != std::string::npos);
}

TEST_CASE("evaluating the same closed window twice is idempotent") {
    MonitorConfig cfg = test_config();
    WindowCloseResult closed;
    closed.window = window0();
    closed.distributions.emplace("AI1", make_dist({0.6, 0.4}));
    closed.distributions.emplace("AI2", make_dist({0.1, 0.9}));
    closed.distributions.emplace("AI3", make_dist({0.3, 0.7}));
    std::map<std::string, std::vector<ScoreDistribution>> histories{
        {"AI1", {make_dist({0.2, 0.8})}},
    };

    WindowEvaluation a = evaluate_window(closed, histories, cfg);
    WindowEvaluation b = evaluate_window(closed, histories, cfg);
    REQUIRE(a.readings.size() == b.readings.size());
    for (std::size_t i = 0; i < a.readings.size(); ++i) {
        CHECK(a.readings[i].pair_key() == b.readings[i].pair_key());
        CHECK(a.readings[i].value.value == b.readings[i].value.value);
    }
    REQUIRE(a.alerts.size() == b.alerts.size());
    CHECK(a.coverage_notes == b.coverage_notes);
}

TEST_CASE("property: no reading above threshold is ever silently dropped") {
    std::mt19937_64 rng(60321);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    MonitorConfig cfg = test_config();
    cfg.temporal_threshold = 0.25;
    cfg.predictive_threshold = 0.25;

    for (int trial = 0; trial < 300; ++trial) {
        WindowCloseResult closed;
        closed.window = window0();
        std::map<std::string, std::vector<ScoreDistribution>> histories;
        for (const std::string& model : {"AI1", "AI2", "AI3"}) {
            double lo = unit(rng);
            closed.distributions.emplace(model, make_dist({lo, 1.0 - lo}));
            double hist_lo = unit(rng);
            histories[model] = {make_dist({hist_lo, 1.0 - hist_lo})};
        }

        WindowEvaluation eval = evaluate_window(closed, histories, cfg);
        std::multiset<std::string> offending, alerted;
        for (const auto& r : eval.readings) {
            double threshold = r.metric == MetricKind::Predictive ? cfg.predictive_threshold
                                                                  : cfg.temporal_threshold;
            if (r.value.value > threshold) offending.insert(r.pair_key());
        }
        for (const auto& alert : eval.alerts) {
            for (const auto& r : alert.readings) {
                REQUIRE(r.value.value > alert.threshold);
                alerted.insert(r.pair_key());
            }
        }
        REQUIRE(offending == alerted);
    }
}

TEST_CASE("synthetic mean shift: temporal reading grows strictly with shift size") {
    // Scores from a Beta(2,5)-shaped profile; the shifted variants add a
    // constant to every score, so the comparison is exactly mean-shifted.
    std::mt19937_64 rng(424242);
    std::gamma_distribution<double> ga(2.0, 1.0), gb(5.0, 1.0);
    std::vector<double> base(2000);
    for (auto& s : base) {
        double x = ga(rng), y = gb(rng);
        s = x / (x + y);
    }
    BinningSpec binning{10, 0.0, 1.0};
    ScoreDistribution baseline = normalize(bin_scores(base, binning));

    MonitorConfig cfg = test_config();
    std::vector<ScoreDistribution> history{baseline};

    double previous = -1.0;
    for (double delta : {0.0, 0.05, 0.1, 0.2, 0.3}) {
        std::vector<double> shifted(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) shifted[i] = std::min(base[i] + delta, 1.0);
        ScoreDistribution current = normalize(bin_scores(shifted, binning));
        auto reading = temporal_stability("AI1", current, history, cfg);
        REQUIRE(reading.has_value());

        long double oracle = testsupport::oracle_js_bits(current.mass(), baseline.mass());
        CHECK(std::abs(reading->value.value - static_cast<double>(oracle)) < 1e-10);

        REQUIRE(reading->value.value > previous);
        previous = reading->value.value;
    }
}
