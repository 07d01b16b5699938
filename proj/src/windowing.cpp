#include "driftwatch/windowing.hpp"

#include <algorithm>

namespace driftwatch {

void WindowSpec::validate() const {
    if (duration.count() <= 0) {
        throw ConfigError("window duration must be positive");
    }
    if (min_samples == 0) {
        throw ConfigError("min_samples must be positive");
    }
}

void BaselineSpec::validate() const {
    if (depth == 0) {
        throw ConfigError("baseline depth must be at least 1");
    }
}

TimeWindow assign_window(Timestamp t, const WindowSpec& spec) {
    spec.validate();
    if (t < spec.origin) {
        throw PreEpochError("pre-epoch event: " + format_iso8601(t) + " precedes origin " +
                            format_iso8601(spec.origin));
    }
    std::int64_t elapsed = (t - spec.origin).count();
    std::int64_t index = elapsed / spec.duration.count();
    TimeWindow w;
    w.index = index;
    w.start = spec.origin + spec.duration * index;
    w.end = w.start + spec.duration;
    w.label = "W" + std::to_string(index);
    return w;
}

WindowAccumulator::WindowAccumulator(TimeWindow window, BinningSpec binning)
    : window_(std::move(window)), binning_(binning) {
    binning_.validate();
    if (!(window_.start < window_.end)) {
        throw ConfigError("window must have start < end");
    }
}

void WindowAccumulator::add(const PredictionEvent& event) {
    if (!open_) {
        throw WindowClosedError("window " + window_.label + " is closed");
    }
    if (event.timestamp < window_.start || event.timestamp >= window_.end) {
        throw RoutingError("event at " + format_iso8601(event.timestamp) +
                           " does not belong to window " + window_.label);
    }
    auto [it, inserted] = per_model_.try_emplace(event.model_id, ScoreHistogram{});
    if (inserted) it->second = ScoreHistogram::empty(binning_);
    it->second.add(event.score);
}

void WindowAccumulator::merge(const WindowAccumulator& other) {
    if (!open_ || !other.open_) {
        throw WindowClosedError("merge requires both accumulators open");
    }
    if (other.window_ != window_ || other.binning_ != binning_) {
        throw RoutingError("cannot merge accumulators for different windows");
    }
    for (const auto& [model, hist] : other.per_model_) {
        auto [it, inserted] = per_model_.try_emplace(model, ScoreHistogram{});
        if (inserted) it->second = ScoreHistogram::empty(binning_);
        it->second.merge(hist);
    }
}

WindowCloseResult WindowAccumulator::close(const WindowSpec& spec) {
    if (!open_) {
        throw WindowClosedError("window " + window_.label + " already closed");
    }
    spec.validate();
    open_ = false;

    WindowCloseResult result;
    result.window = window_;
    for (const auto& [model, hist] : per_model_) {
        if (hist.total >= spec.min_samples) {
            result.distributions.emplace(model, normalize(hist));
        } else {
            result.insufficient.emplace(model, hist.total);
        }
    }
    return result;
}

void WindowAccumulator::restore_histogram(const std::string& model_id, ScoreHistogram hist) {
    if (!open_) {
        throw WindowClosedError("cannot restore into a closed accumulator");
    }
    if (hist.binning != binning_) {
        throw BinningMismatchError("restored histogram binning differs from accumulator");
    }
    if (hist.counts.size() != static_cast<std::size_t>(binning_.bin_count)) {
        throw Error("restored histogram has " + std::to_string(hist.counts.size()) +
                    " bins, expected " + std::to_string(binning_.bin_count));
    }
    std::uint64_t sum = 0;
    for (auto c : hist.counts) sum += c;
    if (sum != hist.total) {
        throw Error("restored histogram total does not match its counts");
    }
    per_model_[model_id] = std::move(hist);
}

ScoreDistribution moving_average(const std::vector<ScoreDistribution>& history,
                                 std::uint32_t k) {
    if (history.empty()) {
        throw NoBaselineError("no baseline: history is empty");
    }
    if (k == 0) {
        throw ConfigError("moving average depth must be at least 1");
    }
    std::size_t take = std::min<std::size_t>(k, history.size());
    std::size_t first = history.size() - take;
    const BinningSpec& binning = history[first].binning();

    std::vector<double> mass(static_cast<std::size_t>(binning.bin_count), 0.0);
    std::uint64_t samples = 0;
    for (std::size_t h = first; h < history.size(); ++h) {
        const ScoreDistribution& d = history[h];
        if (d.binning() != binning) {
            throw BinningMismatchError("history distributions use different binnings");
        }
        for (std::size_t i = 0; i < mass.size(); ++i) mass[i] += d.mass(i);
        samples += d.sample_count();
    }
    double inv = 1.0 / static_cast<double>(take);
    for (double& m : mass) m *= inv;
    return ScoreDistribution::from_mass(binning, std::move(mass), samples);
}

}  // namespace driftwatch
