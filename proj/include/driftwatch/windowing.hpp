#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "driftwatch/divergence.hpp"
#include "driftwatch/event.hpp"
#include "driftwatch/timeutil.hpp"

namespace driftwatch {

/// A half-open accumulation interval [start, end). Windows with consecutive
/// indices are contiguous and non-overlapping.
struct TimeWindow {
    std::int64_t index = 0;
    Timestamp start{};
    Timestamp end{};
    std::string label;

    bool operator==(const TimeWindow&) const = default;
};

/// Fixed-duration windows anchored at an origin timestamp. Models whose
/// window sample count falls below min_samples are reported INSUFFICIENT
/// instead of producing a distribution.
struct WindowSpec {
    Duration duration{};
    Timestamp origin{};
    std::uint64_t min_samples = 100;

    void validate() const;
};

/// Temporal baseline: either the previous window alone (k = 1) or a
/// forward-moving average over the most recent k historical distributions.
struct BaselineSpec {
    enum class Mode { PreviousWindow, MovingAverage };
    Mode mode = Mode::PreviousWindow;
    std::uint32_t depth = 1;

    std::uint32_t effective_depth() const {
        return mode == Mode::PreviousWindow ? 1u : depth;
    }
    void validate() const;
};

/// Returns the unique window containing t. Deterministic in (t, spec).
/// Throws PreEpochError when t precedes the origin.
TimeWindow assign_window(Timestamp t, const WindowSpec& spec);

/// Close result: normalized distributions for models meeting the sample
/// floor; models under it are listed in `insufficient` with their counts.
struct WindowCloseResult {
    TimeWindow window;
    std::map<std::string, ScoreDistribution> distributions;
    std::map<std::string, std::uint64_t> insufficient;
};

/// Per-window, per-model histogram accumulation. One writer per open
/// accumulator; closed accumulators are immutable. Parallel ingestion is
/// supported by accumulating per-source partials and merging before close.
class WindowAccumulator {
public:
    WindowAccumulator(TimeWindow window, BinningSpec binning);

    /// Routes one event's score into its model's histogram. Throws
    /// WindowClosedError when closed, RoutingError when the event's
    /// timestamp falls outside this window.
    void add(const PredictionEvent& event);

    /// Merges a partial accumulator for the same window. Throws
    /// RoutingError on window mismatch, WindowClosedError if either
    /// side is closed.
    void merge(const WindowAccumulator& other);

    /// Normalizes per-model histograms and marks the accumulator CLOSED.
    /// A second close throws WindowClosedError.
    WindowCloseResult close(const WindowSpec& spec);

    const TimeWindow& window() const { return window_; }
    const BinningSpec& binning() const { return binning_; }
    bool is_open() const { return open_; }
    const std::map<std::string, ScoreHistogram>& histograms() const { return per_model_; }

    /// Restores raw counts (snapshot support). Throws on closed accumulator.
    void restore_histogram(const std::string& model_id, ScoreHistogram hist);

private:
    TimeWindow window_;
    BinningSpec binning_;
    std::map<std::string, ScoreHistogram> per_model_;
    bool open_ = true;
};

/// Per-bin arithmetic mean of the most recent min(k, |history|)
/// distributions; sample_count is the sum over the averaged constituents.
/// Throws NoBaselineError on empty history (the bootstrap phase).
ScoreDistribution moving_average(const std::vector<ScoreDistribution>& history,
                                 std::uint32_t k);

}  // namespace driftwatch
