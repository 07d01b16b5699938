#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftwatch/errors.hpp"

namespace driftwatch {

/// Fixed-width binning of a score domain. The upper edge is inclusive:
/// a score exactly equal to domain_high lands in the last bin.
struct BinningSpec {
    int bin_count = 10;
    double domain_low = 0.0;
    double domain_high = 1.0;

    bool operator==(const BinningSpec&) const = default;

    /// Throws ConfigError unless bin_count >= 2 and domain_low < domain_high.
    void validate() const;

    /// Bin index for an in-domain score. Throws DomainError otherwise;
    /// `position` is echoed back in the error for stream diagnostics.
    int bin_index(double score, std::size_t position = 0) const;
};

/// Raw per-bin counts accumulated over a window.
struct ScoreHistogram {
    BinningSpec binning;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    static ScoreHistogram empty(const BinningSpec& binning);

    void add(double score, std::size_t position = 0);

    /// Adds another histogram's counts. Count addition is associative and
    /// commutative, so partial histograms merged at close equal serial
    /// accumulation. Throws BinningMismatchError on differing binnings.
    void merge(const ScoreHistogram& other);

    bool operator==(const ScoreHistogram&) const = default;
};

/// A normalized, binned probability distribution of prediction scores.
/// Always represents at least one sample; an empty window has no
/// distribution.
class ScoreDistribution {
public:
    /// Validates mass entries in [0,1], sum within 1e-12 of one, and
    /// sample_count > 0. Throws EmptyWindowError / ConfigError.
    static ScoreDistribution from_mass(const BinningSpec& binning, std::vector<double> mass,
                                       std::uint64_t sample_count);

    const BinningSpec& binning() const { return binning_; }
    std::span<const double> mass() const { return mass_; }
    double mass(std::size_t i) const { return mass_[i]; }
    std::uint64_t sample_count() const { return sample_count_; }

    bool operator==(const ScoreDistribution&) const = default;

private:
    ScoreDistribution() = default;

    BinningSpec binning_;
    std::vector<double> mass_;
    std::uint64_t sample_count_ = 0;
};

enum class DivergenceKind { KL, JS };

/// One computed divergence in log-base-2 units (bits). KL may be infinite
/// when the operands have disjoint support and no smoothing was applied;
/// JS is always finite and lies in [0, 1].
struct DivergenceValue {
    DivergenceKind kind = DivergenceKind::JS;
    double value = 0.0;
    bool smoothed = false;

    bool is_infinite() const { return std::isinf(value); }

    static constexpr double infinite() { return std::numeric_limits<double>::infinity(); }
};

/// Bins scores into a histogram. Scores exactly at domain_high land in the
/// last bin. Throws DomainError naming the offending value and index.
ScoreHistogram bin_scores(std::span<const double> scores, const BinningSpec& binning);

/// Normalizes counts to a probability distribution. Throws EmptyWindowError
/// when the histogram is empty; there is no silent uniform fallback.
ScoreDistribution normalize(const ScoreHistogram& hist);

/// KL(P||Q) in bits with the 0*log(0) = 0 convention. Without smoothing,
/// any bin where p > 0 and q = 0 makes the result infinite. With smoothing,
/// epsilon is added to every bin of both operands and each is renormalized
/// before summation. Throws BinningMismatchError / ConfigError.
DivergenceValue kl_divergence(const ScoreDistribution& p, const ScoreDistribution& q,
                              std::optional<double> smoothing = std::nullopt);

/// JS(P||Q) = KL(P||M)/2 + KL(Q||M)/2 with M the per-bin average. Always
/// finite, symmetric, and in [0, 1] bits. Throws BinningMismatchError.
DivergenceValue js_divergence(const ScoreDistribution& p, const ScoreDistribution& q);

}  // namespace driftwatch
