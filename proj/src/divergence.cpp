#include "driftwatch/divergence.hpp"

#include <cmath>
#include <sstream>

namespace driftwatch {

void BinningSpec::validate() const {
    if (bin_count < 2) {
        throw ConfigError("bin_count must be at least 2, got " + std::to_string(bin_count));
    }
    if (!(domain_low < domain_high)) {
        throw ConfigError("binning domain is empty: [" + std::to_string(domain_low) + ", " +
                          std::to_string(domain_high) + "]");
    }
}

int BinningSpec::bin_index(double score, std::size_t position) const {
    if (!(score >= domain_low) || !(score <= domain_high)) {
        std::ostringstream msg;
        msg << "score " << score << " at index " << position << " outside domain ["
            << domain_low << ", " << domain_high << "]";
        throw DomainError(score, position, msg.str());
    }
    double width = domain_high - domain_low;
    int idx = static_cast<int>(std::floor((score - domain_low) / width * bin_count));
    if (idx >= bin_count) idx = bin_count - 1;  // upper edge folds into the last bin
    if (idx < 0) idx = 0;
    return idx;
}

ScoreHistogram ScoreHistogram::empty(const BinningSpec& binning) {
    binning.validate();
    ScoreHistogram h;
    h.binning = binning;
    h.counts.assign(static_cast<std::size_t>(binning.bin_count), 0);
    h.total = 0;
    return h;
}

void ScoreHistogram::add(double score, std::size_t position) {
    int idx = binning.bin_index(score, position);
    ++counts[static_cast<std::size_t>(idx)];
    ++total;
}

void ScoreHistogram::merge(const ScoreHistogram& other) {
    if (other.binning != binning) {
        throw BinningMismatchError("cannot merge histograms with different binnings");
    }
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
}

ScoreDistribution ScoreDistribution::from_mass(const BinningSpec& binning,
                                               std::vector<double> mass,
                                               std::uint64_t sample_count) {
    binning.validate();
    if (sample_count == 0) {
        throw EmptyWindowError("a distribution must represent at least one sample");
    }
    if (mass.size() != static_cast<std::size_t>(binning.bin_count)) {
        throw ConfigError("mass vector length " + std::to_string(mass.size()) +
                          " does not match bin_count " + std::to_string(binning.bin_count));
    }
    double sum = 0.0;
    for (double m : mass) {
        if (!(m >= 0.0) || !(m <= 1.0)) {
            throw ConfigError("mass entries must lie in [0, 1]");
        }
        sum += m;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw ConfigError("mass must sum to 1, got " + std::to_string(sum));
    }
    ScoreDistribution d;
    d.binning_ = binning;
    d.mass_ = std::move(mass);
    d.sample_count_ = sample_count;
    return d;
}

ScoreHistogram bin_scores(std::span<const double> scores, const BinningSpec& binning) {
    ScoreHistogram hist = ScoreHistogram::empty(binning);
    for (std::size_t i = 0; i < scores.size(); ++i) hist.add(scores[i], i);
    return hist;
}

ScoreDistribution normalize(const ScoreHistogram& hist) {
    if (hist.total == 0) {
        throw EmptyWindowError("empty window: cannot normalize a histogram with zero samples");
    }
    std::vector<double> mass(hist.counts.size());
    double denom = static_cast<double>(hist.total);
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        mass[i] = static_cast<double>(hist.counts[i]) / denom;
    }
    return ScoreDistribution::from_mass(hist.binning, std::move(mass), hist.total);
}

namespace {

void require_same_binning(const ScoreDistribution& p, const ScoreDistribution& q) {
    if (p.binning() != q.binning()) {
        throw BinningMismatchError("divergence operands use different binnings");
    }
}

// Sum of p[i] * log2(p[i]/q[i]) with 0*log(0) = 0. Requires q[i] > 0
// wherever p[i] > 0; the caller guarantees that or handles infinity.
double kl_sum_bits(std::span<const double> p, std::span<const double> q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) sum += p[i] * std::log2(p[i] / q[i]);
    }
    return sum;
}

std::vector<double> smooth_and_renormalize(std::span<const double> mass, double epsilon) {
    std::vector<double> out(mass.size());
    double denom = 1.0 + epsilon * static_cast<double>(mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i) out[i] = (mass[i] + epsilon) / denom;
    return out;
}

}  // namespace

DivergenceValue kl_divergence(const ScoreDistribution& p, const ScoreDistribution& q,
                              std::optional<double> smoothing) {
    require_same_binning(p, q);
    DivergenceValue result;
    result.kind = DivergenceKind::KL;

    if (smoothing) {
        if (*smoothing < 0.0) {
            throw ConfigError("smoothing epsilon must be non-negative, got " +
                              std::to_string(*smoothing));
        }
        if (*smoothing > 0.0) {
            std::vector<double> ps = smooth_and_renormalize(p.mass(), *smoothing);
            std::vector<double> qs = smooth_and_renormalize(q.mass(), *smoothing);
            result.value = kl_sum_bits(ps, qs);
            result.smoothed = true;
            if (result.value < 0.0 && result.value > -1e-12) result.value = 0.0;
            return result;
        }
    }

    for (std::size_t i = 0; i < p.mass().size(); ++i) {
        if (p.mass(i) > 0.0 && q.mass(i) == 0.0) {
            result.value = DivergenceValue::infinite();
            return result;
        }
    }
    result.value = kl_sum_bits(p.mass(), q.mass());
    if (result.value < 0.0 && result.value > -1e-12) result.value = 0.0;
    return result;
}

DivergenceValue js_divergence(const ScoreDistribution& p, const ScoreDistribution& q) {
    require_same_binning(p, q);
    std::size_t n = p.mass().size();
    std::vector<double> mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (p.mass(i) + q.mass(i));

    // mid[i] = 0 implies both operands are zero there, contributing nothing.
    double js = 0.5 * kl_sum_bits(p.mass(), mid) + 0.5 * kl_sum_bits(q.mass(), mid);
    if (js < 0.0) js = 0.0;
    if (js > 1.0) js = 1.0;

    DivergenceValue result;
    result.kind = DivergenceKind::JS;
    result.value = js;
    return result;
}

}  // namespace driftwatch
