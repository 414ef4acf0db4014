#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "uqeval/errors.hpp"

namespace uqeval {

struct ReliabilityBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
    double confidence = std::numeric_limits<double>::quiet_NaN(); // mean p
    double accuracy = std::numeric_limits<double>::quiet_NaN();   // positive rate
};

/// Equal-width confidence bins over [0,1]; the last bin is closed at 1.
/// Empty bins keep count 0 and NaN markers.
struct ReliabilityBins {
    std::vector<ReliabilityBin> bins;
    std::size_t total = 0;
};

inline ReliabilityBins reliability_bins(std::span<const double> p,
                                        std::span<const std::uint8_t> y,
                                        std::size_t bin_count) {
    if (p.empty()) throw validation_error("reliability bins need at least one sample");
    if (p.size() != y.size())
        throw validation_error("probability and label counts differ");
    if (bin_count == 0) throw validation_error("bin count must be positive");

    ReliabilityBins out;
    out.total = p.size();
    out.bins.resize(bin_count);
    std::vector<double> conf_sum(bin_count, 0.0);
    std::vector<double> pos_sum(bin_count, 0.0);
    const double width = 1.0 / static_cast<double>(bin_count);
    for (std::size_t b = 0; b < bin_count; ++b) {
        out.bins[b].lower = static_cast<double>(b) * width;
        out.bins[b].upper = b + 1 == bin_count ? 1.0 : static_cast<double>(b + 1) * width;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0 && p[i] <= 1.0))
            throw validation_error("probabilities must lie in [0,1]");
        std::size_t b = static_cast<std::size_t>(p[i] * static_cast<double>(bin_count));
        if (b >= bin_count) b = bin_count - 1; // p == 1 belongs to the last bin
        out.bins[b].count += 1;
        conf_sum[b] += p[i];
        pos_sum[b] += y[i] ? 1.0 : 0.0;
    }
    for (std::size_t b = 0; b < bin_count; ++b) {
        if (out.bins[b].count == 0) continue;
        const double n = static_cast<double>(out.bins[b].count);
        out.bins[b].confidence = conf_sum[b] / n;
        out.bins[b].accuracy = pos_sum[b] / n;
    }
    return out;
}

/// Expected calibration error: bin-weighted |positive fraction - mean
/// confidence|, empty bins skipped.
inline double ece(const ReliabilityBins& bins) {
    double total = 0.0;
    for (const auto& bin : bins.bins) {
        if (bin.count == 0) continue;
        total += (static_cast<double>(bin.count) / static_cast<double>(bins.total)) *
                 std::abs(bin.accuracy - bin.confidence);
    }
    return total;
}

inline double ece(std::span<const double> p, std::span<const std::uint8_t> y,
                  std::size_t bin_count) {
    return ece(reliability_bins(p, y, bin_count));
}

inline constexpr double kNllClamp = 1e-7;

/// Mean binary cross-entropy, natural log, probabilities clamped to
/// [1e-7, 1-1e-7].
inline double nll(std::span<const double> p, std::span<const std::uint8_t> y) {
    if (p.empty()) throw validation_error("nll needs at least one sample");
    if (p.size() != y.size())
        throw validation_error("probability and label counts differ");
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double clamped = std::clamp(p[i], kNllClamp, 1.0 - kNllClamp);
        total += y[i] ? std::log(clamped) : std::log(1.0 - clamped);
    }
    return -total / static_cast<double>(p.size());
}

/// Mean squared difference between probability and binary outcome.
inline double brier(std::span<const double> p, std::span<const std::uint8_t> y) {
    if (p.empty()) throw validation_error("brier needs at least one sample");
    if (p.size() != y.size())
        throw validation_error("probability and label counts differ");
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double diff = p[i] - (y[i] ? 1.0 : 0.0);
        total += diff * diff;
    }
    return total / static_cast<double>(p.size());
}

} // namespace uqeval
