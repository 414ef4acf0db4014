#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "uqeval/errors.hpp"

namespace uqeval {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
};

/// Decision rule is strictly greater-than, so threshold 1.0 predicts
/// all-negative.
inline ConfusionCounts confusion_at(std::span<const double> p,
                                    std::span<const std::uint8_t> y,
                                    double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw validation_error("threshold must lie in [0,1]");
    if (p.size() != y.size())
        throw validation_error("probability and label counts differ");
    ConfusionCounts c;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const bool predicted = p[i] > threshold;
        if (y[i]) {
            predicted ? ++c.tp : ++c.fn;
        } else {
            predicted ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

/// F1 = 2tp / (2tp + fp + fn); the degenerate 0/0 case scores 0.
inline double f1_score(std::size_t tp, std::size_t fp, std::size_t fn) {
    const double denom = static_cast<double>(2 * tp + fp + fn);
    if (denom == 0.0) return 0.0;
    return 2.0 * static_cast<double>(tp) / denom;
}

namespace detail {

struct ScoredLabel {
    double score;
    std::uint8_t label;
};

inline std::vector<ScoredLabel> sorted_ascending(std::span<const double> p,
                                                 std::span<const std::uint8_t> y) {
    if (p.size() != y.size())
        throw validation_error("probability and label counts differ");
    std::vector<ScoredLabel> items(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) items[i] = {p[i], y[i]};
    std::sort(items.begin(), items.end(),
              [](const ScoredLabel& a, const ScoredLabel& b) { return a.score < b.score; });
    return items;
}

inline std::pair<std::size_t, std::size_t> count_classes(std::span<const std::uint8_t> y) {
    std::size_t pos = 0;
    for (auto v : y) pos += v ? 1 : 0;
    return {pos, y.size() - pos};
}

} // namespace detail

/// Mann-Whitney AUROC with midrank tie handling: the probability that a
/// random positive outscores a random negative, ties counting one half.
inline double auroc(std::span<const double> p, std::span<const std::uint8_t> y) {
    const auto [n_pos, n_neg] = detail::count_classes(y);
    if (n_pos == 0 || n_neg == 0)
        throw validation_error("AUROC is undefined without both classes present");

    const auto items = detail::sorted_ascending(p, y);
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < items.size()) {
        std::size_t j = i + 1;
        while (j < items.size() && items[j].score == items[i].score) ++j;
        // ranks i+1 .. j share the midrank
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k)
            if (items[k].label) rank_sum_pos += midrank;
        i = j;
    }
    const double u = rank_sum_pos -
                     0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

struct RocPoint {
    double fpr;
    double tpr;
    double threshold; // operating point classifies score >= threshold positive
};

struct RocCurve {
    std::vector<RocPoint> points;

    /// Trapezoidal area; equals auroc() on the same data.
    double area() const {
        double total = 0.0;
        for (std::size_t i = 1; i < points.size(); ++i)
            total += (points[i].fpr - points[i - 1].fpr) *
                     (points[i].tpr + points[i - 1].tpr) * 0.5;
        return total;
    }
};

/// Threshold sweep over unique scores, descending; starts at (0,0) and ends
/// at (1,1).
inline RocCurve roc_curve(std::span<const double> p, std::span<const std::uint8_t> y) {
    const auto [n_pos, n_neg] = detail::count_classes(y);
    if (n_pos == 0 || n_neg == 0)
        throw validation_error("ROC curve is undefined without both classes present");

    auto items = detail::sorted_ascending(p, y);
    std::reverse(items.begin(), items.end());

    RocCurve curve;
    curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < items.size()) {
        std::size_t j = i;
        while (j < items.size() && items[j].score == items[i].score) {
            items[j].label ? ++tp : ++fp;
            ++j;
        }
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                                static_cast<double>(tp) / static_cast<double>(n_pos),
                                items[i].score});
        i = j;
    }
    return curve;
}

struct ThresholdChoice {
    std::size_t class_index = 0;
    double threshold = 0.0;
    double f1 = 0.0;
};

/// Maximizes F1 over all candidate cuts: 0, 1, and the midpoints between
/// consecutive distinct sorted scores. Ties break toward the smallest
/// threshold.
inline ThresholdChoice select_threshold(std::span<const double> p,
                                        std::span<const std::uint8_t> y) {
    const auto [n_pos, n_neg] = detail::count_classes(y);
    if (n_pos == 0)
        throw validation_error("threshold selection needs at least one positive label");

    const auto items = detail::sorted_ascending(p, y);
    const std::size_t n = items.size();
    // suffix_pos[i] = positives among items[i..)
    std::vector<std::size_t> suffix_pos(n + 1, 0);
    for (std::size_t i = n; i > 0; --i)
        suffix_pos[i - 1] = suffix_pos[i] + (items[i - 1].label ? 1 : 0);

    // F1 when everything with score > t is predicted positive and `idx` is the
    // first retained index.
    const auto f1_at_cut = [&](std::size_t idx) {
        const std::size_t tp = suffix_pos[idx];
        const std::size_t fp = (n - idx) - tp;
        const std::size_t fn = n_pos - tp;
        return f1_score(tp, fp, fn);
    };
    const auto first_index_above = [&](double t) {
        std::size_t lo = 0, hi = n;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (items[mid].score > t)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    };

    ThresholdChoice best{0, 0.0, f1_at_cut(first_index_above(0.0))};
    const auto consider = [&](double t) {
        const double f1 = f1_at_cut(first_index_above(t));
        if (f1 > best.f1) {
            best.threshold = t;
            best.f1 = f1;
        }
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (items[i].score == items[i + 1].score) continue;
        consider(0.5 * (items[i].score + items[i + 1].score));
    }
    consider(1.0);
    return best;
}

} // namespace uqeval
