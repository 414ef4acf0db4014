#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "uqeval/errors.hpp"

namespace uqeval {

struct FocalParams {
    double alpha = 1.0;
    double gamma = 2.0;
};

struct LossResult {
    double loss = 0.0;
    std::vector<double> gradient;
};

namespace detail {

inline double sigmoid(double s) {
    if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
    const double e = std::exp(s);
    return e / (1.0 + e);
}

inline void check_finite(std::span<const double> logits) {
    for (double s : logits)
        if (!std::isfinite(s)) throw validation_error("logits must be finite");
}

inline void check_sizes(std::span<const double> logits,
                        std::span<const std::uint8_t> labels) {
    if (logits.size() != labels.size())
        throw validation_error("logit and label counts differ");
}

} // namespace detail

inline constexpr double kFocalClamp = 1e-7;

/// Focal loss on sigmoid probabilities, mean-reduced over classes:
/// loss_k = -alpha * (1 - p_t)^gamma * ln(p_t) with p_t the probability
/// assigned to the true label, clamped to [1e-7, 1-1e-7]. The gradient is
/// zero wherever the clamp is active.
inline LossResult focal_loss(std::span<const double> logits,
                             std::span<const std::uint8_t> labels,
                             const FocalParams& params = {}) {
    detail::check_sizes(logits, labels);
    detail::check_finite(logits);
    if (params.alpha < 0.0 || params.gamma < 0.0)
        throw validation_error("focal parameters must be non-negative");

    LossResult result;
    result.gradient.assign(logits.size(), 0.0);
    if (logits.empty()) return result;

    const double inv_k = 1.0 / static_cast<double>(logits.size());
    for (std::size_t k = 0; k < logits.size(); ++k) {
        const double p = detail::sigmoid(logits[k]);
        const double raw_t = labels[k] ? p : 1.0 - p;
        const double t = std::clamp(raw_t, kFocalClamp, 1.0 - kFocalClamp);
        const double one_minus_t = 1.0 - t;
        const double focal_weight = std::pow(one_minus_t, params.gamma);
        result.loss += -params.alpha * focal_weight * std::log(t) * inv_k;

        if (raw_t != t) continue; // clamped: locally constant in s_k
        const double d_loss_d_t =
            params.alpha * params.gamma * std::pow(one_minus_t, params.gamma - 1.0) *
                std::log(t) -
            params.alpha * focal_weight / t;
        const double d_t_d_s = (labels[k] ? 1.0 : -1.0) * p * (1.0 - p);
        result.gradient[k] = d_loss_d_t * d_t_d_s * inv_k;
    }
    return result;
}

/// Zero-threshold log-sum-exp pairwise ranking loss:
/// ln(1 + sum_{pos} e^{-s_k}) + ln(1 + sum_{neg} e^{s_k}),
/// evaluated with a max shift that covers the implicit zero term, so large
/// |s| cannot overflow.
inline LossResult zlpr_loss(std::span<const double> logits,
                            std::span<const std::uint8_t> labels) {
    detail::check_sizes(logits, labels);
    detail::check_finite(logits);

    LossResult result;
    result.gradient.assign(logits.size(), 0.0);

    // positive term over -s_k, negative term over +s_k
    for (const bool positive_side : {true, false}) {
        double shift = 0.0;
        for (std::size_t k = 0; k < logits.size(); ++k) {
            if ((labels[k] != 0) != positive_side) continue;
            const double v = positive_side ? -logits[k] : logits[k];
            shift = std::max(shift, v);
        }
        double sum = std::exp(-shift); // the implicit e^0 term
        for (std::size_t k = 0; k < logits.size(); ++k) {
            if ((labels[k] != 0) != positive_side) continue;
            const double v = positive_side ? -logits[k] : logits[k];
            sum += std::exp(v - shift);
        }
        result.loss += shift + std::log(sum);
        for (std::size_t k = 0; k < logits.size(); ++k) {
            if ((labels[k] != 0) != positive_side) continue;
            const double v = positive_side ? -logits[k] : logits[k];
            const double weight = std::exp(v - shift) / sum;
            result.gradient[k] = positive_side ? -weight : weight;
        }
    }
    return result;
}

namespace detail {

inline double loss_value(double v) { return v; }
inline double loss_value(const LossResult& r) { return r.loss; }

} // namespace detail

/// Central-difference gradient oracle for any loss(logits, labels) callable
/// returning a double or a LossResult.
template <typename LossFn>
std::vector<double> finite_diff_gradient(LossFn&& loss_fn,
                                         std::span<const double> logits,
                                         std::span<const std::uint8_t> labels,
                                         double h = 1e-5) {
    if (!(h > 0.0)) throw validation_error("finite difference step must be positive");
    std::vector<double> bumped(logits.begin(), logits.end());
    std::vector<double> grad(logits.size(), 0.0);
    for (std::size_t k = 0; k < logits.size(); ++k) {
        const double original = bumped[k];
        bumped[k] = original + h;
        const double up = detail::loss_value(loss_fn(std::span<const double>(bumped), labels));
        bumped[k] = original - h;
        const double down = detail::loss_value(loss_fn(std::span<const double>(bumped), labels));
        bumped[k] = original;
        grad[k] = (up - down) / (2.0 * h);
    }
    return grad;
}

/// Gradient-check discrepancy: |a - b| / max(1, |a|, |b|) per coordinate,
/// reduced to the maximum.
inline double max_gradient_discrepancy(std::span<const double> analytic,
                                       std::span<const double> numeric) {
    double worst = 0.0;
    for (std::size_t k = 0; k < analytic.size(); ++k) {
        const double denom = std::max({1.0, std::abs(analytic[k]), std::abs(numeric[k])});
        worst = std::max(worst, std::abs(analytic[k] - numeric[k]) / denom);
    }
    return worst;
}

} // namespace uqeval
